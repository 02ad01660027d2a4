"""Deterministic parser for the controlled requirement grammar.

Grammar (documented bit-exactly in docs/formats.md)::

    req  := ("If" | "When" | "Given") cond (("AND" | "OR" | ",") cond)* ("then" | ", then") action
    cond := comparison | "<X> changes to <v>" | "<X> is not <word>" | "<X> is <v>"
    act  := "initiate <X>" | "<X> shall be set to <v>"

AND/comma bind tighter than OR.  A condition may restate a leading
If/When/Given keyword, which is skipped.  Out-of-grammar text is a hard
error pointing at the offending span; open natural language belongs to the
LLM formalizer, not to this parser.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError
from .ir import Formula, Implies, Signature, conjoin, disjoin
from .phrases import SignatureBuilder, parse_action, parse_condition

_KEYWORD_RE = re.compile(r"(If|When|Given)\s+(.*)$", re.DOTALL)
_THEN_RE = re.compile(r"\s*,?\s*\bthen\b\s*")
_OR_SPLIT_RE = re.compile(r"\s+OR\s+", re.IGNORECASE)
_AND_SPLIT_RE = re.compile(r"\s+AND\s+|\s*,\s*", re.IGNORECASE)
_LEADING_KEYWORD_RE = re.compile(r"^(?:If|When|Given)\s+")

# The non-strict comparator word forms contain the word "or"; fold them to
# their symbols before connective splitting so the list structure survives.
_COMPARATOR_FOLDS = (
    (re.compile(r"\bgreater\s+than\s+or\s+equal\s+to\b", re.IGNORECASE), "≥"),
    (re.compile(r"\bless\s+than\s+or\s+equal\s+to\b", re.IGNORECASE), "≤"),
)

_ID_LINE_RE = re.compile(r"id\s*:\s*(\S+)\s*$")
_TEXT_LINE_RE = re.compile(r"text\s*:\s*(.+)$")


@dataclass(frozen=True)
class RequirementDoc:
    """One natural-language requirement sentence plus its source span."""

    id: str
    text: str
    source_file: str = "<requirement>"
    line: int = 1

    def __post_init__(self):
        if not self.text.strip():
            raise ValueError("requirement text must be nonempty")


def load_requirements(text: str, source_file: str = "<requirement>") -> list[RequirementDoc]:
    """Read a requirement file in either supported layout.

    A file of ``id:`` / ``text:`` blocks separated by blank lines yields one
    doc per block; anything else is a bare sentence yielding a single doc.
    """

    if not text.strip():
        raise ParseError(f"{source_file} is empty")
    lines = text.split("\n")
    if not any(_ID_LINE_RE.match(line.strip()) for line in lines):
        stripped = " ".join(part.strip() for part in text.strip().split("\n"))
        first_line = next(i + 1 for i, line in enumerate(lines) if line.strip())
        return [RequirementDoc("req", stripped, source_file, first_line)]

    docs: list[RequirementDoc] = []
    current_id: str | None = None
    id_line = 0
    for index, raw in enumerate(lines):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        id_match = _ID_LINE_RE.match(line)
        if id_match:
            if current_id is not None:
                raise ParseError(f"id {current_id!r} has no text line", line=id_line)
            current_id = id_match.group(1)
            id_line = index + 1
            continue
        text_match = _TEXT_LINE_RE.match(line)
        if text_match:
            if current_id is None:
                raise ParseError("text line before any id line", line=index + 1)
            docs.append(RequirementDoc(current_id, text_match.group(1).strip(), source_file, index + 1))
            current_id = None
            continue
        raise ParseError(f"unrecognized requirement line: {line!r}", line=index + 1)
    if current_id is not None:
        raise ParseError(f"id {current_id!r} has no text line", line=id_line)
    if not docs:
        raise ParseError(f"{source_file} declares no requirements")
    return docs


def parse_requirement(doc: RequirementDoc) -> tuple[Formula, Signature]:
    """Compile a requirement sentence to one implication over a fresh
    signature: antecedent from the condition list, consequent from the
    action."""

    text = doc.text.strip().rstrip(".").strip()
    keyword = _KEYWORD_RE.match(text)
    if not keyword:
        raise ParseError(
            f"requirement {doc.id!r} must start with If, When, or Given",
            line=doc.line,
            column=1,
        )
    rest = keyword.group(2)
    then = _THEN_RE.search(rest)
    if not then:
        raise ParseError(
            f"requirement {doc.id!r}: expected 'then' before the action",
            line=doc.line,
            column=len(text),
        )
    cond_text = rest[: then.start()].strip()
    action_text = rest[then.end() :].strip()
    offset = keyword.start(2)
    if not cond_text:
        raise ParseError(
            f"requirement {doc.id!r}: empty condition list before 'then'",
            line=doc.line,
            column=offset + 1,
        )
    if not action_text:
        raise ParseError(
            f"requirement {doc.id!r}: missing action after 'then'",
            line=doc.line,
            column=len(text),
        )

    builder = SignatureBuilder(doc.source_file)
    for pattern, symbol in _COMPARATOR_FOLDS:
        cond_text = pattern.sub(symbol, cond_text)
    disjuncts = []
    for or_part in _OR_SPLIT_RE.split(cond_text):
        conjuncts = []
        for cond in _AND_SPLIT_RE.split(or_part):
            cond = _LEADING_KEYWORD_RE.sub("", cond.strip()).strip()
            if not cond:
                raise ParseError(
                    f"requirement {doc.id!r}: empty condition in the list",
                    line=doc.line,
                )
            conjuncts.append(parse_condition(cond, builder, doc.line))
        disjuncts.append(conjoin(conjuncts))
    antecedent = disjoin(disjuncts)
    consequent = parse_action(action_text, builder, doc.line)
    return Implies(antecedent, consequent), builder.build()
