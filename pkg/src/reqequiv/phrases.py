"""Shared phrase-to-atom compilation for the requirement and Gherkin frontends.

Noun phrases become snake-case variable names (leading articles dropped,
punctuation stripped).  Variable sorts are accumulated from usage through a
SignatureBuilder: comparison operands become numeric, true/false and
"initiate" contexts become boolean, and every other "is"/"changes to"/"set
to" value joins the variable's enum vocabulary.  A variable seen with only
one enum value gets a complement value appended at build time so its domain
stays contingent.
"""

from __future__ import annotations

import re

from .errors import ConflictingSortError, UnsupportedPhraseError
from .ir import (
    BoolVar,
    CmpOp,
    EnumEq,
    Formula,
    Not,
    NumCmp,
    Signature,
    Sort,
    SortKind,
    SourceSpan,
    VAR_NAME_RE,
    VariableDecl,
)

_WORD_RE = re.compile(r"[A-Za-z0-9]+")
_ARTICLES = ("the", "a", "an")
_INT_RE = re.compile(r"-?[0-9]+\Z")

# Ordered longest-match-first so "greater than or equal to" never parses as
# "greater than"; word forms map literally to strict or non-strict operators.
_COMPARATOR_PATTERNS: tuple[tuple[re.Pattern[str], CmpOp], ...] = (
    (re.compile(r"(?:\bis\s+)?(?:\bgreater\s+than\s+or\s+equal\s+to\b|\bat\s+least\b)|>=|≥", re.IGNORECASE), CmpOp.GE),
    (re.compile(r"(?:\bis\s+)?(?:\bless\s+than\s+or\s+equal\s+to\b|\bat\s+most\b)|<=|≤", re.IGNORECASE), CmpOp.LE),
    (re.compile(r"(?:\bis\s+)?\bnot\s+equal\s+to\b|!=|≠", re.IGNORECASE), CmpOp.NE),
    (re.compile(r"(?:\bis\s+)?\bgreater\s+than\b|>", re.IGNORECASE), CmpOp.GT),
    (re.compile(r"(?:\bis\s+)?\bless\s+than\b|<", re.IGNORECASE), CmpOp.LT),
    (re.compile(r"(?:\bis\s+)?\bequal\s+to\b|\bequals\b|=", re.IGNORECASE), CmpOp.EQ),
)

_TRAILING_IS_RE = re.compile(r"\s+is$", re.IGNORECASE)
_IS_RE = re.compile(r"^(?P<noun>.+?)\s+is\s+(?P<value>.+)$", re.IGNORECASE | re.DOTALL)
_CHANGES_RE = re.compile(r"^(?P<noun>.+?)\s+changes\s+to\s+(?P<value>.+)$", re.IGNORECASE | re.DOTALL)
_SET_RE = re.compile(r"^(?P<noun>.+?)\s+shall\s+be\s+set\s+to\s+(?P<value>.+)$", re.IGNORECASE | re.DOTALL)
_INITIATE_RE = re.compile(r"^initiate\s+(?P<noun>.+)$", re.IGNORECASE | re.DOTALL)
_NOT_WORD_RE = re.compile(r"^not\s+(\S+)$", re.IGNORECASE)


def snake_case(phrase: str, *, line: int | None = None) -> str:
    """Turn a noun phrase into a variable name."""

    words = [w.lower() for w in _WORD_RE.findall(phrase)]
    if words and words[0] in _ARTICLES and len(words) > 1:
        words = words[1:]
    if not words:
        raise UnsupportedPhraseError(f"cannot name anything in {phrase!r}", line=line)
    name = "_".join(words)
    if not VAR_NAME_RE.match(name):
        name = f"v_{name}"
    return name


def value_name(phrase: str, *, line: int | None = None) -> str:
    """Turn a value phrase into an enum value name."""

    words = [w.lower() for w in _WORD_RE.findall(phrase)]
    if not words:
        raise UnsupportedPhraseError(f"cannot read a value from {phrase!r}", line=line)
    return "_".join(words)


def is_truth_word(phrase: str) -> bool:
    words = _WORD_RE.findall(phrase)
    return len(words) == 1 and words[0].lower() in ("true", "false")


def truth_value(phrase: str) -> bool:
    return _WORD_RE.findall(phrase)[0].lower() == "true"


class SignatureBuilder:
    """Accumulates variable sorts from phrase usage, in first-use order."""

    def __init__(self, source_file: str = "<input>"):
        self.source_file = source_file
        self._order: list[str] = []
        self._kinds: dict[str, SortKind] = {}
        self._enum_values: dict[str, list[str]] = {}
        self._lines: dict[str, int] = {}

    def _note(self, name: str, kind: SortKind, line: int) -> None:
        seen = self._kinds.get(name)
        if seen is None:
            self._order.append(name)
            self._kinds[name] = kind
            self._lines[name] = line
        elif seen is not kind:
            raise ConflictingSortError(
                f"variable {name!r} is used both as {seen.value} and as {kind.value}",
                line=line,
            )

    def note_bool(self, name: str, line: int = 0) -> None:
        self._note(name, SortKind.BOOL, line)

    def note_numeric(self, name: str, line: int = 0) -> None:
        self._note(name, SortKind.NUMERIC, line)

    def note_enum(self, name: str, value: str, line: int = 0) -> None:
        self._note(name, SortKind.ENUM, line)
        values = self._enum_values.setdefault(name, [])
        if value not in values:
            values.append(value)

    def build(self) -> Signature:
        decls = []
        provenance = {}
        for name in self._order:
            kind = self._kinds[name]
            if kind is SortKind.BOOL:
                sort = Sort.boolean()
            elif kind is SortKind.NUMERIC:
                sort = Sort.numeric()
            else:
                sort = Sort.enumeration(self._pad_values(self._enum_values[name]))
            decls.append(VariableDecl(name, sort))
            provenance[name] = SourceSpan(self.source_file, self._lines[name])
        return Signature(tuple(decls), provenance)

    @staticmethod
    def _pad_values(values: list[str]) -> list[str]:
        # A one-value enum would make its equality atom a tautology.
        if len(values) >= 2:
            return values
        pad = "other"
        n = 1
        while pad in values:
            n += 1
            pad = f"other_{n}"
        return values + [pad]


def parse_condition(text: str, builder: SignatureBuilder, line: int = 0) -> Formula:
    """Compile one condition phrase to an atom (possibly negated).

    Supported shapes: comparisons (symbols or word forms, optionally after
    "is"), "<X> changes to <value>", "<X> is not <single-word value>",
    "<X> is <value>" where a true/false value selects boolean polarity and
    anything else joins X's enum vocabulary.  Multiword values that merely
    start with "not" (as in "not plugged in") are enum values, not negations.
    """

    text = text.strip()
    if not text:
        raise UnsupportedPhraseError("empty condition", line=line)

    comparison = _try_comparison(text, builder, line)
    if comparison is not None:
        return comparison

    match = _CHANGES_RE.match(text)
    if match:
        var = snake_case(match.group("noun"), line=line)
        value = value_name(match.group("value"), line=line)
        builder.note_enum(var, value, line)
        return EnumEq(var, value)

    match = _IS_RE.match(text)
    if match:
        var = snake_case(match.group("noun"), line=line)
        value_phrase = match.group("value").strip()
        if is_truth_word(value_phrase):
            builder.note_bool(var, line)
            return BoolVar(var) if truth_value(value_phrase) else Not(BoolVar(var))
        negated = _NOT_WORD_RE.match(value_phrase)
        if negated:
            inner = negated.group(1)
            if is_truth_word(inner):
                builder.note_bool(var, line)
                return Not(BoolVar(var)) if truth_value(inner) else BoolVar(var)
            value = value_name(inner, line=line)
            builder.note_enum(var, value, line)
            return Not(EnumEq(var, value))
        value = value_name(value_phrase, line=line)
        builder.note_enum(var, value, line)
        return EnumEq(var, value)

    raise UnsupportedPhraseError(f"unsupported condition phrase: {text!r}", line=line)


def _try_comparison(text: str, builder: SignatureBuilder, line: int) -> Formula | None:
    for pattern, op in _COMPARATOR_PATTERNS:
        match = pattern.search(text)
        if not match:
            continue
        lhs_text = _TRAILING_IS_RE.sub("", text[: match.start()].strip())
        rhs_text = text[match.end() :].strip()
        if not lhs_text or not rhs_text:
            raise UnsupportedPhraseError(
                f"comparison is missing an operand: {text!r}", line=line
            )
        var = snake_case(lhs_text, line=line)
        builder.note_numeric(var, line)
        if _INT_RE.match(rhs_text):
            return NumCmp(var, op, int(rhs_text))
        rhs = snake_case(rhs_text, line=line)
        builder.note_numeric(rhs, line)
        return NumCmp(var, op, rhs)
    return None


def parse_action(text: str, builder: SignatureBuilder, line: int = 0) -> Formula:
    """Compile an action phrase: "initiate <X>" or "<X> shall be set to <v>"."""

    text = text.strip().rstrip(".")
    if not text:
        raise UnsupportedPhraseError("empty action", line=line)

    match = _INITIATE_RE.match(text)
    if match:
        var = snake_case(match.group("noun"), line=line)
        builder.note_bool(var, line)
        return BoolVar(var)

    match = _SET_RE.match(text)
    if match:
        var = snake_case(match.group("noun"), line=line)
        value_phrase = match.group("value").strip()
        if is_truth_word(value_phrase):
            builder.note_bool(var, line)
            return BoolVar(var) if truth_value(value_phrase) else Not(BoolVar(var))
        value = value_name(value_phrase, line=line)
        builder.note_enum(var, value, line)
        return EnumEq(var, value)

    raise UnsupportedPhraseError(f"unsupported action phrase: {text!r}", line=line)
