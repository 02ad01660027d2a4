"""Variable grounding: merging two formalizations into one signature.

A grounding map declares which differently named variables, enum values, and
whole atoms on the two sides denote the same thing.  Application is
directional: right-side names are rewritten into the left side's namespace,
name-identical variables merge automatically, and identified atom pairs are
replaced on both sides by a single fresh boolean variable (an opaque
identification — the honest way to state, e.g., that a non-strict and a
strict wording of one threshold comparison were meant as the same check).

Ungrounded variables are a warning, not an error: the equivalence check
still runs, the extra variables simply widen the domain.  Aliasing variables
whose sort kinds differ is a hard error.

Map file format (``#`` comments allowed, also trailing after two spaces)::

    var <left> = <right>
    value <var>: <left-value> = <right-value>
    atom <left-atom-sexpr> = <right-atom-sexpr>

Candidate aliases can be suggested from name similarity: token-set Jaccard
over snake-case tokens with a small documented synonym table.  This is a
deterministic stand-in for embedding-based matching; any scorer with the
same (left, right) -> [0, 1] contract can be plugged in.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

from .errors import (
    AliasToUndeclaredError,
    MalformedGroundingError,
    SortMismatchError,
)
from .ir import (
    BoolVar,
    Formula,
    Signature,
    Sort,
    SortKind,
    SourceSpan,
    VAR_NAME_RE,
    VALUE_NAME_RE,
    VariableDecl,
    rename_enum_values,
    rename_variables,
    replace_atoms,
    validate_formula,
)
from .irtext import parse_atom

DEFAULT_SUGGESTION_THRESHOLD = 0.34

#: Token synonym groups folded before Jaccard scoring; each token maps to the
#: alphabetically first member of its group.
SYNONYM_GROUPS: tuple[frozenset[str], ...] = (
    frozenset({"average", "avg", "mean"}),
    frozenset({"belt", "seatbelt"}),
    frozenset({"car", "vehicle"}),
    frozenset({"speed", "velocity"}),
)

_CANONICAL_TOKEN = {token: min(group) for group in SYNONYM_GROUPS for token in group}

_VAR_LINE_RE = re.compile(r"var\s+(\S+)\s*=\s*(\S+)\s*$")
_VALUE_LINE_RE = re.compile(r"value\s+(\S+)\s*:\s*(\S+)\s*=\s*(\S+)\s*$")


@dataclass(frozen=True)
class GroundingMap:
    """Alias declarations connecting a left and a right formalization."""

    var_aliases: tuple[tuple[str, str], ...] = ()
    value_aliases: tuple[tuple[str, str, str], ...] = ()  # (variable, left, right)
    atom_identifications: tuple[tuple[str, str], ...] = ()  # S-expression texts

    def __post_init__(self):
        lefts = [l for l, _ in self.var_aliases]
        rights = [r for _, r in self.var_aliases]
        for name, mapped in (("left", lefts), ("right", rights)):
            if len(set(mapped)) != len(mapped):
                dupe = next(x for i, x in enumerate(mapped) if x in mapped[:i])
                raise ValueError(
                    f"variable aliases must be a partial bijection; {name} name {dupe!r} repeats"
                )


EMPTY_MAP = GroundingMap()


@dataclass(frozen=True)
class Suggestion:
    left: str
    right: str
    score: float


@dataclass(frozen=True)
class SortMismatch:
    left: str
    left_kind: str
    right: str
    right_kind: str


@dataclass(frozen=True)
class GroundingDiagnostics:
    ungrounded_left: tuple[str, ...]
    ungrounded_right: tuple[str, ...]
    sort_mismatches: tuple[SortMismatch, ...]
    suggestions: tuple[Suggestion, ...]
    renames: tuple[tuple[str, str], ...]  # (right original, merged name)


@dataclass(frozen=True)
class GroundingResult:
    formula_a: Formula
    formula_b: Formula
    signature: Signature
    diagnostics: GroundingDiagnostics


def parse_grounding_map(text: str, source_file: str = "<grounding>") -> GroundingMap:
    """Parse the line-oriented grounding map format."""

    var_aliases: list[tuple[str, str]] = []
    value_aliases: list[tuple[str, str, str]] = []
    atom_idents: list[tuple[str, str]] = []
    for index, raw in enumerate(text.split("\n")):
        line_no = index + 1
        line = _strip_comment(raw).strip()
        if not line:
            continue
        if line.startswith("var "):
            match = _VAR_LINE_RE.match(line)
            if not match:
                raise MalformedGroundingError("malformed var alias", line=line_no)
            left, right = match.groups()
            for name in (left, right):
                if not VAR_NAME_RE.match(name):
                    raise MalformedGroundingError(
                        f"invalid variable name {name!r}", line=line_no
                    )
            var_aliases.append((left, right))
        elif line.startswith("value "):
            match = _VALUE_LINE_RE.match(line)
            if not match:
                raise MalformedGroundingError("malformed value alias", line=line_no)
            var, left, right = match.groups()
            if not VAR_NAME_RE.match(var):
                raise MalformedGroundingError(f"invalid variable name {var!r}", line=line_no)
            for value in (left, right):
                if not VALUE_NAME_RE.match(value):
                    raise MalformedGroundingError(
                        f"invalid value name {value!r}", line=line_no
                    )
            value_aliases.append((var, left, right))
        elif line.startswith("atom "):
            atom_idents.append(_split_atom_line(line[len("atom ") :], line_no))
        else:
            raise MalformedGroundingError(
                f"unrecognized grounding line: {line!r}", line=line_no
            )
    try:
        return GroundingMap(tuple(var_aliases), tuple(value_aliases), tuple(atom_idents))
    except ValueError as exc:
        raise MalformedGroundingError(str(exc)) from None


def _strip_comment(line: str) -> str:
    if line.lstrip().startswith("#"):
        return ""
    cut = line.find(" #")
    return line[:cut] if cut >= 0 else line


def _split_atom_line(rest: str, line_no: int) -> tuple[str, str]:
    rest = rest.strip()
    left, remainder = _take_balanced(rest, line_no)
    remainder = remainder.lstrip()
    if not remainder.startswith("="):
        raise MalformedGroundingError(
            "atom identification needs '=' between the two atoms", line=line_no
        )
    right, tail = _take_balanced(remainder[1:].lstrip(), line_no)
    if tail.strip():
        raise MalformedGroundingError(
            f"trailing content after atom identification: {tail.strip()!r}", line=line_no
        )
    return left, right


def _take_balanced(text: str, line_no: int) -> tuple[str, str]:
    if not text.startswith("("):
        raise MalformedGroundingError(
            "atom identification sides must be parenthesized S-expressions", line=line_no
        )
    depth = 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth == 0:
                return text[: i + 1], text[i + 1 :]
    raise MalformedGroundingError("unbalanced parentheses in atom", line=line_no)


def serialize_grounding_map(gmap: GroundingMap) -> str:
    lines = [f"var {l} = {r}" for l, r in gmap.var_aliases]
    lines += [f"value {v}: {l} = {r}" for v, l, r in gmap.value_aliases]
    lines += [f"atom {l} = {r}" for l, r in gmap.atom_identifications]
    return "\n".join(lines) + ("\n" if lines else "")


# --- similarity-based suggestions ---------------------------------------------

def _tokens(name: str) -> frozenset[str]:
    return frozenset(
        _CANONICAL_TOKEN.get(tok, tok) for tok in name.split("_") if tok
    )


def token_similarity(left: str, right: str) -> float:
    """Jaccard similarity of synonym-folded snake-case token sets."""

    a, b = _tokens(left), _tokens(right)
    if not a or not b:
        return 0.0
    return len(a & b) / len(a | b)


def suggest_grounding(
    sig_a: Signature,
    sig_b: Signature,
    *,
    threshold: float = DEFAULT_SUGGESTION_THRESHOLD,
    scorer: Callable[[str, str], float] = token_similarity,
) -> tuple[Suggestion, ...]:
    """Ranked cross-signature alias candidates scoring at or above the
    threshold; descending score, ties broken lexicographically."""

    out = []
    for left in sig_a.names:
        for right in sig_b.names:
            score = scorer(left, right)
            if score >= threshold:
                out.append(Suggestion(left, right, score))
    out.sort(key=lambda s: (-s.score, s.left, s.right))
    return tuple(out)


def format_suggestion_draft(
    suggestions: tuple[Suggestion, ...],
    *,
    threshold: float = DEFAULT_SUGGESTION_THRESHOLD,
) -> str:
    """Render suggestions as a draft grounding map.

    Identical names merge without any alias, so those pairs are emitted as
    comments; every other pair becomes a reviewable ``var`` line.
    """

    lines = ["# draft grounding map — review before use"]
    if not suggestions:
        lines.append(f"# no candidate aliases at or above threshold {threshold}")
    for s in suggestions:
        if s.left == s.right:
            lines.append(f"# {s.left} appears on both sides (score {s.score:.2f}); merges automatically")
        else:
            lines.append(f"var {s.left} = {s.right}  # score {s.score:.2f}")
    return "\n".join(lines) + "\n"


# --- application -----------------------------------------------------------------

def apply_grounding(
    left: tuple[Formula, Signature],
    right: tuple[Formula, Signature],
    gmap: GroundingMap = EMPTY_MAP,
    *,
    suggestion_threshold: float = DEFAULT_SUGGESTION_THRESHOLD,
) -> GroundingResult:
    """Merge two (formula, signature) pairs through a grounding map.

    Returns both formulas rewritten into the merged namespace, the merged
    signature, and diagnostics (ungrounded variables per side, kind-level
    sort mismatches among suggested pairs, alias suggestions, applied
    renames).
    """

    formula_a, sig_a = left
    formula_b, sig_b = right
    validate_formula(formula_a, sig_a)
    validate_formula(formula_b, sig_b)

    for l, r in gmap.var_aliases:
        if l not in sig_a:
            raise AliasToUndeclaredError(f"alias references undeclared left variable {l!r}")
        if r not in sig_b:
            raise AliasToUndeclaredError(f"alias references undeclared right variable {r!r}")
        kind_l, kind_r = sig_a.sort_of(l).kind, sig_b.sort_of(r).kind
        if kind_l is not kind_r:
            raise SortMismatchError(
                f"cannot alias {l!r} ({kind_l.value}) to {r!r} ({kind_r.value}): "
                "sort kinds differ"
            )

    rename = {r: l for l, r in gmap.var_aliases if r != l}
    aliased_left = {l for l, _ in gmap.var_aliases}
    aliased_right = {r for _, r in gmap.var_aliases}

    # Name-identical variables merge automatically; their kinds must agree.
    for name in sig_b.names:
        if name in sig_a and name not in aliased_right:
            kind_l, kind_r = sig_a.sort_of(name).kind, sig_b.sort_of(name).kind
            if kind_l is not kind_r:
                raise SortMismatchError(
                    f"variables named {name!r} share a name but have different sort "
                    f"kinds ({kind_l.value} vs {kind_r.value})"
                )

    value_map = _validate_value_aliases(gmap, sig_a, sig_b, rename)

    new_formula_b = rename_variables(formula_b, rename)
    for var, mapping in value_map.items():
        new_formula_b = rename_enum_values(new_formula_b, var, mapping)

    merged = _merge_signatures(sig_a, sig_b, rename, value_map)

    new_formula_a = formula_a
    if gmap.atom_identifications:
        new_formula_a, new_formula_b, merged = _identify_atoms(
            gmap, sig_a, sig_b, rename, value_map, new_formula_a, new_formula_b, merged
        )

    suggestions = suggest_grounding(sig_a, sig_b, threshold=suggestion_threshold)
    ungrounded_left = tuple(
        n for n in sig_a.names if n not in aliased_left and n not in sig_b.names
    )
    ungrounded_right = tuple(
        n for n in sig_b.names if n not in aliased_right and n not in sig_a.names
    )
    mismatches = tuple(
        SortMismatch(
            s.left,
            sig_a.sort_of(s.left).kind.value,
            s.right,
            sig_b.sort_of(s.right).kind.value,
        )
        for s in suggestions
        if sig_a.sort_of(s.left).kind is not sig_b.sort_of(s.right).kind
    )
    relevant = tuple(
        s
        for s in suggestions
        if s.left in ungrounded_left or s.right in ungrounded_right
    )
    diagnostics = GroundingDiagnostics(
        ungrounded_left=ungrounded_left,
        ungrounded_right=ungrounded_right,
        sort_mismatches=mismatches,
        suggestions=relevant,
        renames=tuple((r, l) for l, r in gmap.var_aliases if r != l),
    )
    return GroundingResult(new_formula_a, new_formula_b, merged, diagnostics)


def _validate_value_aliases(
    gmap: GroundingMap, sig_a: Signature, sig_b: Signature, rename: dict[str, str]
) -> dict[str, dict[str, str]]:
    """Value aliases keyed by merged variable name; values map right->left."""

    inverse = {l: r for r, l in rename.items()}
    out: dict[str, dict[str, str]] = {}
    for var, left_value, right_value in gmap.value_aliases:
        if var not in sig_a:
            raise AliasToUndeclaredError(
                f"value alias references undeclared variable {var!r}"
            )
        right_var = inverse.get(var, var)
        if right_var not in sig_b:
            raise AliasToUndeclaredError(
                f"value alias variable {var!r} has no right-side counterpart"
            )
        sort_a, sort_b = sig_a.sort_of(var), sig_b.sort_of(right_var)
        if sort_a.kind is not SortKind.ENUM or sort_b.kind is not SortKind.ENUM:
            raise SortMismatchError(
                f"value alias needs enum variables, {var!r} is "
                f"{sort_a.kind.value}/{sort_b.kind.value}"
            )
        if left_value not in sort_a.enum_values:
            raise AliasToUndeclaredError(
                f"value {left_value!r} is not declared for left variable {var!r}"
            )
        if right_value not in sort_b.enum_values:
            raise AliasToUndeclaredError(
                f"value {right_value!r} is not declared for right variable {right_var!r}"
            )
        mapping = out.setdefault(var, {})
        if mapping.get(right_value, left_value) != left_value:
            raise MalformedGroundingError(
                f"value {right_value!r} of {var!r} is aliased to two different values"
            )
        mapping[right_value] = left_value
    return out


def _merge_signatures(
    sig_a: Signature,
    sig_b: Signature,
    rename: dict[str, str],
    value_map: dict[str, dict[str, str]],
) -> Signature:
    right_sorts: dict[str, Sort] = {}
    right_spans: dict[str, SourceSpan] = {}
    for decl in sig_b.decls:
        name = rename.get(decl.name, decl.name)
        right_sorts[name] = decl.sort
        span = sig_b.provenance.get(decl.name)
        if span is not None:
            right_spans[name] = span

    decls: list[VariableDecl] = []
    provenance: dict[str, SourceSpan] = {}
    for decl in sig_a.decls:
        sort = decl.sort
        counterpart = right_sorts.pop(decl.name, None)
        if counterpart is not None and sort.kind is SortKind.ENUM:
            translation = value_map.get(decl.name, {})
            extra = [
                translation.get(v, v)
                for v in counterpart.enum_values
                if translation.get(v, v) not in sort.enum_values
            ]
            if extra:
                sort = Sort.enumeration(tuple(sort.enum_values) + tuple(dict.fromkeys(extra)))
        elif counterpart is not None and sort.kind is SortKind.NUMERIC and sort.unit is None:
            sort = Sort.numeric(counterpart.unit)
        decls.append(VariableDecl(decl.name, sort))
        span = sig_a.provenance.get(decl.name)
        if span is not None:
            provenance[decl.name] = span

    for decl in sig_b.decls:
        name = rename.get(decl.name, decl.name)
        if name not in right_sorts:
            continue  # merged into a left declaration above
        right_sorts.pop(name)
        decls.append(VariableDecl(name, decl.sort))
        if name in right_spans:
            provenance[name] = right_spans[name]
    return Signature(tuple(decls), provenance)


def _identify_atoms(
    gmap: GroundingMap,
    sig_a: Signature,
    sig_b: Signature,
    rename: dict[str, str],
    value_map: dict[str, dict[str, str]],
    formula_a: Formula,
    formula_b: Formula,
    merged: Signature,
) -> tuple[Formula, Formula, Signature]:
    taken = set(merged.names)
    decls = list(merged.decls)
    provenance = dict(merged.provenance)
    replacements: dict[Formula, Formula] = {}
    for i, (left_text, right_text) in enumerate(gmap.atom_identifications, start=1):
        try:
            left_atom = parse_atom(left_text, sig_a, source=f"identification {i}, left side")
            right_atom = parse_atom(right_text, sig_b, source=f"identification {i}, right side")
        except Exception as exc:
            raise MalformedGroundingError(f"bad atom identification {i}: {exc}") from exc
        right_atom = rename_variables(right_atom, rename)
        for var, mapping in value_map.items():
            right_atom = rename_enum_values(right_atom, var, mapping)
        fresh = f"atom_ident_{i}"
        n = i
        while fresh in taken:
            n += 1
            fresh = f"atom_ident_{n}"
        taken.add(fresh)
        decls.append(VariableDecl(fresh, Sort.boolean()))
        stand_in = BoolVar(fresh)
        replacements[left_atom] = stand_in
        replacements[right_atom] = stand_in
    formula_a = replace_atoms(formula_a, replacements)
    formula_b = replace_atoms(formula_b, replacements)
    return formula_a, formula_b, Signature(tuple(decls), provenance)
