"""Lean 4 emission and ingestion for the propositional subset.

Emitted definitions follow one fixed shape: an ``inductive`` declaration per
enum variable (``deriving DecidableEq``), ``variable`` binders, then a single
``def <name> : Prop :=`` whose body uses ``∧ ∨ ¬ → ↔`` and the comparison
operators.  Boolean atoms emit as ``x = true`` so boolean and enum atoms
share one equality shape.  Numeric variables emit as ``ℤ``; a unit label
survives round-trips in a trailing ``-- [unit: ...]`` binder comment.

The parser accepts that subset back, plus the ASCII spellings ``/\\ \\/ ->
<->`` and ``~``, ``Int``/``Nat`` folded to the integer sort, bare enum
constructors, and ``variable`` binders declaring several names at once.  It
rejects — with a named construct — anything beyond the subset: quantifiers,
lambdas, arithmetic, Real-typed binders.  Emitted theorem files state the
biconditional of two definitions with one named hypothesis per variable
alias, a ``sorry`` body for an external prover, and the fixed
``import Mathlib.Data.Real.Basic`` header.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import LeanParseError, SortMismatchError, UnsupportedLeanError
from .grounding import EMPTY_MAP, GroundingMap
from .ir import (
    And,
    BoolVar,
    CmpOp,
    EnumEq,
    Formula,
    Iff,
    Implies,
    Not,
    NumCmp,
    Or,
    Signature,
    Sort,
    SortKind,
    SourceSpan,
    VariableDecl,
    free_variables,
    normalize,
    validate_formula,
)
from .irtext import parse_atom

_LEAN_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")
_IMPORT_RE = re.compile(r"^\s*import\s+\S+\s*$")
_INDUCTIVE_RE = re.compile(r"^inductive\s+([A-Za-z_][A-Za-z0-9_']*)(?:\s+where)?\s*$")
_CTOR_RE = re.compile(r"^\|\s*([A-Za-z_][A-Za-z0-9_']*)\s*$")
_DERIVING_RE = re.compile(r"^deriving\s+DecidableEq\s*$")
_VARIABLE_RE = re.compile(
    r"^variable\s*\(\s*([A-Za-z_][A-Za-z0-9_' ]*?)\s*:\s*([^)]+?)\s*\)\s*"
    r"(?:--\s*\[unit:\s*(.*?)\s*\]\s*)?$"
)
_DEF_RE = re.compile(r"^def\s+([A-Za-z_][A-Za-z0-9_']*)\s*:\s*Prop\s*:=\s*(.*)$")
_STRUCTURAL_RE = re.compile(r"^(def|variable|inductive|theorem|lemma|example|import|namespace|end|open)\b")
_LINE_COMMENT_RE = re.compile(r"--.*$")
_BLOCK_COMMENT_RE = re.compile(r"/-.*?-/", re.DOTALL)

# Arithmetic (+ * /) needs no pattern here: those characters are not part of
# any token the body tokenizer accepts, so they surface as unsupported tokens.
_FORBIDDEN_PATTERNS: tuple[tuple[re.Pattern[str], str], ...] = (
    (re.compile(r"∀|\bforall\b"), "quantifier"),
    (re.compile(r"∃|\bexists\b|\bExists\b"), "quantifier"),
    (re.compile(r"λ|\bfun\b"), "lambda"),
    (re.compile(r"\bReal\b|ℝ"), "real-number type"),
)

_CMP_TOKENS = {
    "=": CmpOp.EQ,
    "≠": CmpOp.NE,
    "!=": CmpOp.NE,
    "≥": CmpOp.GE,
    ">=": CmpOp.GE,
    "≤": CmpOp.LE,
    "<=": CmpOp.LE,
    "<": CmpOp.LT,
    ">": CmpOp.GT,
}

_CMP_EMIT = {
    CmpOp.EQ: "=",
    CmpOp.NE: "≠",
    CmpOp.GE: "≥",
    CmpOp.LE: "≤",
    CmpOp.LT: "<",
    CmpOp.GT: ">",
}


def _camel(name: str) -> str:
    return "".join(part.capitalize() for part in name.split("_") if part)


def _enum_type_names(sig: Signature) -> dict[str, str]:
    taken: set[str] = set()
    out: dict[str, str] = {}
    for decl in sig.decls:
        if decl.sort.kind is not SortKind.ENUM:
            continue
        base = _camel(decl.name) or "Enum"
        candidate = base
        n = 1
        while candidate in taken:
            n += 1
            candidate = f"{base}T{n}"
        taken.add(candidate)
        out[decl.name] = candidate
    return out


def _inductive_block(type_name: str, values: tuple[str, ...]) -> list[str]:
    lines = [f"inductive {type_name} where"]
    lines += [f"  | {value}" for value in values]
    lines.append("  deriving DecidableEq")
    lines.append("")
    return lines


def _binder_line(name: str, sort: Sort, types: dict[str, str]) -> str:
    if sort.kind is SortKind.BOOL:
        type_text = "Bool"
    elif sort.kind is SortKind.NUMERIC:
        type_text = "ℤ"
    else:
        type_text = types[name]
    line = f"variable ({name} : {type_text})"
    if sort.kind is SortKind.NUMERIC and sort.unit is not None:
        line += f" -- [unit: {sort.unit}]"
    return line


def _render(f: Formula, types: dict[str, str]) -> str:
    match f:
        case BoolVar(var):
            return f"{var} = true"
        case EnumEq(var, value):
            return f"{var} = {types[var]}.{value}"
        case NumCmp(var, op, rhs):
            return f"{var} {_CMP_EMIT[op]} {rhs}"
        case Not(child):
            return f"¬({_render(child, types)})"
        case And(children):
            return " ∧ ".join(f"({_render(c, types)})" for c in children)
        case Or(children):
            return " ∨ ".join(f"({_render(c, types)})" for c in children)
        case Implies(left, right):
            return f"({_render(left, types)}) → ({_render(right, types)})"
        case Iff(left, right):
            return f"({_render(left, types)}) ↔ ({_render(right, types)})"
    raise TypeError(f"not a formula node: {f!r}")


def emit_lean_def(f: Formula, sig: Signature, name: str) -> str:
    """Emit a single proposition definition; output parses back to
    ``normalize(f)`` with the same signature."""

    if not _LEAN_IDENT_RE.match(name):
        raise ValueError(f"invalid Lean identifier: {name!r}")
    validate_formula(f, sig)
    types = _enum_type_names(sig)
    lines: list[str] = []
    for decl in sig.decls:
        if decl.sort.kind is SortKind.ENUM:
            lines += _inductive_block(types[decl.name], decl.sort.enum_values)
    lines += [_binder_line(d.name, d.sort, types) for d in sig.decls]
    lines.append("")
    lines.append(f"def {name} : Prop :=")
    lines.append(f"  {_render(normalize(f), types)}")
    return "\n".join(lines) + "\n"


# --- theorem emission -------------------------------------------------------------

def emit_lean_theorem(
    left: tuple[Formula, Signature],
    right: tuple[Formula, Signature],
    gmap: GroundingMap = EMPTY_MAP,
    *,
    name_a: str = "left_prop",
    name_b: str = "right_prop",
    theorem_name: str | None = None,
) -> str:
    """Emit both definitions plus the biconditional theorem.

    The two sides keep their own variable names: grounding becomes named
    equality hypotheses (one per variable alias) and iff-hypotheses (one per
    atom identification), mirroring manual grounding of a theorem rather
    than renaming.  Aliased or name-shared enum variables share one
    inductive type so the equality hypotheses typecheck.  The proof body is
    ``sorry``: discharging it is the external prover's job.
    """

    f_a, sig_a = left
    f_b, sig_b = right
    for name in (name_a, name_b):
        if not _LEAN_IDENT_RE.match(name):
            raise ValueError(f"invalid Lean identifier: {name!r}")
    if name_a == name_b:
        raise ValueError("the two definitions need distinct names")
    validate_formula(f_a, sig_a)
    validate_formula(f_b, sig_b)

    context = _TheoremContext.build(sig_a, sig_b, gmap)
    f_b = context.translate_right_values(f_b)

    lines = ["import Mathlib.Data.Real.Basic", ""]
    lines += context.inductive_lines
    lines += context.binder_lines
    lines.append("")
    lines.append("-- requirement 1")
    lines.append(f"def {name_a} : Prop :=")
    lines.append(f"  {_render(normalize(f_a), context.types)}")
    lines.append("")
    lines.append("-- gherkin output 1")
    lines.append(f"def {name_b} : Prop :=")
    lines.append(f"  {_render(normalize(f_b), context.types)}")
    lines.append("")

    tname = theorem_name or f"{name_a}_eq_{name_b}"
    if not _LEAN_IDENT_RE.match(tname):
        raise ValueError(f"invalid Lean identifier: {tname!r}")
    lines.append(f"theorem {tname}")
    for l, r in gmap.var_aliases:
        if l != r:
            lines.append(f"    (h_{l} : {l} = {r})")
    for i, (la_text, ra_text) in enumerate(gmap.atom_identifications, start=1):
        la = parse_atom(la_text, sig_a, source=f"identification {i}, left side")
        ra = context.translate_right_values(
            parse_atom(ra_text, sig_b, source=f"identification {i}, right side")
        )
        lines.append(
            f"    (h_atom_{i} : ({_render(la, context.types)}) ↔ ({_render(ra, context.types)}))"
        )
    args_a = "".join(f" {n}" for n in context.binder_order if n in free_variables(f_a))
    args_b = "".join(f" {n}" for n in context.binder_order if n in free_variables(f_b))
    lines.append("    :")
    lines.append(f"    ({name_a}{args_a}) ↔")
    lines.append(f"    ({name_b}{args_b}) := by")
    lines.append("  sorry")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class _TheoremContext:
    binder_order: tuple[str, ...]
    binder_lines: tuple[str, ...]
    inductive_lines: tuple[str, ...]
    types: dict[str, str]
    right_value_maps: dict[str, dict[str, str]]  # right var -> {right value: left value}

    @classmethod
    def build(cls, sig_a: Signature, sig_b: Signature, gmap: GroundingMap) -> _TheoremContext:
        # Group variables that must share a type: alias pairs and shared names.
        alias_of_right = {r: l for l, r in gmap.var_aliases}
        groups: dict[str, list[tuple[str, Sort, str]]] = {}  # leader -> (side, ...)

        def leader_for(side: str, name: str) -> str:
            if side == "R":
                if name in alias_of_right:
                    return alias_of_right[name]
                if name in sig_a:
                    return name
            return name

        for l, r in gmap.var_aliases:
            if l not in sig_a:
                raise SortMismatchError(f"alias references undeclared left variable {l!r}")
            if r not in sig_b:
                raise SortMismatchError(f"alias references undeclared right variable {r!r}")
            ka, kb = sig_a.sort_of(l).kind, sig_b.sort_of(r).kind
            if ka is not kb:
                raise SortMismatchError(
                    f"cannot alias {l!r} ({ka.value}) to {r!r} ({kb.value}): sort kinds differ"
                )
        for name in sig_b.names:
            if name in sig_a and name not in alias_of_right:
                ka, kb = sig_a.sort_of(name).kind, sig_b.sort_of(name).kind
                if ka is not kb:
                    raise SortMismatchError(
                        f"variables named {name!r} share a name but have different sort "
                        f"kinds ({ka.value} vs {kb.value})"
                    )

        value_aliases: dict[str, dict[str, str]] = {}
        for var, lv, rv in gmap.value_aliases:
            value_aliases.setdefault(var, {})[rv] = lv

        for decl in sig_a.decls:
            groups.setdefault(decl.name, []).append(("L", decl.name, decl.sort))
        for decl in sig_b.decls:
            groups.setdefault(leader_for("R", decl.name), []).append(("R", decl.name, decl.sort))

        types: dict[str, str] = {}
        right_value_maps: dict[str, dict[str, str]] = {}
        inductive_lines: list[str] = []
        taken_types: set[str] = set()
        # Left declarations first, then right-only ones; shared names once.
        binder_order = [d.name for d in sig_a.decls]
        binder_order += [d.name for d in sig_b.decls if d.name not in sig_a]

        binder_sorts: dict[str, Sort] = {}
        for leader, members in groups.items():
            kinds = {sort.kind for _, _, sort in members}
            kind = next(iter(kinds))
            if kind is SortKind.ENUM:
                translation = value_aliases.get(leader, {})
                values: list[str] = []
                for side, name, sort in members:
                    for v in sort.enum_values:
                        folded = translation.get(v, v) if side == "R" else v
                        if folded not in values:
                            values.append(folded)
                    if side == "R" and translation:
                        right_value_maps[name] = dict(translation)
                base = _camel(leader) or "Enum"
                type_name = base
                n = 1
                while type_name in taken_types:
                    n += 1
                    type_name = f"{base}T{n}"
                taken_types.add(type_name)
                inductive_lines += _inductive_block(type_name, tuple(values))
                group_sort = Sort.enumeration(tuple(values))
                for _, name, _ in members:
                    types[name] = type_name
                    binder_sorts[name] = group_sort
            elif kind is SortKind.NUMERIC:
                unit = next((s.unit for _, _, s in members if s.unit is not None), None)
                for _, name, _ in members:
                    binder_sorts[name] = Sort.numeric(unit)
            else:
                for _, name, _ in members:
                    binder_sorts[name] = Sort.boolean()

        binder_lines = [
            _binder_line(name, binder_sorts[name], types) for name in binder_order
        ]
        return cls(
            binder_order=tuple(binder_order),
            binder_lines=tuple(binder_lines),
            inductive_lines=tuple(inductive_lines),
            types=types,
            right_value_maps=right_value_maps,
        )

    def translate_right_values(self, f: Formula) -> Formula:
        from .ir import rename_enum_values

        for var, mapping in self.right_value_maps.items():
            f = rename_enum_values(f, var, mapping)
        return f


# --- parsing ------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+)
      | (?P<iff>↔|<->)
      | (?P<implies>→|->)
      | (?P<and>∧|/\\)
      | (?P<or>∨|\\/)
      | (?P<not>¬|~)
      | (?P<cmp>≥|≤|≠|>=|<=|!=|=|<|>)
      | (?P<lparen>\()
      | (?P<rparen>\))
      | (?P<number>-?[0-9]+)
      | (?P<ident>[A-Za-z_][A-Za-z0-9_']*(?:\.[A-Za-z_][A-Za-z0-9_']*)*)
      | (?P<other>\S)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    column: int


def parse_lean_def(text: str) -> tuple[Formula, Signature]:
    """Parse a Lean definition in the supported subset back into the IR.

    The text must contain at least one ``variable`` binder and exactly one
    ``def ... : Prop :=``.  Sorts are inferred from the binders; inductive
    declarations become enum sorts.
    """

    text = _BLOCK_COMMENT_RE.sub(" ", text)
    lines = text.split("\n")
    scan_text = "\n".join(l for l in lines if not _IMPORT_RE.match(l))
    scan_text = "\n".join(_LINE_COMMENT_RE.sub("", l) for l in scan_text.split("\n"))
    for pattern, construct in _FORBIDDEN_PATTERNS:
        if pattern.search(scan_text):
            raise UnsupportedLeanError(f"unsupported Lean construct: {construct}")

    enums: dict[str, tuple[str, ...]] = {}
    binders: list[tuple[str, str, str | None, int]] = []  # name, type text, unit, line
    def_name: str | None = None
    body_parts: list[str] = []
    body_line = 0
    in_body = False
    current_inductive: str | None = None
    current_ctors: list[str] = []

    def close_inductive(line_no: int) -> None:
        nonlocal current_inductive, current_ctors
        if current_inductive is None:
            return
        if len(current_ctors) < 2:
            raise LeanParseError(
                f"inductive {current_inductive} needs at least two constructors",
                line=line_no,
            )
        lowered = [c.lower() for c in current_ctors]
        if len(set(lowered)) != len(lowered):
            raise LeanParseError(
                f"inductive {current_inductive} has case-colliding constructors",
                line=line_no,
            )
        enums[current_inductive] = tuple(lowered)
        current_inductive = None
        current_ctors = []

    for index, raw in enumerate(lines):
        line_no = index + 1
        if _IMPORT_RE.match(raw):
            continue
        var_match = _VARIABLE_RE.match(raw.strip())
        stripped = _LINE_COMMENT_RE.sub("", raw).strip()
        if not stripped and not var_match:
            continue
        if current_inductive is not None:
            ctor = _CTOR_RE.match(stripped) if stripped else None
            if ctor:
                current_ctors.append(ctor.group(1))
                continue
            if stripped and _DERIVING_RE.match(stripped):
                close_inductive(line_no)
                continue
            close_inductive(line_no)
        if in_body:
            if stripped and not _STRUCTURAL_RE.match(stripped):
                body_parts.append(stripped)
                continue
            in_body = False
        if var_match:
            names_text, type_text, unit = var_match.groups()
            for name in names_text.split():
                binders.append((name, type_text.strip(), unit, line_no))
            continue
        if not stripped:
            continue
        ind_match = _INDUCTIVE_RE.match(stripped)
        if ind_match:
            current_inductive = ind_match.group(1)
            current_ctors = []
            continue
        def_match = _DEF_RE.match(stripped)
        if def_match:
            if def_name is not None:
                raise LeanParseError("more than one def statement", line=line_no)
            def_name = def_match.group(1)
            body_line = line_no
            first = def_match.group(2).strip()
            if first:
                body_parts.append(first)
            in_body = True
            continue
        raise UnsupportedLeanError(
            f"unsupported Lean construct: {stripped.split()[0]!r}", line=line_no
        )
    close_inductive(len(lines))

    if not binders:
        raise LeanParseError("no variable binders found")
    if def_name is None:
        raise LeanParseError("no `def <name> : Prop :=` found")
    body = " ".join(body_parts).strip()
    if not body:
        raise LeanParseError("definition has an empty body", line=body_line)

    decls: list[VariableDecl] = []
    provenance: dict[str, SourceSpan] = {}
    for name, type_text, unit, line_no in binders:
        lowered = name.lower()
        if any(d.name == lowered for d in decls):
            raise LeanParseError(f"duplicate binder for {name!r}", line=line_no)
        if type_text == "Bool":
            sort = Sort.boolean()
        elif type_text in ("ℤ", "Int", "Nat"):
            sort = Sort.numeric(unit)
        elif type_text in enums:
            sort = Sort.enumeration(enums[type_text])
        else:
            raise UnsupportedLeanError(
                f"unsupported Lean construct: binder type {type_text!r}", line=line_no
            )
        try:
            decls.append(VariableDecl(lowered, sort))
        except ValueError as exc:
            raise LeanParseError(str(exc), line=line_no) from None
        provenance[lowered] = SourceSpan("<lean>", line_no)
    sig = Signature(tuple(decls), provenance)

    tokens = _tokenize_body(body, body_line)
    formula = _BodyParser(tokens, sig, enums).parse()
    try:
        validate_formula(formula, sig)
    except Exception as exc:
        raise LeanParseError(str(exc), line=body_line) from None
    return formula, sig


def _tokenize_body(body: str, line_no: int) -> list[_Tok]:
    tokens: list[_Tok] = []
    for match in _TOKEN_RE.finditer(body):
        kind = match.lastgroup or "other"
        if kind == "ws":
            continue
        text = match.group()
        if kind == "other":
            raise UnsupportedLeanError(
                f"unsupported Lean construct: token {text!r}", line=line_no, column=match.start() + 1
            )
        tokens.append(_Tok(kind, text, line_no, match.start() + 1))
    return tokens


class _BodyParser:
    """Recursive-descent parser for the proposition body.

    Precedence, loosest first: ↔, →, ∨, ∧, ¬; → and ↔ associate right.
    ∧/∨ chains collect into the IR's n-ary nodes.
    """

    def __init__(self, tokens: list[_Tok], sig: Signature, enums: dict[str, tuple[str, ...]]):
        self.tokens = tokens
        self.pos = 0
        self.sig = sig
        self.enums = enums

    def parse(self) -> Formula:
        formula = self._iff()
        if self.pos != len(self.tokens):
            tok = self.tokens[self.pos]
            raise LeanParseError(
                f"trailing content {tok.text!r} in body", line=tok.line, column=tok.column
            )
        return formula

    def _peek(self) -> _Tok | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _take(self) -> _Tok:
        if self.pos >= len(self.tokens):
            raise LeanParseError("unexpected end of body")
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def _iff(self) -> Formula:
        left = self._implies()
        tok = self._peek()
        if tok and tok.kind == "iff":
            self._take()
            return Iff(left, self._iff())
        return left

    def _implies(self) -> Formula:
        left = self._or()
        tok = self._peek()
        if tok and tok.kind == "implies":
            self._take()
            return Implies(left, self._implies())
        return left

    def _or(self) -> Formula:
        parts = [self._and()]
        while (tok := self._peek()) and tok.kind == "or":
            self._take()
            parts.append(self._and())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def _and(self) -> Formula:
        parts = [self._unary()]
        while (tok := self._peek()) and tok.kind == "and":
            self._take()
            parts.append(self._unary())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def _unary(self) -> Formula:
        tok = self._peek()
        if tok and tok.kind == "not":
            self._take()
            return Not(self._unary())
        return self._atom()

    def _atom(self) -> Formula:
        tok = self._take()
        if tok.kind == "lparen":
            inner = self._iff()
            closing = self._take()
            if closing.kind != "rparen":
                raise LeanParseError(
                    f"expected ')', got {closing.text!r}", line=closing.line, column=closing.column
                )
            follow = self._peek()
            if follow and follow.kind == "cmp":
                raise LeanParseError(
                    "comparison of a parenthesized expression is outside the subset",
                    line=follow.line,
                    column=follow.column,
                )
            return inner
        if tok.kind not in ("ident", "number"):
            raise LeanParseError(
                f"unexpected token {tok.text!r}", line=tok.line, column=tok.column
            )
        follow = self._peek()
        if follow and follow.kind == "cmp":
            op_tok = self._take()
            rhs = self._take()
            if rhs.kind not in ("ident", "number"):
                raise LeanParseError(
                    f"bad comparison right-hand side {rhs.text!r}",
                    line=rhs.line,
                    column=rhs.column,
                )
            after = self._peek()
            if after and after.kind == "cmp":
                raise LeanParseError(
                    "chained comparisons are outside the subset",
                    line=after.line,
                    column=after.column,
                )
            return self._comparison(tok, _CMP_TOKENS[op_tok.text], rhs)
        if tok.kind == "number":
            raise LeanParseError(
                f"bare number {tok.text!r} is not a proposition", line=tok.line, column=tok.column
            )
        return self._bare_ident(tok)

    def _bare_ident(self, tok: _Tok) -> Formula:
        name = tok.text.lower()
        if "." in name or name in ("true", "false"):
            raise LeanParseError(
                f"{tok.text!r} is not a proposition by itself", line=tok.line, column=tok.column
            )
        if name not in self.sig:
            raise LeanParseError(
                f"undeclared identifier {tok.text!r}", line=tok.line, column=tok.column
            )
        if self.sig.sort_of(name).kind is not SortKind.BOOL:
            raise LeanParseError(
                f"{tok.text!r} used as a bare proposition but is not Bool",
                line=tok.line,
                column=tok.column,
            )
        return BoolVar(name)

    def _comparison(self, lhs: _Tok, op: CmpOp, rhs: _Tok) -> Formula:
        if lhs.kind != "ident" or "." in lhs.text:
            raise LeanParseError(
                f"comparison left-hand side must be a variable, got {lhs.text!r}",
                line=lhs.line,
                column=lhs.column,
            )
        var = lhs.text.lower()
        if var not in self.sig:
            raise LeanParseError(
                f"undeclared identifier {lhs.text!r}", line=lhs.line, column=lhs.column
            )
        sort = self.sig.sort_of(var)

        if sort.kind is SortKind.BOOL:
            if rhs.text.lower() not in ("true", "false") or op not in (CmpOp.EQ, CmpOp.NE):
                raise LeanParseError(
                    f"boolean {var!r} only compares to true/false with = or ≠",
                    line=rhs.line,
                    column=rhs.column,
                )
            positive = (rhs.text.lower() == "true") == (op is CmpOp.EQ)
            return BoolVar(var) if positive else Not(BoolVar(var))

        if sort.kind is SortKind.ENUM:
            if op not in (CmpOp.EQ, CmpOp.NE):
                raise LeanParseError(
                    f"enum {var!r} only supports = and ≠", line=rhs.line, column=rhs.column
                )
            if rhs.kind != "ident":
                raise LeanParseError(
                    f"enum comparison needs a constructor, got {rhs.text!r}",
                    line=rhs.line,
                    column=rhs.column,
                )
            value = rhs.text.rsplit(".", 1)[-1].lower()
            if value not in sort.enum_values:
                raise LeanParseError(
                    f"{rhs.text!r} is not a constructor of {var!r}'s type",
                    line=rhs.line,
                    column=rhs.column,
                )
            atom = EnumEq(var, value)
            return atom if op is CmpOp.EQ else Not(atom)

        if rhs.kind == "number":
            return NumCmp(var, op, int(rhs.text))
        if "." in rhs.text:
            raise LeanParseError(
                f"numeric comparison right-hand side {rhs.text!r} is not a variable",
                line=rhs.line,
                column=rhs.column,
            )
        rhs_name = rhs.text.lower()
        if rhs_name not in self.sig or self.sig.sort_of(rhs_name).kind is not SortKind.NUMERIC:
            raise LeanParseError(
                f"numeric comparison right-hand side {rhs.text!r} must be a numeric variable",
                line=rhs.line,
                column=rhs.column,
            )
        return NumCmp(var, op, rhs_name)
