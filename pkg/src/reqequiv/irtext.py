"""Text format for (formula, signature) pairs.

One file holds one formula::

    var speed : numeric[km/h]
    var belt_status : enum{fastened,unfastened}
    var chime : bool

    (implies (or (>= speed 10) (= belt_status unfastened)) chime)

Header lines declare variables; after a blank line one S-expression gives the
formula.  Connective keywords are ``and or not implies iff``; atoms are a bare
name for a boolean variable, ``(= var value)`` for enums, and a comparison
``(< <= = >= > !=)`` against an integer or a second numeric variable.  Two
sugars are accepted on input: ``(= b true)`` / ``(= b false)`` for a boolean
variable, and ``(!= var value)`` for a negated enum equality.  ``#`` starts a
comment line.  Files are UTF-8 with LF line endings.
"""

from __future__ import annotations

import re
from typing import Iterator, NamedTuple

from .errors import MalformedIrError
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
    VAR_NAME_RE,
    VALUE_NAME_RE,
    VariableDecl,
    formula_to_sexpr,
    normalize,
)

_VAR_LINE_RE = re.compile(r"var\s+(\S+)\s*:\s*(.+?)\s*$")
_ENUM_SORT_RE = re.compile(r"enum\{([^{}]*)\}\Z")
_NUMERIC_SORT_RE = re.compile(r"numeric(?:\[([^\]]*)\])?\Z")
_INT_RE = re.compile(r"-?[0-9]+\Z")

_CMP_BY_SYMBOL = {op.symbol: op for op in CmpOp}
_CONNECTIVES = {"and", "or", "not", "implies", "iff"}


class Token(NamedTuple):
    text: str
    line: int
    column: int


def serialize_ir(f: Formula, sig: Signature) -> str:
    """Render the pair in the text format; the formula is normalized first,
    so serialize/parse round-trips to the canonical form."""

    lines = [f"var {decl.name} : {_sort_text(decl.sort)}" for decl in sig.decls]
    lines.append("")
    lines.append(formula_to_sexpr(normalize(f)))
    return "\n".join(lines) + "\n"


def _sort_text(sort: Sort) -> str:
    if sort.kind is SortKind.BOOL:
        return "bool"
    if sort.kind is SortKind.ENUM:
        return "enum{" + ",".join(sort.enum_values) + "}"
    return f"numeric[{sort.unit}]" if sort.unit is not None else "numeric"


def parse_ir(text: str, source_file: str = "<ir>") -> tuple[Formula, Signature]:
    """Parse the text format back into a (formula, signature) pair."""

    if not text.strip():
        raise MalformedIrError("empty input")

    decls: list[VariableDecl] = []
    provenance: dict[str, SourceSpan] = {}
    lines = text.split("\n")
    body_start = None
    for index, line in enumerate(lines):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if stripped.startswith("var ") or stripped == "var":
            match = _VAR_LINE_RE.match(stripped)
            if not match:
                raise MalformedIrError("malformed variable declaration", line=index + 1)
            name, sort_text = match.groups()
            if not VAR_NAME_RE.match(name):
                raise MalformedIrError(f"invalid variable name {name!r}", line=index + 1)
            if any(d.name == name for d in decls):
                raise MalformedIrError(f"duplicate declaration of {name!r}", line=index + 1)
            decls.append(VariableDecl(name, _parse_sort(sort_text, index + 1)))
            provenance[name] = SourceSpan(source_file, index + 1)
        else:
            body_start = index
            break
    if body_start is None:
        raise MalformedIrError("missing formula after declarations", line=len(lines))

    sig = Signature(tuple(decls), provenance)
    tokens = list(_tokenize("\n".join(lines[body_start:]), first_line=body_start + 1))
    formula, rest = _parse_expr(tokens, 0, sig)
    for token in tokens[rest:]:
        if not token.text.startswith("#"):
            raise MalformedIrError(
                f"trailing content {token.text!r} after formula",
                line=token.line,
                column=token.column,
            )
    return formula, sig


def _parse_sort(sort_text: str, line: int) -> Sort:
    if sort_text == "bool":
        return Sort.boolean()
    match = _NUMERIC_SORT_RE.match(sort_text)
    if match:
        unit = match.group(1)
        return Sort.numeric(unit if unit else None)
    match = _ENUM_SORT_RE.match(sort_text)
    if match:
        values = tuple(v.strip() for v in match.group(1).split(","))
        if len(values) < 2 or any(not v for v in values):
            raise MalformedIrError("enum sorts need at least two value names", line=line)
        for value in values:
            if not VALUE_NAME_RE.match(value):
                raise MalformedIrError(f"invalid enum value name {value!r}", line=line)
        if len(set(values)) != len(values):
            raise MalformedIrError("duplicate enum value names", line=line)
        return Sort.enumeration(values)
    raise MalformedIrError(f"unknown sort {sort_text!r}", line=line)


def _tokenize(text: str, first_line: int = 1) -> Iterator[Token]:
    line = first_line
    column = 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            column = 1
            i += 1
        elif ch.isspace():
            column += 1
            i += 1
        elif ch == "#":
            while i < len(text) and text[i] != "\n":
                i += 1
        elif ch in "()":
            yield Token(ch, line, column)
            column += 1
            i += 1
        else:
            start = i
            start_col = column
            while i < len(text) and not text[i].isspace() and text[i] not in "()#":
                i += 1
                column += 1
            yield Token(text[start:i], line, start_col)


def _parse_expr(tokens: list[Token], pos: int, sig: Signature) -> tuple[Formula, int]:
    if pos >= len(tokens):
        raise MalformedIrError("unexpected end of input in formula")
    token = tokens[pos]
    if token.text == ")":
        raise MalformedIrError("unexpected ')'", line=token.line, column=token.column)
    if token.text != "(":
        return _parse_bool_atom(token, sig), pos + 1

    if pos + 1 >= len(tokens):
        raise MalformedIrError("unclosed '('", line=token.line, column=token.column)
    head = tokens[pos + 1]
    if head.text in _CONNECTIVES:
        args: list[Formula] = []
        cursor = pos + 2
        while cursor < len(tokens) and tokens[cursor].text != ")":
            arg, cursor = _parse_expr(tokens, cursor, sig)
            args.append(arg)
        if cursor >= len(tokens):
            raise MalformedIrError("unclosed '('", line=token.line, column=token.column)
        return _build_connective(head, args), cursor + 1
    if head.text in _CMP_BY_SYMBOL:
        return _parse_comparison(tokens, pos, sig)
    raise MalformedIrError(
        f"unknown operator {head.text!r}", line=head.line, column=head.column
    )


def _build_connective(head: Token, args: list[Formula]) -> Formula:
    kind = head.text
    if kind == "not":
        if len(args) != 1:
            raise MalformedIrError("'not' takes exactly one argument", line=head.line, column=head.column)
        return Not(args[0])
    if kind in ("implies", "iff"):
        if len(args) != 2:
            raise MalformedIrError(
                f"'{kind}' takes exactly two arguments", line=head.line, column=head.column
            )
        return Implies(args[0], args[1]) if kind == "implies" else Iff(args[0], args[1])
    if len(args) < 2:
        raise MalformedIrError(
            f"'{kind}' takes at least two arguments", line=head.line, column=head.column
        )
    return And(tuple(args)) if kind == "and" else Or(tuple(args))


def _parse_comparison(tokens: list[Token], pos: int, sig: Signature) -> tuple[Formula, int]:
    open_token = tokens[pos]
    head = tokens[pos + 1]
    rest = tokens[pos + 2 :]
    if len(rest) < 3 or rest[2].text != ")":
        raise MalformedIrError(
            f"comparison '({head.text} ...)' takes a variable and one right-hand side",
            line=head.line,
            column=head.column,
        )
    var_token, rhs_token = rest[0], rest[1]
    op = _CMP_BY_SYMBOL[head.text]
    var = var_token.text
    if var not in sig:
        raise MalformedIrError(
            f"undeclared variable {var!r}", line=var_token.line, column=var_token.column
        )
    sort = sig.sort_of(var)
    end = pos + 5

    if sort.kind is SortKind.BOOL:
        if op not in (CmpOp.EQ, CmpOp.NE) or rhs_token.text not in ("true", "false"):
            raise MalformedIrError(
                f"boolean variable {var!r} only supports (= {var} true|false)",
                line=head.line,
                column=head.column,
            )
        positive = (rhs_token.text == "true") == (op is CmpOp.EQ)
        return (BoolVar(var) if positive else Not(BoolVar(var))), end

    if sort.kind is SortKind.ENUM:
        if op not in (CmpOp.EQ, CmpOp.NE):
            raise MalformedIrError(
                f"enum variable {var!r} only supports = and !=",
                line=head.line,
                column=head.column,
            )
        value = rhs_token.text
        if value not in sort.enum_values:
            raise MalformedIrError(
                f"value {value!r} is not declared for variable {var!r}",
                line=rhs_token.line,
                column=rhs_token.column,
            )
        atom = EnumEq(var, value)
        return (atom if op is CmpOp.EQ else Not(atom)), end

    if _INT_RE.match(rhs_token.text):
        return NumCmp(var, op, int(rhs_token.text)), end
    rhs = rhs_token.text
    if rhs not in sig:
        raise MalformedIrError(
            f"undeclared variable {rhs!r}", line=rhs_token.line, column=rhs_token.column
        )
    if sig.sort_of(rhs).kind is not SortKind.NUMERIC:
        raise MalformedIrError(
            f"comparison right-hand side {rhs!r} must be numeric",
            line=rhs_token.line,
            column=rhs_token.column,
        )
    return NumCmp(var, op, rhs), end


def _parse_bool_atom(token: Token, sig: Signature) -> Formula:
    name = token.text
    if not VAR_NAME_RE.match(name):
        raise MalformedIrError(f"invalid atom {name!r}", line=token.line, column=token.column)
    if name not in sig:
        raise MalformedIrError(
            f"undeclared variable {name!r}", line=token.line, column=token.column
        )
    if sig.sort_of(name).kind is not SortKind.BOOL:
        raise MalformedIrError(
            f"bare atom {name!r} must name a boolean variable",
            line=token.line,
            column=token.column,
        )
    return BoolVar(name)


def parse_atom(text: str, sig: Signature, source: str = "<atom>") -> Formula:
    """Parse one S-expression that must denote a plain atom over ``sig``.

    Used for grounding-map atom identifications; connectives and the
    boolean/enum negation sugars are rejected here.
    """

    tokens = list(_tokenize(text))
    if not tokens:
        raise MalformedIrError(f"empty atom in {source}")
    formula, rest = _parse_expr(tokens, 0, sig)
    if rest != len(tokens):
        extra = tokens[rest]
        raise MalformedIrError(
            f"trailing content {extra.text!r} after atom in {source}",
            line=extra.line,
            column=extra.column,
        )
    if not isinstance(formula, (BoolVar, EnumEq, NumCmp)):
        raise MalformedIrError(f"{text.strip()!r} is not a plain atom ({source})")
    return formula
