"""Typed propositional intermediate representation.

Variables carry one of three sorts (boolean, enumerated, numeric), atoms are
built over them, and formulas combine atoms with the usual connectives.  The
numeric domain is the integers: the equivalence engine's boundary abstraction
is exact for order comparisons over any total order, and integer witnesses
print exactly.

All types are immutable after construction and every operation here is pure,
so the whole module is safe for concurrent use.
"""

from __future__ import annotations

import operator
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Mapping, Union

from .errors import SignatureMismatchError, SortError, UnboundVariableError

VAR_NAME_RE = re.compile(r"[a-z][a-z0-9_]*\Z")
VALUE_NAME_RE = re.compile(r"[a-z0-9][a-z0-9_]*\Z")

#: A concrete value bound to a variable: bool, integer, or enum value name.
Value = Union[bool, int, str]

#: A total map from declared variable names to values.
Assignment = Mapping[str, Value]


class SortKind(Enum):
    BOOL = "bool"
    ENUM = "enum"
    NUMERIC = "numeric"


@dataclass(frozen=True)
class Sort:
    """A variable's semantic type.

    ENUM sorts carry an ordered list of at least two distinct value names.
    NUMERIC sorts range over the integers and may carry a free-text unit
    label used only for diagnostics and emission.
    """

    kind: SortKind
    enum_values: tuple[str, ...] = ()
    unit: str | None = None

    def __post_init__(self):
        if self.kind is SortKind.ENUM:
            if len(self.enum_values) < 2:
                raise ValueError("enum sorts need at least two value names")
            if len(set(self.enum_values)) != len(self.enum_values):
                raise ValueError("enum value names must be distinct")
            for value in self.enum_values:
                if not VALUE_NAME_RE.match(value):
                    raise ValueError(f"invalid enum value name: {value!r}")
        elif self.enum_values:
            raise ValueError(f"{self.kind.value} sorts carry no value set")
        if self.unit is not None and self.kind is not SortKind.NUMERIC:
            raise ValueError("only numeric sorts carry a unit label")

    @classmethod
    def boolean(cls) -> Sort:
        return cls(SortKind.BOOL)

    @classmethod
    def numeric(cls, unit: str | None = None) -> Sort:
        return cls(SortKind.NUMERIC, unit=unit)

    @classmethod
    def enumeration(cls, values: Iterable[str]) -> Sort:
        return cls(SortKind.ENUM, enum_values=tuple(values))


@dataclass(frozen=True)
class SourceSpan:
    """Where a declaration came from, for diagnostics only."""

    file: str
    line: int


@dataclass(frozen=True)
class VariableDecl:
    name: str
    sort: Sort

    def __post_init__(self):
        if not VAR_NAME_RE.match(self.name):
            raise ValueError(f"invalid variable name: {self.name!r}")


@dataclass(frozen=True)
class Signature:
    """Declared variables of a formula; names are unique.

    ``provenance`` maps variable names to source spans.  It is diagnostic
    metadata and excluded from equality, so signatures compare by their
    declarations alone.
    """

    decls: tuple[VariableDecl, ...]
    provenance: Mapping[str, SourceSpan] = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "decls", tuple(self.decls))
        names = [d.name for d in self.decls]
        if len(set(names)) != len(names):
            dupe = next(n for i, n in enumerate(names) if n in names[:i])
            raise ValueError(f"duplicate variable declaration: {dupe!r}")
        object.__setattr__(self, "_by_name", {d.name: d.sort for d in self.decls})

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(d.name for d in self.decls)

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    def sort_of(self, name: str) -> Sort:
        try:
            return self._by_name[name]
        except KeyError:
            raise UnboundVariableError(f"variable {name!r} is not declared") from None


class CmpOp(Enum):
    LT = "<"
    LE = "<="
    EQ = "="
    GE = ">="
    GT = ">"
    NE = "!="

    @property
    def symbol(self) -> str:
        return self.value

    def apply(self, lhs: int, rhs: int) -> bool:
        return _CMP_FUNCS[self](lhs, rhs)


_CMP_FUNCS: dict[CmpOp, Callable[[int, int], bool]] = {
    CmpOp.LT: operator.lt,
    CmpOp.LE: operator.le,
    CmpOp.EQ: operator.eq,
    CmpOp.GE: operator.ge,
    CmpOp.GT: operator.gt,
    CmpOp.NE: operator.ne,
}


class Formula:
    """Base class for formula nodes; concrete nodes are frozen dataclasses."""

    __slots__ = ()


@dataclass(frozen=True)
class BoolVar(Formula):
    """Atom: a boolean variable holds."""

    var: str


@dataclass(frozen=True)
class EnumEq(Formula):
    """Atom: an enum variable equals one of its declared values."""

    var: str
    value: str


@dataclass(frozen=True)
class NumCmp(Formula):
    """Atom: order comparison of a numeric variable against an integer
    constant or a second numeric variable."""

    var: str
    op: CmpOp
    rhs: int | str

    def __post_init__(self):
        if isinstance(self.rhs, bool):
            raise ValueError("numeric comparison rhs must be an int or a variable name")


@dataclass(frozen=True)
class Not(Formula):
    child: Formula


@dataclass(frozen=True)
class And(Formula):
    children: tuple[Formula, ...]

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if len(self.children) < 2:
            raise ValueError("And takes at least two children")


@dataclass(frozen=True)
class Or(Formula):
    children: tuple[Formula, ...]

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if len(self.children) < 2:
            raise ValueError("Or takes at least two children")


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


#: Atom node classes, for isinstance checks.
ATOMS = (BoolVar, EnumEq, NumCmp)


def conjoin(children: Iterable[Formula]) -> Formula:
    """And over ``children``, collapsing the singleton case."""

    items = tuple(children)
    if not items:
        raise ValueError("cannot conjoin zero formulas")
    return items[0] if len(items) == 1 else And(items)


def disjoin(children: Iterable[Formula]) -> Formula:
    items = tuple(children)
    if not items:
        raise ValueError("cannot disjoin zero formulas")
    return items[0] if len(items) == 1 else Or(items)


# --- semantics -----------------------------------------------------------------

def check_assignment(sig: Signature, assignment: Assignment) -> None:
    """Raise unless ``assignment`` binds exactly the signature's variables,
    each to a value of its sort."""

    for decl in sig.decls:
        if decl.name not in assignment:
            raise UnboundVariableError(f"assignment misses variable {decl.name!r}")
        value = assignment[decl.name]
        kind = decl.sort.kind
        if kind is SortKind.BOOL and not isinstance(value, bool):
            raise SortError(f"{decl.name!r} is boolean, got {value!r}")
        elif kind is SortKind.NUMERIC and (isinstance(value, bool) or not isinstance(value, int)):
            raise SortError(f"{decl.name!r} is numeric, got {value!r}")
        elif kind is SortKind.ENUM and value not in decl.sort.enum_values:
            raise SortError(
                f"{decl.name!r} must be one of {list(decl.sort.enum_values)}, got {value!r}"
            )
    for name in assignment:
        if name not in sig:
            raise UnboundVariableError(f"assignment binds undeclared variable {name!r}")


def evaluate(f: Formula, sig: Signature, assignment: Assignment) -> bool:
    """Evaluate ``f`` under a total assignment, with standard semantics.

    ``Implies(l, r)`` is ``(not l) or r``; ``Iff`` is truth-value equality;
    numeric comparisons use integer order.
    """

    check_assignment(sig, assignment)
    return _eval(f, assignment)


def _eval(f: Formula, a: Assignment) -> bool:
    match f:
        case BoolVar(var):
            value = _lookup(a, var)
            if not isinstance(value, bool):
                raise SortError(f"{var!r} used as boolean but bound to {value!r}")
            return value
        case EnumEq(var, value):
            bound = _lookup(a, var)
            if not isinstance(bound, str):
                raise SortError(f"{var!r} used as enum but bound to {bound!r}")
            return bound == value
        case NumCmp(var, op, rhs):
            lhs_value = _as_int(a, var)
            rhs_value = rhs if isinstance(rhs, int) else _as_int(a, rhs)
            return op.apply(lhs_value, rhs_value)
        case Not(child):
            return not _eval(child, a)
        case And(children):
            return all(_eval(c, a) for c in children)
        case Or(children):
            return any(_eval(c, a) for c in children)
        case Implies(left, right):
            return (not _eval(left, a)) or _eval(right, a)
        case Iff(left, right):
            return _eval(left, a) == _eval(right, a)
    raise TypeError(f"not a formula node: {f!r}")


def _lookup(a: Assignment, var: str) -> Value:
    try:
        return a[var]
    except KeyError:
        raise UnboundVariableError(f"assignment misses variable {var!r}") from None


def _as_int(a: Assignment, var: str) -> int:
    value = _lookup(a, var)
    if isinstance(value, bool) or not isinstance(value, int):
        raise SortError(f"{var!r} used as numeric but bound to {value!r}")
    return value


def free_variables(f: Formula) -> frozenset[str]:
    """Names of all variables appearing in atoms of ``f``."""

    out: set[str] = set()
    _collect_vars(f, out)
    return frozenset(out)


def _collect_vars(f: Formula, out: set[str]) -> None:
    match f:
        case BoolVar(var):
            out.add(var)
        case EnumEq(var, _):
            out.add(var)
        case NumCmp(var, _, rhs):
            out.add(var)
            if isinstance(rhs, str):
                out.add(rhs)
        case Not(child):
            _collect_vars(child, out)
        case And(children) | Or(children):
            for c in children:
                _collect_vars(c, out)
        case Implies(left, right) | Iff(left, right):
            _collect_vars(left, out)
            _collect_vars(right, out)
        case _:
            raise TypeError(f"not a formula node: {f!r}")


def atoms_of(f: Formula) -> tuple[Formula, ...]:
    """All atom nodes of ``f`` in left-to-right order, duplicates kept."""

    out: list[Formula] = []

    def walk(node: Formula) -> None:
        match node:
            case BoolVar() | EnumEq() | NumCmp():
                out.append(node)
            case Not(child):
                walk(child)
            case And(children) | Or(children):
                for c in children:
                    walk(c)
            case Implies(left, right) | Iff(left, right):
                walk(left)
                walk(right)

    walk(f)
    return tuple(out)


def validate_formula(f: Formula, sig: Signature) -> None:
    """Check well-formedness of ``f`` over ``sig``.

    Raises SignatureMismatchError on undeclared variables, enum values
    outside the declared set, or atoms applied to the wrong sort kind.
    """

    for atom in atoms_of(f):
        match atom:
            case BoolVar(var):
                _expect_kind(sig, var, SortKind.BOOL)
            case EnumEq(var, value):
                sort = _expect_kind(sig, var, SortKind.ENUM)
                if value not in sort.enum_values:
                    raise SignatureMismatchError(
                        f"enum value {value!r} is not declared for variable {var!r}"
                    )
            case NumCmp(var, _, rhs):
                _expect_kind(sig, var, SortKind.NUMERIC)
                if isinstance(rhs, str):
                    _expect_kind(sig, rhs, SortKind.NUMERIC)


def _expect_kind(sig: Signature, var: str, kind: SortKind) -> Sort:
    if var not in sig:
        raise SignatureMismatchError(f"formula references undeclared variable {var!r}")
    sort = sig.sort_of(var)
    if sort.kind is not kind:
        raise SignatureMismatchError(
            f"variable {var!r} has sort {sort.kind.value} but is used as {kind.value}"
        )
    return sort


# --- rewriting ------------------------------------------------------------------

def rename_variables(f: Formula, mapping: Mapping[str, str]) -> Formula:
    """Rewrite every variable occurrence (including comparison right-hand
    sides) through ``mapping``; unmapped names pass through."""

    def sub(name: str) -> str:
        return mapping.get(name, name)

    match f:
        case BoolVar(var):
            return BoolVar(sub(var))
        case EnumEq(var, value):
            return EnumEq(sub(var), value)
        case NumCmp(var, op, rhs):
            return NumCmp(sub(var), op, sub(rhs) if isinstance(rhs, str) else rhs)
        case Not(child):
            return Not(rename_variables(child, mapping))
        case And(children):
            return And(tuple(rename_variables(c, mapping) for c in children))
        case Or(children):
            return Or(tuple(rename_variables(c, mapping) for c in children))
        case Implies(left, right):
            return Implies(rename_variables(left, mapping), rename_variables(right, mapping))
        case Iff(left, right):
            return Iff(rename_variables(left, mapping), rename_variables(right, mapping))
    raise TypeError(f"not a formula node: {f!r}")


def rename_enum_values(f: Formula, var: str, mapping: Mapping[str, str]) -> Formula:
    """Rewrite enum-equality values for one variable through ``mapping``."""

    match f:
        case EnumEq(v, value) if v == var and value in mapping:
            return EnumEq(v, mapping[value])
        case BoolVar() | EnumEq() | NumCmp():
            return f
        case Not(child):
            return Not(rename_enum_values(child, var, mapping))
        case And(children):
            return And(tuple(rename_enum_values(c, var, mapping) for c in children))
        case Or(children):
            return Or(tuple(rename_enum_values(c, var, mapping) for c in children))
        case Implies(left, right):
            return Implies(
                rename_enum_values(left, var, mapping), rename_enum_values(right, var, mapping)
            )
        case Iff(left, right):
            return Iff(
                rename_enum_values(left, var, mapping), rename_enum_values(right, var, mapping)
            )
    raise TypeError(f"not a formula node: {f!r}")


def replace_atoms(f: Formula, mapping: Mapping[Formula, Formula]) -> Formula:
    """Replace atom occurrences that structurally match a key of ``mapping``."""

    match f:
        case BoolVar() | EnumEq() | NumCmp():
            return mapping.get(f, f)
        case Not(child):
            return Not(replace_atoms(child, mapping))
        case And(children):
            return And(tuple(replace_atoms(c, mapping) for c in children))
        case Or(children):
            return Or(tuple(replace_atoms(c, mapping) for c in children))
        case Implies(left, right):
            return Implies(replace_atoms(left, mapping), replace_atoms(right, mapping))
        case Iff(left, right):
            return Iff(replace_atoms(left, mapping), replace_atoms(right, mapping))
    raise TypeError(f"not a formula node: {f!r}")


# --- canonical text and normalization ---------------------------------------------

def formula_to_sexpr(f: Formula) -> str:
    """Canonical S-expression text; doubles as the structural ordering key."""

    match f:
        case BoolVar(var):
            return var
        case EnumEq(var, value):
            return f"(= {var} {value})"
        case NumCmp(var, op, rhs):
            return f"({op.symbol} {var} {rhs})"
        case Not(child):
            return f"(not {formula_to_sexpr(child)})"
        case And(children):
            return "(and " + " ".join(formula_to_sexpr(c) for c in children) + ")"
        case Or(children):
            return "(or " + " ".join(formula_to_sexpr(c) for c in children) + ")"
        case Implies(left, right):
            return f"(implies {formula_to_sexpr(left)} {formula_to_sexpr(right)})"
        case Iff(left, right):
            return f"(iff {formula_to_sexpr(left)} {formula_to_sexpr(right)})"
    raise TypeError(f"not a formula node: {f!r}")


def normalize(f: Formula) -> Formula:
    """Canonical form: flatten nested And/Or, drop duplicate children, and
    order children by their structural key.  Connectives are never rewritten,
    so the implication shape of compiled requirements survives.

    Idempotent, and semantics-preserving under ``evaluate``.
    """

    match f:
        case BoolVar() | EnumEq() | NumCmp():
            return f
        case Not(child):
            return Not(normalize(child))
        case And(children):
            return _normalize_nary(And, children)
        case Or(children):
            return _normalize_nary(Or, children)
        case Implies(left, right):
            return Implies(normalize(left), normalize(right))
        case Iff(left, right):
            return Iff(normalize(left), normalize(right))
    raise TypeError(f"not a formula node: {f!r}")


def _normalize_nary(node_type: type, children: tuple[Formula, ...]) -> Formula:
    flat: list[Formula] = []
    for child in children:
        normalized = normalize(child)
        if isinstance(normalized, node_type):
            flat.extend(normalized.children)
        else:
            flat.append(normalized)
    unique = list(dict.fromkeys(flat))
    unique.sort(key=formula_to_sexpr)
    if len(unique) == 1:
        return unique[0]
    return node_type(tuple(unique))
