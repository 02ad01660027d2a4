"""Equivalence decision by exhaustive enumeration over a finite domain plan.

Boolean and enum variables enumerate their declared values.  Numeric
variables are grouped into comparison classes (variables linked by
variable-vs-variable comparisons, plus the constants any of them are compared
against); each class gets a shared candidate set built from the boundary
values of its constants, widened so that every order type among the class's
variables and constants is realizable.  Atom truth values depend only on that
order type, which is what makes an EQUIVALENT verdict a proof rather than a
sample for the supported atom language.

Enumeration order is lexicographic over name-sorted variables with
value-sorted test sets, so the reported witness is deterministic: it is the
first assignment at which the two formulas disagree.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterator, Mapping

from .errors import PlanTooLargeError
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
    SortKind,
    Value,
    atoms_of,
    validate_formula,
)

#: Default cap on the number of enumerated assignments.
DEFAULT_ASSIGNMENT_LIMIT = 2**20

#: Recorded in every report: why an EQUIVALENT verdict is trustworthy.
SOUNDNESS_NOTE = (
    "exact for order-comparison atoms over integer domains: atom truth values "
    "depend only on the order type of numeric bindings, and the domain plan "
    "realizes every order type"
)


class Verdict(Enum):
    EQUIVALENT = "EQUIVALENT"
    NOT_EQUIVALENT = "NOT_EQUIVALENT"
    ABORTED = "ABORTED"


class SatStatus(Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"
    TRIVIALLY_VALID = "TRIVIALLY_VALID"


@dataclass(frozen=True)
class DomainPlan:
    """Finite test set per variable, name-sorted, each value set sorted."""

    variables: tuple[str, ...]
    value_sets: tuple[tuple[Value, ...], ...]
    total_size: int

    def assignments(self) -> Iterator[dict[str, Value]]:
        for combo in itertools.product(*self.value_sets):
            yield dict(zip(self.variables, combo))

    def value_set(self, name: str) -> tuple[Value, ...]:
        return self.value_sets[self.variables.index(name)]


@dataclass(frozen=True)
class EquivalenceReport:
    verdict: Verdict
    forward_holds: bool | None
    reverse_holds: bool | None
    witness: dict[str, Value] | None
    assignments_checked: int
    domain_plan_size: int
    ungrounded_left: tuple[str, ...] = ()
    ungrounded_right: tuple[str, ...] = ()
    soundness_note: str = SOUNDNESS_NOTE

    def __post_init__(self):
        if self.verdict is not Verdict.ABORTED:
            both = bool(self.forward_holds) and bool(self.reverse_holds)
            if (self.verdict is Verdict.EQUIVALENT) != both:
                raise ValueError("verdict must be EQUIVALENT exactly when both directions hold")
            if (self.witness is not None) != (self.verdict is Verdict.NOT_EQUIVALENT):
                raise ValueError("witness must be present exactly for NOT_EQUIVALENT")


@dataclass(frozen=True)
class SatResult:
    status: SatStatus
    witness: dict[str, Value] | None
    assignments_checked: int


def build_domain_plan(
    sig: Signature,
    *formulas: Formula,
    limit: int = DEFAULT_ASSIGNMENT_LIMIT,
) -> DomainPlan:
    """Finite per-variable test sets covering every observable behavior of
    the given formulas over ``sig``.

    Raises PlanTooLargeError when the assignment product exceeds ``limit``.
    """

    numeric_sets = _numeric_test_sets(sig, formulas)
    names = sorted(sig.names)
    value_sets: list[tuple[Value, ...]] = []
    for name in names:
        sort = sig.sort_of(name)
        if sort.kind is SortKind.BOOL:
            value_sets.append((False, True))
        elif sort.kind is SortKind.ENUM:
            value_sets.append(tuple(sorted(sort.enum_values)))
        else:
            value_sets.append(tuple(numeric_sets[name]))
    total = 1
    for values in value_sets:
        total *= len(values)
    if total > limit:
        raise PlanTooLargeError(total, limit)
    return DomainPlan(tuple(names), tuple(value_sets), total)


def _numeric_test_sets(sig: Signature, formulas: tuple[Formula, ...]) -> dict[str, list[int]]:
    numeric_vars = [d.name for d in sig.decls if d.sort.kind is SortKind.NUMERIC]
    parent = {name: name for name in numeric_vars}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x: str, y: str) -> None:
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    constants: dict[str, set[int]] = {name: set() for name in numeric_vars}
    for f in formulas:
        for atom in atoms_of(f):
            if isinstance(atom, NumCmp) and atom.var in parent:
                if isinstance(atom.rhs, str):
                    if atom.rhs in parent:
                        union(atom.var, atom.rhs)
                else:
                    constants[atom.var].add(atom.rhs)

    classes: dict[str, list[str]] = {}
    for name in numeric_vars:
        classes.setdefault(find(name), []).append(name)

    out: dict[str, list[int]] = {}
    for members in classes.values():
        shared: set[int] = set()
        for member in members:
            shared |= constants[member]
        candidates = _class_candidates(sorted(shared), len(members))
        for member in members:
            out[member] = candidates
    return out


def _class_candidates(constants: list[int], var_count: int) -> list[int]:
    """Shared candidate set for one comparison class.

    With no constants, {0..2m} realizes every order type among m variables
    including ties.  Otherwise start from the boundary values c-1, c, c+1 of
    every constant plus outer sentinels, then widen each region between
    adjacent constants (and beyond the extremes) until it holds enough
    distinct values for m variables to take any realizable integer order.
    """

    if not constants:
        return list(range(2 * var_count + 1))
    values: set[int] = set()
    for c in constants:
        values.update((c - 1, c, c + 1))
    lo, hi = constants[0], constants[-1]
    values.update((lo - 2, hi + 2))

    # Below the smallest and above the largest constant: m values each.
    for step in range(1, var_count + 1):
        values.add(lo - step)
        values.add(hi + step)
    # Interior gaps: min(m, gap size) values each.
    for left, right in zip(constants, constants[1:]):
        gap = right - left - 1
        needed = min(var_count, gap)
        have = sorted(v for v in values if left < v < right)
        candidate = left + 1
        while len(have) < needed:
            if candidate not in have:
                have.append(candidate)
                have.sort()
                values.add(candidate)
            candidate += 1
    return sorted(values)


def compile_formula(f: Formula, index: Mapping[str, int]) -> Callable[[tuple], bool]:
    """Compile to a closure over a value tuple positioned by ``index``.

    decide() evaluates through these closures; ir.evaluate stays available as
    the slow reference path for re-checking witnesses.
    """

    match f:
        case BoolVar(var):
            i = index[var]
            return lambda v: v[i]
        case EnumEq(var, value):
            i = index[var]
            return lambda v: v[i] == value
        case NumCmp(var, op, rhs):
            i = index[var]
            apply = op.apply
            if isinstance(rhs, str):
                j = index[rhs]
                return lambda v: apply(v[i], v[j])
            return lambda v: apply(v[i], rhs)
        case Not(child):
            g = compile_formula(child, index)
            return lambda v: not g(v)
        case And(children):
            parts = tuple(compile_formula(c, index) for c in children)
            return lambda v: all(g(v) for g in parts)
        case Or(children):
            parts = tuple(compile_formula(c, index) for c in children)
            return lambda v: any(g(v) for g in parts)
        case Implies(left, right):
            gl = compile_formula(left, index)
            gr = compile_formula(right, index)
            return lambda v: (not gl(v)) or gr(v)
        case Iff(left, right):
            gl = compile_formula(left, index)
            gr = compile_formula(right, index)
            return lambda v: gl(v) == gr(v)
    raise TypeError(f"not a formula node: {f!r}")


def decide(
    f_a: Formula,
    f_b: Formula,
    sig: Signature,
    limit: int = DEFAULT_ASSIGNMENT_LIMIT,
    *,
    ungrounded_left: tuple[str, ...] = (),
    ungrounded_right: tuple[str, ...] = (),
) -> EquivalenceReport:
    """Decide biconditional equivalence of two formulas over one signature.

    The verdict is EQUIVALENT exactly when no enumerated assignment gives the
    formulas different truth values; otherwise the witness is the first
    differing assignment in enumeration order.  Per-direction validity is
    reported separately: the forward direction fails when some assignment
    makes the left formula true and the right false, and symmetrically.
    """

    validate_formula(f_a, sig)
    validate_formula(f_b, sig)
    plan = build_domain_plan(sig, f_a, f_b, limit=limit)

    index = {name: i for i, name in enumerate(plan.variables)}
    eval_a = compile_formula(f_a, index)
    eval_b = compile_formula(f_b, index)

    forward_holds = True
    reverse_holds = True
    witness: dict[str, Value] | None = None
    checked = 0
    for combo in itertools.product(*plan.value_sets):
        checked += 1
        va = eval_a(combo)
        vb = eval_b(combo)
        if va == vb:
            continue
        if witness is None:
            witness = dict(zip(plan.variables, combo))
        if va and not vb:
            forward_holds = False
        else:
            reverse_holds = False
        if not forward_holds and not reverse_holds:
            break

    verdict = Verdict.EQUIVALENT if witness is None else Verdict.NOT_EQUIVALENT
    return EquivalenceReport(
        verdict=verdict,
        forward_holds=forward_holds,
        reverse_holds=reverse_holds,
        witness=witness,
        assignments_checked=checked,
        domain_plan_size=plan.total_size,
        ungrounded_left=tuple(ungrounded_left),
        ungrounded_right=tuple(ungrounded_right),
    )


def check_satisfiable(
    f: Formula,
    sig: Signature,
    limit: int = DEFAULT_ASSIGNMENT_LIMIT,
) -> SatResult:
    """Classify ``f`` as SAT (with the first satisfying assignment), UNSAT,
    or TRIVIALLY_VALID when every assignment satisfies it — the latter flags
    vacuous requirements."""

    validate_formula(f, sig)
    plan = build_domain_plan(sig, f, limit=limit)
    index = {name: i for i, name in enumerate(plan.variables)}
    eval_f = compile_formula(f, index)

    witness: dict[str, Value] | None = None
    all_true = True
    checked = 0
    for combo in itertools.product(*plan.value_sets):
        checked += 1
        if eval_f(combo):
            if witness is None:
                witness = dict(zip(plan.variables, combo))
        else:
            all_true = False
        if witness is not None and not all_true:
            break

    if witness is None:
        return SatResult(SatStatus.UNSAT, None, checked)
    if all_true:
        return SatResult(SatStatus.TRIVIALLY_VALID, None, checked)
    return SatResult(SatStatus.SAT, witness, checked)
