"""Shared test utilities: independent oracles and random formula generators.

The grid oracle deliberately avoids the package's evaluation paths: formulas
are translated into numpy boolean arrays over explicit per-variable domains
(enums as index codes), so engine verdicts get checked against a genuinely
different mechanism.
"""

from __future__ import annotations

import random

import numpy as np

from reqequiv.ir import (
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
    VariableDecl,
)

_NP_CMP = {
    CmpOp.LT: np.less,
    CmpOp.LE: np.less_equal,
    CmpOp.EQ: np.equal,
    CmpOp.GE: np.greater_equal,
    CmpOp.GT: np.greater,
    CmpOp.NE: np.not_equal,
}


def make_sig(*decls: tuple[str, Sort]) -> Signature:
    return Signature(tuple(VariableDecl(n, s) for n, s in decls))


def sig_domains(sig: Signature, window: tuple[int, int] = (-5, 5)) -> dict[str, list]:
    """Full-window domains for the brute-force oracle."""

    lo, hi = window
    out: dict[str, list] = {}
    for decl in sig.decls:
        if decl.sort.kind is SortKind.BOOL:
            out[decl.name] = [False, True]
        elif decl.sort.kind is SortKind.ENUM:
            out[decl.name] = sorted(decl.sort.enum_values)
        else:
            out[decl.name] = list(range(lo, hi + 1))
    return out


def truth_grid(f: Formula, domains: dict[str, list]) -> np.ndarray:
    """Boolean grid of f over the product of the domains (sorted names)."""

    names = sorted(domains)
    axes = np.meshgrid(*[np.arange(len(domains[n])) for n in names], indexing="ij")
    index = dict(zip(names, axes))

    def rec(node: Formula) -> np.ndarray:
        if isinstance(node, BoolVar):
            return np.asarray(domains[node.var], dtype=bool)[index[node.var]]
        if isinstance(node, EnumEq):
            return index[node.var] == domains[node.var].index(node.value)
        if isinstance(node, NumCmp):
            lhs = np.asarray(domains[node.var])[index[node.var]]
            if isinstance(node.rhs, str):
                rhs = np.asarray(domains[node.rhs])[index[node.rhs]]
            else:
                rhs = node.rhs
            return _NP_CMP[node.op](lhs, rhs)
        if isinstance(node, Not):
            return ~rec(node.child)
        if isinstance(node, And):
            return np.logical_and.reduce([rec(c) for c in node.children])
        if isinstance(node, Or):
            return np.logical_or.reduce([rec(c) for c in node.children])
        if isinstance(node, Implies):
            return ~rec(node.left) | rec(node.right)
        if isinstance(node, Iff):
            return rec(node.left) == rec(node.right)
        raise TypeError(node)

    grid = rec(f)
    shape = tuple(len(domains[n]) for n in names)
    return np.broadcast_to(grid, shape)


def grid_equivalence(fa: Formula, fb: Formula, domains: dict[str, list]):
    """(equivalent, forward_holds, reverse_holds) by brute-force comparison."""

    ga, gb = truth_grid(fa, domains), truth_grid(fb, domains)
    forward = not np.any(ga & ~gb)
    reverse = not np.any(gb & ~ga)
    return forward and reverse, forward, reverse


# --- random formulas ------------------------------------------------------------

_CONNECTIVE_CHOICES = ("not", "and", "or", "implies", "iff")


def random_bool_signature(rng: random.Random, max_vars: int = 6) -> Signature:
    n = rng.randint(2, max_vars)
    return make_sig(*[(f"p{i}", Sort.boolean()) for i in range(n)])


def random_formula_over(
    rng: random.Random, atoms: list[Formula], depth: int
) -> Formula:
    if depth <= 0 or rng.random() < 0.3:
        return rng.choice(atoms)
    kind = rng.choice(_CONNECTIVE_CHOICES)
    sub = lambda: random_formula_over(rng, atoms, depth - 1)
    if kind == "not":
        return Not(sub())
    if kind == "implies":
        return Implies(sub(), sub())
    if kind == "iff":
        return Iff(sub(), sub())
    children = tuple(sub() for _ in range(rng.randint(2, 3)))
    return And(children) if kind == "and" else Or(children)


def random_bool_pair(rng: random.Random):
    sig = random_bool_signature(rng)
    atoms: list[Formula] = [BoolVar(d.name) for d in sig.decls]
    return (
        random_formula_over(rng, atoms, 3),
        random_formula_over(rng, atoms, 3),
        sig,
    )


def random_numeric_pair(rng: random.Random, max_vars: int = 3, max_consts: int = 3):
    """A pair over 1..max_vars numeric variables (plus one optional bool),
    whose atoms compare variables against each other and against a shared
    pool of 1..max_consts integer constants."""

    n = rng.randint(1, max_vars)
    names = [f"n{i}" for i in range(n)]
    decls: list[tuple[str, Sort]] = [(name, Sort.numeric()) for name in names]
    with_bool = rng.random() < 0.5
    if with_bool:
        decls.append(("flag", Sort.boolean()))
    sig = make_sig(*decls)

    pool = sorted(rng.sample(range(-3, 4), rng.randint(1, max_consts)))
    ops = list(CmpOp)
    atoms: list[Formula] = []
    for _ in range(rng.randint(2, 5)):
        var = rng.choice(names)
        if len(names) > 1 and rng.random() < 0.4:
            rhs = rng.choice([m for m in names if m != var])
        else:
            rhs = rng.choice(pool)
        atoms.append(NumCmp(var, rng.choice(ops), rhs))
    if with_bool:
        atoms.append(BoolVar("flag"))
    return (
        random_formula_over(rng, atoms, 2),
        random_formula_over(rng, atoms, 2),
        sig,
        pool,
    )
