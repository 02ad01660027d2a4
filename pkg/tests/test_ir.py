"""Core IR semantics: evaluation, free variables, normalization."""

from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import make_sig, random_bool_pair, random_formula_over, sig_domains, truth_grid
from reqequiv.errors import SortError, UnboundVariableError
from reqequiv.ir import (
    And,
    BoolVar,
    CmpOp,
    EnumEq,
    Iff,
    Implies,
    Not,
    NumCmp,
    Or,
    Signature,
    Sort,
    VariableDecl,
    evaluate,
    formula_to_sexpr,
    free_variables,
    normalize,
    rename_variables,
    validate_formula,
)
from reqequiv.errors import SignatureMismatchError


def test_sort_invariants():
    with pytest.raises(ValueError):
        Sort.enumeration(("only",))
    with pytest.raises(ValueError):
        Sort.enumeration(("a", "a"))
    with pytest.raises(ValueError):
        Sort(Sort.boolean().kind, enum_values=("a", "b"))
    assert Sort.numeric("km/h").unit == "km/h"


def test_variable_names_validated():
    with pytest.raises(ValueError):
        VariableDecl("CamelCase", Sort.boolean())
    with pytest.raises(ValueError):
        Signature((VariableDecl("x", Sort.boolean()), VariableDecl("x", Sort.boolean())))


def test_nary_connectives_need_two_children():
    with pytest.raises(ValueError):
        And((BoolVar("x"),))
    with pytest.raises(ValueError):
        Or(())


def test_false_antecedent_makes_implication_true():
    sig = make_sig(("speed", Sort.numeric()), ("chime", Sort.boolean()))
    f = Implies(NumCmp("speed", CmpOp.GE, 10), BoolVar("chime"))
    assert evaluate(f, sig, {"speed": 9, "chime": False}) is True


def test_iff_reflexive_under_any_assignment():
    sig = make_sig(("p", Sort.boolean()))
    f = Iff(BoolVar("p"), BoolVar("p"))
    assert evaluate(f, sig, {"p": True}) is True
    assert evaluate(f, sig, {"p": False}) is True


def test_speed_requirement_counterexample_assignment(speed_pair):
    # Antecedent holds (12 >= 10) but the chime is off, so the implication fails.
    f, sig = speed_pair
    assignment = {
        "vehicle_speed_average_driven": 12,
        "calibratable_seatbelt_reminder_speed": 10,
        "seatbelt": "inactive",
        "seatbelt_chime": False,
    }
    assert evaluate(f, sig, assignment) is False
    # Cross-check with the independent grid oracle at the same point.
    domains = {
        "vehicle_speed_average_driven": [12],
        "calibratable_seatbelt_reminder_speed": [10],
        "seatbelt": ["inactive", "other"],
        "seatbelt_chime": [False],
    }
    grid = truth_grid(f, domains)
    names = sorted(domains)
    point = tuple(domains[n].index(assignment[n]) for n in names)
    assert bool(grid[point]) is False


def test_evaluate_rejects_partial_assignment():
    sig = make_sig(("p", Sort.boolean()), ("q", Sort.boolean()))
    with pytest.raises(UnboundVariableError):
        evaluate(BoolVar("p"), sig, {"p": True})
    with pytest.raises(UnboundVariableError):
        evaluate(BoolVar("p"), sig, {"p": True, "q": False, "zz": True})


def test_evaluate_rejects_sort_violations():
    sig = make_sig(("p", Sort.boolean()), ("e", Sort.enumeration(("a", "b"))))
    with pytest.raises(SortError):
        evaluate(BoolVar("p"), sig, {"p": 3, "e": "a"})
    with pytest.raises(SortError):
        evaluate(BoolVar("p"), sig, {"p": True, "e": "zz"})


def test_free_variables_single_atom():
    assert free_variables(BoolVar("chime")) == {"chime"}


def test_free_variables_includes_comparison_rhs(speed_pair):
    f, _ = speed_pair
    assert free_variables(f) == {
        "vehicle_speed_average_driven",
        "calibratable_seatbelt_reminder_speed",
        "seatbelt",
        "seatbelt_chime",
    }


def test_belt_requirement_names_exactly_its_two_variables(belt_pair):
    f, _ = belt_pair
    assert free_variables(f) == {
        "front_passenger_seat_belt_status",
        "front_passenger_seat_belt_reminder_indication_on",
    }


def test_feature_formula_names_the_extra_variables(belt_feature_pair):
    f, _ = belt_feature_pair
    names = free_variables(f)
    assert {"seat_occupancy", "final_seatbelt_status"} <= names


def test_normalize_flattens_and_dedupes():
    a, b = BoolVar("a"), BoolVar("b")
    assert normalize(And((a, And((b, a))))) == And((a, b))
    assert normalize(Or((a, a))) == a


def test_normalize_keeps_implication_shape():
    a, b, c = BoolVar("a"), BoolVar("b"), BoolVar("c")
    f = Implies(And((a, b)), c)
    assert normalize(f) == f


def test_normalize_orders_children_stably():
    a, b = BoolVar("a"), BoolVar("b")
    assert normalize(And((b, a))) == normalize(And((a, b)))


def test_validate_formula_catches_misuse():
    sig = make_sig(("p", Sort.boolean()), ("e", Sort.enumeration(("a", "b"))))
    with pytest.raises(SignatureMismatchError):
        validate_formula(BoolVar("missing"), sig)
    with pytest.raises(SignatureMismatchError):
        validate_formula(EnumEq("e", "zz"), sig)
    with pytest.raises(SignatureMismatchError):
        validate_formula(BoolVar("e"), sig)
    with pytest.raises(SignatureMismatchError):
        validate_formula(NumCmp("p", CmpOp.GE, 1), sig)


def test_rename_variables_touches_comparison_rhs():
    f = NumCmp("a", CmpOp.LT, "b")
    assert rename_variables(f, {"a": "x", "b": "y"}) == NumCmp("x", CmpOp.LT, "y")


def test_normalize_properties_on_random_formulas():
    # Invariant sweep: idempotence, semantics preservation under all
    # assignments, free-variable preservation. 1000 formulas over <= 6 bools.
    rng = random.Random(20240811)
    sigs_seen = 0
    for _ in range(1000):
        f, _, sig = random_bool_pair(rng)
        nf = normalize(f)
        assert normalize(nf) == nf
        assert free_variables(nf) == free_variables(f)
        names = sig.names
        for values in itertools.product((False, True), repeat=len(names)):
            assignment = dict(zip(names, values))
            assert evaluate(f, sig, assignment) == evaluate(nf, sig, assignment)
        sigs_seen += 1
    assert sigs_seen == 1000


def test_evaluate_is_deterministic():
    sig = make_sig(("temp", Sort.numeric()), ("alarm", Sort.boolean()))
    f = Implies(NumCmp("temp", CmpOp.GT, 5), BoolVar("alarm"))
    assignment = {"temp": 6, "alarm": False}
    results = {evaluate(f, sig, assignment) for _ in range(25)}
    assert results == {False}


@given(st.integers(min_value=-20, max_value=20), st.integers(min_value=-20, max_value=20))
def test_numeric_comparisons_follow_integer_order(lhs, rhs):
    sig = make_sig(("x", Sort.numeric()), ("y", Sort.numeric()))
    assignment = {"x": lhs, "y": rhs}
    checks = {
        CmpOp.LT: lhs < rhs,
        CmpOp.LE: lhs <= rhs,
        CmpOp.EQ: lhs == rhs,
        CmpOp.GE: lhs >= rhs,
        CmpOp.GT: lhs > rhs,
        CmpOp.NE: lhs != rhs,
    }
    for op, expected in checks.items():
        assert evaluate(NumCmp("x", op, "y"), sig, assignment) is expected
        assert evaluate(NumCmp("x", op, rhs), sig, assignment) is expected


def test_sexpr_is_injective_on_golden_corpus(golden_corpus):
    texts = {}
    for f, _ in golden_corpus:
        nf = normalize(f)
        text = formula_to_sexpr(nf)
        assert texts.setdefault(text, nf) == nf
