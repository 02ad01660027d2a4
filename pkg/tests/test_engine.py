"""Equivalence engine: domain plans, verdicts, witnesses, satisfiability."""

from __future__ import annotations

import random

import pytest

from helpers import (
    grid_equivalence,
    make_sig,
    random_bool_pair,
    sig_domains,
)
from reqequiv.engine import (
    SatStatus,
    Verdict,
    build_domain_plan,
    check_satisfiable,
    decide,
)
from reqequiv.errors import PlanTooLargeError, SignatureMismatchError
from reqequiv.ir import (
    And,
    BoolVar,
    CmpOp,
    EnumEq,
    Implies,
    Not,
    NumCmp,
    Or,
    Sort,
    evaluate,
)


def test_plan_for_single_constant_comparison():
    sig = make_sig(("speed", Sort.numeric()))
    f = NumCmp("speed", CmpOp.GE, 10)
    plan = build_domain_plan(sig, f, f)
    assert plan.value_set("speed") == (8, 9, 10, 11, 12)


def test_plan_for_var_vs_var_without_constants(speed_pair, speed_pair_alt):
    sig = make_sig(("speed", Sort.numeric()), ("cal_speed", Sort.numeric()))
    f = NumCmp("speed", CmpOp.GE, "cal_speed")
    plan = build_domain_plan(sig, f)
    assert plan.value_set("speed") == (0, 1, 2, 3, 4)
    assert plan.value_set("cal_speed") == (0, 1, 2, 3, 4)


def test_plan_size_is_the_product_of_value_sets():
    sig = make_sig(
        ("p", Sort.boolean()),
        ("q", Sort.boolean()),
        ("mode", Sort.enumeration(("a", "b", "c"))),
    )
    plan = build_domain_plan(sig, BoolVar("p"), BoolVar("q"))
    assert plan.total_size == 2 * 2 * 3


def test_plan_too_large_raises():
    sig = make_sig(*[(f"b{i}", Sort.boolean()) for i in range(8)])
    with pytest.raises(PlanTooLargeError) as exc_info:
        build_domain_plan(sig, BoolVar("b0"), limit=100)
    assert exc_info.value.total_size == 256
    assert exc_info.value.limit == 100


def test_decide_is_reflexive(golden_corpus):
    for f, sig in golden_corpus[:8]:
        report = decide(f, f, sig)
        assert report.verdict is Verdict.EQUIVALENT
        assert report.witness is None


def test_decide_boundary_strictness():
    sig = make_sig(("speed", Sort.numeric()), ("chime", Sort.boolean()))
    ge = Implies(NumCmp("speed", CmpOp.GE, 10), BoolVar("chime"))
    gt = Implies(NumCmp("speed", CmpOp.GT, 10), BoolVar("chime"))
    report = decide(ge, gt, sig)
    assert report.verdict is Verdict.NOT_EQUIVALENT
    assert report.witness == {"speed": 10, "chime": False}
    assert evaluate(ge, sig, report.witness) is False
    assert evaluate(gt, sig, report.witness) is True
    # Pointwise, ge implies gt (it asserts the chime in strictly more cases);
    # only the reverse direction fails, exactly at the boundary.
    assert report.forward_holds is True
    assert report.reverse_holds is False


def test_decide_rejects_undeclared_variables():
    sig = make_sig(("p", Sort.boolean()))
    with pytest.raises(SignatureMismatchError):
        decide(BoolVar("p"), BoolVar("ghost"), sig)


def test_decide_is_symmetric_with_swapped_directions():
    rng = random.Random(7)
    for _ in range(50):
        fa, fb, sig = random_bool_pair(rng)
        ab = decide(fa, fb, sig)
        ba = decide(fb, fa, sig)
        assert ab.verdict is ba.verdict
        assert ab.forward_holds == ba.reverse_holds
        assert ab.reverse_holds == ba.forward_holds


def test_decide_is_transitive_on_equivalent_triples():
    p, q = BoolVar("p"), BoolVar("q")
    sig = make_sig(("p", Sort.boolean()), ("q", Sort.boolean()))
    f1 = Implies(p, q)
    f2 = Or((Not(p), q))
    f3 = Not(And((p, Not(q))))
    assert decide(f1, f2, sig).verdict is Verdict.EQUIVALENT
    assert decide(f2, f3, sig).verdict is Verdict.EQUIVALENT
    assert decide(f1, f3, sig).verdict is Verdict.EQUIVALENT


def test_decide_reports_are_deterministic():
    rng = random.Random(99)
    fa, fb, sig = random_bool_pair(rng)
    first = decide(fa, fb, sig)
    for _ in range(5):
        assert decide(fa, fb, sig) == first


def test_witnesses_re_evaluate_to_differing_values():
    rng = random.Random(13)
    found = 0
    for _ in range(200):
        fa, fb, sig = random_bool_pair(rng)
        report = decide(fa, fb, sig)
        if report.verdict is Verdict.NOT_EQUIVALENT:
            found += 1
            assert evaluate(fa, sig, report.witness) != evaluate(fb, sig, report.witness)
    assert found > 0


def test_verdicts_match_grid_oracle_on_bool_pairs():
    rng = random.Random(4242)
    for _ in range(200):
        fa, fb, sig = random_bool_pair(rng)
        report = decide(fa, fb, sig)
        equivalent, forward, reverse = grid_equivalence(fa, fb, sig_domains(sig))
        assert (report.verdict is Verdict.EQUIVALENT) == equivalent
        assert report.forward_holds == forward
        assert report.reverse_holds == reverse


def test_witness_is_lexicographically_first():
    sig = make_sig(("a", Sort.boolean()), ("b", Sort.boolean()))
    # Formulas differ everywhere; the first enumerated assignment is all-false.
    report = decide(BoolVar("a"), Not(BoolVar("a")), sig)
    assert report.witness == {"a": False, "b": False}


def test_ungrounded_lists_pass_through():
    sig = make_sig(("p", Sort.boolean()))
    report = decide(BoolVar("p"), BoolVar("p"), sig, ungrounded_right=("q",))
    assert report.ungrounded_right == ("q",)


def test_check_satisfiable_contradiction():
    sig = make_sig(("p", Sort.boolean()))
    result = check_satisfiable(And((BoolVar("p"), Not(BoolVar("p")))), sig)
    assert result.status is SatStatus.UNSAT
    assert result.witness is None


def test_check_satisfiable_tautology_is_flagged_vacuous():
    sig = make_sig(("p", Sort.boolean()))
    result = check_satisfiable(Implies(BoolVar("p"), BoolVar("p")), sig)
    assert result.status is SatStatus.TRIVIALLY_VALID


def test_check_satisfiable_contingent_formula(speed_pair):
    f, sig = speed_pair
    result = check_satisfiable(f, sig)
    assert result.status is SatStatus.SAT
    assert evaluate(f, sig, result.witness) is True


def test_enum_domains_enumerate_declared_values():
    sig = make_sig(("mode", Sort.enumeration(("manual", "auto"))))
    plan = build_domain_plan(sig, EnumEq("mode", "auto"))
    assert plan.value_set("mode") == ("auto", "manual")


def test_comparison_classes_share_candidates():
    # x is compared to y, y to the constant 10: one class, one shared set.
    sig = make_sig(("x", Sort.numeric()), ("y", Sort.numeric()))
    f = And((NumCmp("x", CmpOp.LT, "y"), NumCmp("y", CmpOp.LE, 10)))
    plan = build_domain_plan(sig, f)
    assert plan.value_set("x") == plan.value_set("y")
    values = plan.value_set("x")
    assert {9, 10, 11}.issubset(values)
    # Two distinct values on each side of the constant for the two variables.
    assert len([v for v in values if v < 10]) >= 2
    assert len([v for v in values if v > 10]) >= 2


def test_three_variable_chains_keep_enough_gap_values():
    # Three variables strictly ordered inside a wide gap must be realizable.
    sig = make_sig(("x", Sort.numeric()), ("y", Sort.numeric()), ("z", Sort.numeric()))
    chain = And((
        NumCmp("x", CmpOp.GT, 0),
        NumCmp("x", CmpOp.LT, "y"),
        NumCmp("y", CmpOp.LT, "z"),
        NumCmp("z", CmpOp.LT, 10),
    ))
    result = check_satisfiable(chain, sig)
    assert result.status is SatStatus.SAT
    plan = build_domain_plan(sig, chain)
    inner = [v for v in plan.value_set("x") if 0 < v < 10]
    assert len(inner) >= 3
