"""Controlled requirement grammar: golden parses and failure modes."""

from __future__ import annotations

import pytest

from reqequiv.errors import ConflictingSortError, ParseError, UnsupportedPhraseError
from reqequiv.ir import (
    And,
    BoolVar,
    CmpOp,
    EnumEq,
    Implies,
    Not,
    NumCmp,
    Or,
    SortKind,
    free_variables,
)
from reqequiv.requirements import RequirementDoc, load_requirements, parse_requirement


def _parse(text: str):
    return parse_requirement(RequirementDoc("r", text))


def test_speed_requirement_golden_shape(speed_pair):
    f, sig = speed_pair
    assert f == Implies(
        Or((
            NumCmp("vehicle_speed_average_driven", CmpOp.GE, "calibratable_seatbelt_reminder_speed"),
            EnumEq("seatbelt", "inactive"),
        )),
        BoolVar("seatbelt_chime"),
    )
    assert sig.sort_of("vehicle_speed_average_driven").kind is SortKind.NUMERIC
    assert sig.sort_of("calibratable_seatbelt_reminder_speed").kind is SortKind.NUMERIC
    assert sig.sort_of("seatbelt_chime").kind is SortKind.BOOL


def test_alt_wording_keeps_strict_operator_and_value(speed_pair_alt):
    f, sig = speed_pair_alt
    assert f == Implies(
        Or((
            NumCmp("mean_vehicle_speed", CmpOp.GT, "calibratable_seatbelt_reminder_speed"),
            EnumEq("seatbelt", "not_plugged_in"),
        )),
        BoolVar("chime_for_seatbelt"),
    )
    assert "not_plugged_in" in sig.sort_of("seatbelt").enum_values


def test_belt_requirement_golden_shape(belt_pair):
    f, _ = belt_pair
    assert f == Implies(
        EnumEq("front_passenger_seat_belt_status", "fastened"),
        Not(BoolVar("front_passenger_seat_belt_reminder_indication_on")),
    )


def test_motion_requirement_conjoins_conditions(motion_pair):
    f, _ = motion_pair
    assert f == Implies(
        And((EnumEq("seatbelt", "unfastened"), EnumEq("vehicle", "in_motion"))),
        BoolVar("front_passenger_seat_belt_reminder_indication_on"),
    )


def test_commas_and_keyword_restarts_are_connectives():
    f, _ = _parse(
        "Given the vehicle speed ≥ 10, When the seatbelt is unfastened, "
        "then initiate Seatbelt Reminder Chime"
    )
    assert f == Implies(
        And((NumCmp("vehicle_speed", CmpOp.GE, 10), EnumEq("seatbelt", "unfastened"))),
        BoolVar("seatbelt_reminder_chime"),
    )


def test_word_forms_map_literally():
    strict, _ = _parse("If speed is greater than 10 then initiate chime")
    nonstrict, _ = _parse("If speed is greater than or equal to 10 then initiate chime")
    at_least, _ = _parse("If speed is at least 10 then initiate chime")
    assert strict == Implies(NumCmp("speed", CmpOp.GT, 10), BoolVar("chime"))
    assert nonstrict == Implies(NumCmp("speed", CmpOp.GE, 10), BoolVar("chime"))
    assert at_least == nonstrict
    less, _ = _parse("If speed is less than 10 then initiate chime")
    assert less == Implies(NumCmp("speed", CmpOp.LT, 10), BoolVar("chime"))


def test_single_word_negation_vs_multiword_value():
    negated, _ = _parse("If the belt is not fastened then initiate chime")
    assert negated == Implies(Not(EnumEq("belt", "fastened")), BoolVar("chime"))
    multiword, sig = _parse("If the belt is not plugged in then initiate chime")
    assert multiword == Implies(EnumEq("belt", "not_plugged_in"), BoolVar("chime"))
    assert "not_plugged_in" in sig.sort_of("belt").enum_values


def test_true_false_values_become_boolean_atoms():
    f, sig = _parse("If the chime is TRUE then the lamp shall be set to FALSE")
    assert f == Implies(BoolVar("chime"), Not(BoolVar("lamp")))
    assert sig.sort_of("chime").kind is SortKind.BOOL
    assert sig.sort_of("lamp").kind is SortKind.BOOL


def test_set_to_enum_value_action():
    f, _ = _parse("When the gear changes to reverse then the display shall be set to camera")
    assert f == Implies(EnumEq("gear", "reverse"), EnumEq("display", "camera"))


def test_empty_condition_list_is_a_parse_error():
    with pytest.raises(ParseError, match="empty condition"):
        _parse("If then chime")


def test_missing_then_is_a_parse_error():
    with pytest.raises(ParseError, match="then"):
        _parse("If the chime is TRUE initiate chime")


def test_missing_keyword_is_a_parse_error():
    with pytest.raises(ParseError, match="If, When, or Given"):
        _parse("The chime is TRUE then initiate chime")


def test_unsupported_action_phrase():
    with pytest.raises(UnsupportedPhraseError):
        _parse("If the chime is TRUE then frobnicate the lamp")


def test_conflicting_usage_is_rejected():
    with pytest.raises(ConflictingSortError):
        _parse("If speed ≥ 10 AND speed is fastened then initiate chime")


def test_every_output_variable_is_declared(golden_corpus):
    for f, sig in golden_corpus:
        assert free_variables(f) <= set(sig.names)


def test_parsing_is_deterministic(speed_req_text):
    results = {parse_requirement(RequirementDoc("r", speed_req_text)) for _ in range(5)}
    assert len(results) == 1


def test_single_value_enums_get_a_complement_value(belt_pair):
    _, sig = belt_pair
    values = sig.sort_of("front_passenger_seat_belt_status").enum_values
    assert "fastened" in values
    assert len(values) >= 2


def test_load_bare_sentence_file():
    docs = load_requirements("If p is TRUE then initiate q\n", "one.req")
    assert len(docs) == 1
    assert docs[0].id == "req"


def test_load_block_layout():
    text = (
        "id: first\n"
        "text: If p is TRUE then initiate q\n"
        "\n"
        "id: second\n"
        "text: If q is TRUE then initiate p\n"
    )
    docs = load_requirements(text, "list.req")
    assert [d.id for d in docs] == ["first", "second"]
    assert all(d.source_file == "list.req" for d in docs)
    f, _ = parse_requirement(docs[1])
    assert f == Implies(BoolVar("q"), BoolVar("p"))


def test_load_block_layout_rejects_orphan_lines():
    with pytest.raises(ParseError):
        load_requirements("id: a\n\nid: b\ntext: If p is TRUE then initiate q\n")
    with pytest.raises(ParseError):
        load_requirements("text: no id came first\nid: a\ntext: x\n")
