"""Shared fixtures: corpus file paths, parsed pairs, and the golden formula
corpus used by the Lean round-trip checks."""

from __future__ import annotations

from pathlib import Path

import pytest

from reqequiv.gherkin import compile_feature
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
)
from reqequiv.requirements import RequirementDoc, parse_requirement

REPO_ROOT = Path(__file__).resolve().parent.parent
CORPUS_DIR = REPO_ROOT / "corpus"


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    return CORPUS_DIR


@pytest.fixture(scope="session")
def speed_req_text() -> str:
    return (CORPUS_DIR / "chime_speed_threshold.req").read_text(encoding="utf-8").strip()


@pytest.fixture(scope="session")
def speed_req_alt_text() -> str:
    return (CORPUS_DIR / "chime_speed_threshold_alt.req").read_text(encoding="utf-8").strip()


@pytest.fixture(scope="session")
def belt_req_text() -> str:
    return (CORPUS_DIR / "belt_reminder_fastened.req").read_text(encoding="utf-8").strip()


@pytest.fixture(scope="session")
def motion_req_text() -> str:
    return (CORPUS_DIR / "belt_reminder_motion.req").read_text(encoding="utf-8").strip()


@pytest.fixture(scope="session")
def belt_feature_text() -> str:
    return (CORPUS_DIR / "belt_reminder_scenarios.feature").read_text(encoding="utf-8")


def _parse(text: str, doc_id: str):
    return parse_requirement(RequirementDoc(doc_id, text))


@pytest.fixture(scope="session")
def speed_pair(speed_req_text):
    return _parse(speed_req_text, "speed_a")


@pytest.fixture(scope="session")
def speed_pair_alt(speed_req_alt_text):
    return _parse(speed_req_alt_text, "speed_b")


@pytest.fixture(scope="session")
def belt_pair(belt_req_text):
    return _parse(belt_req_text, "belt")


@pytest.fixture(scope="session")
def motion_pair(motion_req_text):
    return _parse(motion_req_text, "motion")


@pytest.fixture(scope="session")
def belt_feature_pair(belt_feature_text):
    return compile_feature(belt_feature_text, "belt_reminder_scenarios.feature")


INTRO_REQ_TEXT = (
    "Given the vehicle speed ≥ 10, When the seatbelt is unfastened, "
    "then initiate Seatbelt Reminder Chime"
)


def _sig(*decls: tuple[str, Sort]) -> Signature:
    return Signature(tuple(VariableDecl(n, s) for n, s in decls))


def _synthetic_corpus() -> list[tuple]:
    b = Sort.boolean()
    n = Sort.numeric()
    door = Sort.enumeration(("open", "closed"))
    mode = Sort.enumeration(("auto", "manual", "off"))
    sig = _sig(
        ("alarm", b),
        ("ready", b),
        ("door", door),
        ("mode", mode),
        ("temp", n),
        ("limit", n),
    )
    alarm, ready = BoolVar("alarm"), BoolVar("ready")
    formulas = [
        alarm,
        Not(ready),
        And((alarm, ready)),
        Or((EnumEq("door", "open"), EnumEq("door", "closed"))),
        Implies(NumCmp("temp", CmpOp.GT, "limit"), alarm),
        Iff(alarm, Not(ready)),
        Implies(And((EnumEq("mode", "auto"), NumCmp("temp", CmpOp.GE, 30))), alarm),
        NumCmp("temp", CmpOp.NE, 0),
        Not(And((alarm, Not(ready)))),
        Or((NumCmp("temp", CmpOp.LT, "limit"), NumCmp("temp", CmpOp.EQ, "limit"),
            NumCmp("temp", CmpOp.GT, "limit"))),
        Implies(Or((alarm, ready)), Iff(EnumEq("mode", "off"), Not(EnumEq("door", "open")))),
        And((Implies(alarm, ready), Implies(ready, alarm))),
        NumCmp("limit", CmpOp.LE, 100),
        Implies(Not(EnumEq("mode", "manual")), Or((EnumEq("mode", "auto"), EnumEq("mode", "off")))),
        Iff(NumCmp("temp", CmpOp.GE, "limit"), Not(NumCmp("temp", CmpOp.LT, "limit"))),
    ]
    return [(f, sig) for f in formulas]


@pytest.fixture(scope="session")
def golden_corpus(speed_pair, speed_pair_alt, belt_pair, motion_pair, belt_feature_pair):
    """At least 20 (formula, signature) pairs: the four corpus requirements,
    the compiled feature, the composite phrasing above, plus constructed
    formulas covering every node and atom shape."""

    corpus = [
        speed_pair,
        speed_pair_alt,
        belt_pair,
        motion_pair,
        belt_feature_pair,
        _parse(INTRO_REQ_TEXT, "intro"),
    ]
    corpus.extend(_synthetic_corpus())
    assert len(corpus) >= 20
    return corpus
