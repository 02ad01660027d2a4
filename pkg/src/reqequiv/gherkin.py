"""Gherkin subset parser and scenario-to-formula compiler.

Supported keywords: Feature, Scenario, Scenario Outline, Given/When/Then/And,
Examples with ``|``-delimited tables; ``#`` starts a comment line.  A plain
Scenario is treated as an outline with zero placeholders and one implicit
row.

Compilation turns each Examples row into an implication
``(given-atoms ∧ when-atoms) → then-atoms`` and conjoins the rows: every row
is an independent obligation, which is exactly what can make a generated
scenario strictly stronger than the requirement it came from.  Step phrases
follow the requirement grammar's rules, with two additions:

* a step whose value slot is a ``<placeholder>`` names its variable after
  the placeholder when the column holds enum (or integer) values, and after
  the step's noun phrase with per-row polarity when the column holds
  TRUE/FALSE;
* a Given "X is ..." state step combined with a When "X changes to ..." step
  on the same literal noun phrase splits X into ``initial_x`` and
  ``final_x``.

Unknown step phrasings are hard errors: silently skipping a step would
weaken the scenario and corrupt equivalence verdicts downstream.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from .errors import (
    ConflictingSortError,
    ParseError,
    TableShapeError,
    UnboundPlaceholderError,
    UnsupportedPhraseError,
)
from .ir import BoolVar, EnumEq, Formula, Implies, Not, NumCmp, CmpOp, Signature, conjoin
from .phrases import (
    SignatureBuilder,
    _INT_RE,
    _NOT_WORD_RE,
    is_truth_word,
    parse_action,
    parse_condition,
    snake_case,
    truth_value,
    value_name,
)

_PLACEHOLDER_RE = re.compile(r"<([^<>|]*)>")
_STEP_RE = re.compile(r"(Given|When|Then|And)\s+(.*)$")
_IS_SPLIT_RE = re.compile(r"^(?P<noun>.+?)\s+is\s+(?P<value>.+)$", re.IGNORECASE | re.DOTALL)
_CHANGES_SPLIT_RE = re.compile(r"^(?P<noun>.+?)\s+changes\s+to\s+(?P<value>.+)$", re.IGNORECASE | re.DOTALL)
_SET_SPLIT_RE = re.compile(r"^(?P<noun>.+?)\s+shall\s+be\s+set\s+to\s+(?P<value>.+)$", re.IGNORECASE | re.DOTALL)
# An "is"-value starting with a comparator word is a comparison, not an enum value.
_COMPARATOR_LEAD_RE = re.compile(
    r"^(?:greater\s|less\s|at\s+least\b|at\s+most\b|not\s+equal\b|equal\s+to\b|equals\b|[<>=≥≤≠!])",
    re.IGNORECASE,
)


@dataclass(frozen=True)
class Step:
    keyword: str  # Given | When | Then
    text: str
    line: int


@dataclass(frozen=True)
class GherkinScenario:
    """A parsed Scenario / Scenario Outline with its Examples table."""

    title: str
    given_steps: tuple[Step, ...]
    when_steps: tuple[Step, ...]
    then_steps: tuple[Step, ...]
    headers: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]
    line: int = 1
    source_file: str = "<feature>"

    @property
    def steps(self) -> tuple[Step, ...]:
        return self.given_steps + self.when_steps + self.then_steps

    def placeholders(self) -> tuple[str, ...]:
        seen: list[str] = []
        for step in self.steps:
            for name in _PLACEHOLDER_RE.findall(step.text):
                if name not in seen:
                    seen.append(name)
        return tuple(seen)


def parse_feature(text: str, source_file: str = "<feature>") -> list[GherkinScenario]:
    """Parse feature text into scenarios, validating table shape and
    placeholder binding."""

    scenarios: list[GherkinScenario] = []
    title: str | None = None
    start_line = 0
    groups: dict[str, list[Step]] = {"Given": [], "When": [], "Then": []}
    headers: tuple[str, ...] = ()
    rows: list[tuple[str, ...]] = []
    last_group: str | None = None
    in_examples = False
    expect_header = False

    def finalize() -> None:
        nonlocal title, groups, headers, rows, last_group, in_examples, expect_header
        if title is None:
            return
        if not groups["Then"]:
            raise ParseError(f"scenario {title!r} has no Then step", line=start_line)
        if in_examples and not rows:
            raise TableShapeError(
                f"scenario {title!r} has an Examples keyword but no table rows",
                line=start_line,
            )
        scenario = GherkinScenario(
            title,
            tuple(groups["Given"]),
            tuple(groups["When"]),
            tuple(groups["Then"]),
            headers,
            tuple(rows),
            start_line,
            source_file,
        )
        for name in scenario.placeholders():
            if name not in headers:
                raise UnboundPlaceholderError(
                    f"placeholder <{name}> is not a column of the Examples table",
                    line=start_line,
                )
        scenarios.append(scenario)
        title = None
        groups = {"Given": [], "When": [], "Then": []}
        headers = ()
        rows = []
        last_group = None
        in_examples = False
        expect_header = False

    for index, raw in enumerate(text.split("\n")):
        line_no = index + 1
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("Feature:"):
            continue
        if line.startswith("Scenario Outline:") or line.startswith("Scenario:"):
            finalize()
            title = line.split(":", 1)[1].strip()
            start_line = line_no
            continue
        if line.startswith("Examples"):
            if title is None:
                raise ParseError("Examples outside any scenario", line=line_no)
            in_examples = True
            expect_header = True
            continue
        if line.startswith("|"):
            if title is None or not in_examples:
                raise ParseError("table row outside an Examples block", line=line_no)
            cells = _split_row(line, line_no)
            if not headers:
                if len(set(cells)) != len(cells):
                    raise TableShapeError("duplicate Examples column names", line=line_no)
                headers = cells
            elif expect_header:
                if cells != headers:
                    raise TableShapeError(
                        "second Examples block has a different header", line=line_no
                    )
            else:
                if len(cells) != len(headers):
                    raise TableShapeError(
                        f"row has {len(cells)} cells but the header has {len(headers)}",
                        line=line_no,
                    )
                rows.append(cells)
                continue
            expect_header = False
            continue
        step = _STEP_RE.match(line)
        if step:
            if title is None:
                raise ParseError("step outside any scenario", line=line_no)
            if in_examples:
                raise ParseError("step after the Examples table", line=line_no)
            keyword, rest = step.groups()
            if keyword == "And":
                if last_group is None:
                    raise ParseError("And step before any Given/When/Then", line=line_no)
                keyword = last_group
            groups[keyword].append(Step(keyword, rest.strip(), line_no))
            last_group = keyword
            continue
        raise ParseError(f"unrecognized feature line: {line!r}", line=line_no)

    finalize()
    if not scenarios:
        raise ParseError("no scenarios found", line=1)
    return scenarios


def _split_row(line: str, line_no: int) -> tuple[str, ...]:
    if not line.endswith("|") or len(line) < 2:
        raise TableShapeError("table row must end with '|'", line=line_no)
    return tuple(cell.strip() for cell in line[1:-1].split("|"))


# --- compilation ---------------------------------------------------------------

class _Slot(Enum):
    IS = "is"
    CHANGES = "changes"
    SET = "set"
    CONDITION = "condition"  # literal text, full condition grammar
    ACTION = "action"  # literal text, full action grammar


@dataclass(frozen=True)
class _StepPlan:
    keyword: str
    slot: _Slot
    noun: str | None
    value: str | None  # literal value text, None when placeholder
    placeholder: str | None
    line: int


def compile_scenario(scenario: GherkinScenario) -> tuple[Formula, Signature]:
    """Compile one scenario to (formula, signature)."""

    builder = SignatureBuilder(scenario.source_file)
    formula = _compile_with(scenario, builder)
    return formula, builder.build()


def compile_feature(text: str, source_file: str = "<feature>") -> tuple[Formula, Signature]:
    """Parse and compile a whole feature file; multiple scenarios share one
    signature and conjoin."""

    scenarios = parse_feature(text, source_file)
    builder = SignatureBuilder(source_file)
    formulas = [_compile_with(s, builder) for s in scenarios]
    return conjoin(formulas), builder.build()


def _compile_with(scenario: GherkinScenario, builder: SignatureBuilder) -> Formula:
    rows: list[dict[str, str]]
    if scenario.headers:
        rows = [dict(zip(scenario.headers, row)) for row in scenario.rows]
        if not rows:
            raise TableShapeError(
                f"scenario {scenario.title!r} has a header but no rows", line=scenario.line
            )
    else:
        rows = [{}]

    column_kinds = _classify_columns(scenario, rows)
    plans = [_plan_step(step) for step in scenario.steps]
    split_nouns = _split_nouns(plans)

    row_formulas: list[Formula] = []
    for row in rows:
        antecedent: list[Formula] = []
        consequent: list[Formula] = []
        for plan in plans:
            atom = _instantiate(plan, row, column_kinds, split_nouns, builder)
            (consequent if plan.keyword == "Then" else antecedent).append(atom)
        then_part = conjoin(consequent)
        row_formulas.append(
            Implies(conjoin(antecedent), then_part) if antecedent else then_part
        )
    return conjoin(row_formulas)


def _classify_columns(
    scenario: GherkinScenario, rows: list[dict[str, str]]
) -> dict[str, str]:
    kinds: dict[str, str] = {}
    for column in scenario.headers:
        cells = [row[column] for row in rows]
        truth = sum(1 for c in cells if is_truth_word(c))
        ints = sum(1 for c in cells if _INT_RE.match(c.strip()))
        if any(not c.strip() for c in cells):
            raise TableShapeError(
                f"column {column!r} has an empty cell", line=scenario.line
            )
        if truth == len(cells):
            kinds[column] = "bool"
        elif ints == len(cells):
            kinds[column] = "numeric"
        elif truth or ints:
            raise ConflictingSortError(
                f"column {column!r} mixes TRUE/FALSE or numbers with enum words",
                line=scenario.line,
            )
        else:
            kinds[column] = "enum"
    return kinds


def _plan_step(step: Step) -> _StepPlan:
    placeholders = _PLACEHOLDER_RE.findall(step.text)
    if len(placeholders) > 1:
        raise UnsupportedPhraseError(
            f"step uses more than one placeholder: {step.text!r}", line=step.line
        )
    for slot, pattern in (
        (_Slot.SET, _SET_SPLIT_RE),
        (_Slot.CHANGES, _CHANGES_SPLIT_RE),
        (_Slot.IS, _IS_SPLIT_RE),
    ):
        match = pattern.match(step.text)
        if not match:
            continue
        noun, value = match.group("noun"), match.group("value").strip()
        if placeholders:
            if value != f"<{placeholders[0]}>":
                raise UnsupportedPhraseError(
                    f"placeholder must fill the value slot: {step.text!r}", line=step.line
                )
            return _StepPlan(step.keyword, slot, noun, None, placeholders[0], step.line)
        if slot is _Slot.IS and _COMPARATOR_LEAD_RE.match(value):
            break  # comparison phrase; fall through to the full grammar
        return _StepPlan(step.keyword, slot, noun, value, None, step.line)
    if placeholders:
        raise UnsupportedPhraseError(
            f"cannot locate the placeholder's value slot in {step.text!r}", line=step.line
        )
    slot = _Slot.ACTION if step.keyword == "Then" else _Slot.CONDITION
    return _StepPlan(step.keyword, slot, None, step.text, None, step.line)


def _split_nouns(plans: list[_StepPlan]) -> frozenset[str]:
    """Noun phrases needing the initial/final state split: a literal Given
    state and a literal When "changes to" on the same noun."""

    given_state = {
        snake_case(p.noun)
        for p in plans
        if p.keyword == "Given" and p.slot is _Slot.IS and p.value is not None
    }
    when_change = {
        snake_case(p.noun)
        for p in plans
        if p.keyword == "When" and p.slot is _Slot.CHANGES and p.value is not None
    }
    return frozenset(given_state & when_change)


def _instantiate(
    plan: _StepPlan,
    row: dict[str, str],
    column_kinds: dict[str, str],
    split_nouns: frozenset[str],
    builder: SignatureBuilder,
) -> Formula:
    if plan.placeholder is not None:
        cell = row[plan.placeholder].strip()
        kind = column_kinds[plan.placeholder]
        if kind == "bool":
            var = snake_case(plan.noun, line=plan.line)
            builder.note_bool(var, plan.line)
            return BoolVar(var) if truth_value(cell) else Not(BoolVar(var))
        if kind == "numeric":
            var = snake_case(plan.placeholder, line=plan.line)
            builder.note_numeric(var, plan.line)
            return NumCmp(var, CmpOp.EQ, int(cell))
        var = snake_case(plan.placeholder, line=plan.line)
        value = value_name(cell, line=plan.line)
        builder.note_enum(var, value, plan.line)
        return EnumEq(var, value)

    if plan.slot in (_Slot.IS, _Slot.CHANGES, _Slot.SET):
        var = snake_case(plan.noun, line=plan.line)
        if var in split_nouns:
            var = f"initial_{var}" if plan.slot is _Slot.IS else f"final_{var}"
        value_phrase = plan.value
        if is_truth_word(value_phrase):
            builder.note_bool(var, plan.line)
            return BoolVar(var) if truth_value(value_phrase) else Not(BoolVar(var))
        negated = _NOT_WORD_RE.match(value_phrase) if plan.slot is _Slot.IS else None
        if negated:
            inner = negated.group(1)
            if is_truth_word(inner):
                builder.note_bool(var, plan.line)
                return Not(BoolVar(var)) if truth_value(inner) else BoolVar(var)
            value = value_name(inner, line=plan.line)
            builder.note_enum(var, value, plan.line)
            return Not(EnumEq(var, value))
        value = value_name(value_phrase, line=plan.line)
        builder.note_enum(var, value, plan.line)
        return EnumEq(var, value)

    if plan.slot is _Slot.ACTION:
        return parse_action(plan.value, builder, plan.line)
    return parse_condition(plan.value, builder, plan.line)
