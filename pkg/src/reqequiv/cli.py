"""Command-line surface for the verification pipeline.

Subcommands map onto the pipeline stages: ``formalize`` (text -> IR),
``suggest`` (draft grounding map), ``check`` (grounded equivalence decision
with a machine-readable report), ``verify`` (formalize both sides then
check), ``emit-lean`` (theorem file for an external prover).

Exit codes, stable and CI-friendly:

====  ==========================================================
   0  success; for check/verify: verdict EQUIVALENT
   1  check/verify verdict NOT_EQUIVALENT
   2  command-line usage error
   3  I/O error (missing or unreadable/unwritable file)
   4  input parse error (requirement, feature, IR, or Lean text)
   5  grounding error (bad map, undeclared alias, sort mismatch)
   6  engine abort (domain plan too large, signature mismatch)
   7  remote formalizer error (unreachable, timeout, bad reply)
====  ==========================================================

Reports are deterministic: identical inputs produce byte-identical report
files (no timestamps).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .engine import DEFAULT_ASSIGNMENT_LIMIT, EquivalenceReport, Verdict, decide
from .errors import (
    AliasToUndeclaredError,
    ConflictingSortError,
    EmitUnsupportedError,
    InvalidLeanError,
    LeanParseError,
    MalformedGroundingError,
    MalformedIrError,
    NoCodeBlockError,
    ParseError,
    PlanTooLargeError,
    ReqEquivError,
    RequestTimeoutError,
    ServiceUnreachableError,
    SignatureMismatchError,
    SortError,
    SortMismatchError,
    TableShapeError,
    UnboundPlaceholderError,
    UnboundVariableError,
    UnsupportedLeanError,
    UnsupportedPhraseError,
)
from .formalizer import (
    FormalizerConfig,
    HttpTransport,
    ReplayTransport,
    formalize_remote,
    prove_remote,
)
from .gherkin import compile_feature
from .grounding import (
    EMPTY_MAP,
    GroundingDiagnostics,
    apply_grounding,
    format_suggestion_draft,
    parse_grounding_map,
    suggest_grounding,
)
from .irtext import parse_ir, serialize_ir
from .lean import emit_lean_theorem
from .requirements import load_requirements, parse_requirement

EXIT_OK = 0
EXIT_NOT_EQUIVALENT = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_INPUT = 4
EXIT_GROUNDING = 5
EXIT_ENGINE = 6
EXIT_REMOTE = 7

_EXIT_BY_CODE = {
    UnboundVariableError.code: EXIT_INPUT,
    SortError.code: EXIT_INPUT,
    MalformedIrError.code: EXIT_INPUT,
    ParseError.code: EXIT_INPUT,
    UnsupportedPhraseError.code: EXIT_INPUT,
    TableShapeError.code: EXIT_INPUT,
    UnboundPlaceholderError.code: EXIT_INPUT,
    ConflictingSortError.code: EXIT_INPUT,
    LeanParseError.code: EXIT_INPUT,
    UnsupportedLeanError.code: EXIT_INPUT,
    EmitUnsupportedError.code: EXIT_INPUT,
    SortMismatchError.code: EXIT_GROUNDING,
    AliasToUndeclaredError.code: EXIT_GROUNDING,
    MalformedGroundingError.code: EXIT_GROUNDING,
    PlanTooLargeError.code: EXIT_ENGINE,
    SignatureMismatchError.code: EXIT_ENGINE,
    ServiceUnreachableError.code: EXIT_REMOTE,
    RequestTimeoutError.code: EXIT_REMOTE,
    NoCodeBlockError.code: EXIT_REMOTE,
    InvalidLeanError.code: EXIT_REMOTE,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ReqEquivError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return _EXIT_BY_CODE.get(exc.code, EXIT_ENGINE)
    except OSError as exc:
        print(f"error[IO]: {exc}", file=sys.stderr)
        return EXIT_IO


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reqequiv",
        description="Formalize requirements and Gherkin scenarios, ground their "
        "variables, and decide logical equivalence with counterexamples.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(required=True)

    p = sub.add_parser("formalize", help="compile a requirement or feature file to IR")
    p.add_argument("input", help="requirement (.req/.txt) or feature (.feature) file")
    p.add_argument("-o", "--output", help="IR output path (default: input stem + .ir)")
    p.add_argument("--engine", choices=["rules", "llm"], default="rules")
    p.add_argument("--id", help="requirement id to pick from a multi-requirement file")
    p.add_argument("--fixtures", help="replay fixtures directory for --engine llm")
    p.set_defaults(func=_cmd_formalize)

    p = sub.add_parser("suggest", help="print a draft grounding map for two IR files")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--threshold", type=float, default=0.34)
    p.set_defaults(func=_cmd_suggest)

    p = sub.add_parser("check", help="decide equivalence of two IR files")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("-g", "--grounding", help="grounding map file")
    p.add_argument("-o", "--report", help="write the structured report here")
    p.add_argument("--limit", type=int, default=DEFAULT_ASSIGNMENT_LIMIT,
                   help="assignment enumeration cap")
    p.add_argument("--also-prove", action="store_true",
                   help="also send the emitted theorem to the remote prover and "
                        "attach its transcript to the report")
    p.add_argument("--fixtures", help="replay fixtures directory for --also-prove")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("verify", help="formalize a requirement and a feature, then check")
    p.add_argument("requirement")
    p.add_argument("feature")
    p.add_argument("-g", "--grounding")
    p.add_argument("-o", "--report")
    p.add_argument("--id", help="requirement id to pick from a multi-requirement file")
    p.add_argument("--limit", type=int, default=DEFAULT_ASSIGNMENT_LIMIT)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("emit-lean", help="emit an equivalence theorem for two IR files")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("-g", "--grounding")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--left-name", help="Lean name for the left proposition")
    p.add_argument("--right-name", help="Lean name for the right proposition")
    p.add_argument("--theorem-name")
    p.set_defaults(func=_cmd_emit_lean)

    return parser


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _formalize_rules(path: str, req_id: str | None):
    text = _read(path)
    if Path(path).suffix == ".feature":
        return compile_feature(text, path)
    docs = load_requirements(text, path)
    if req_id is not None:
        matches = [d for d in docs if d.id == req_id]
        if not matches:
            raise ParseError(f"no requirement with id {req_id!r} in {path}")
        return parse_requirement(matches[0])
    if len(docs) > 1:
        raise ParseError(
            f"{path} holds {len(docs)} requirements; pick one with --id"
        )
    return parse_requirement(docs[0])


def _transport_for(args) -> HttpTransport | ReplayTransport:
    cfg = FormalizerConfig.from_env()
    if getattr(args, "fixtures", None):
        return ReplayTransport(args.fixtures)
    return HttpTransport(cfg)


def _cmd_formalize(args) -> int:
    if args.engine == "rules":
        formula, sig = _formalize_rules(args.input, args.id)
    else:
        cfg = FormalizerConfig.from_env()
        transport = ReplayTransport(args.fixtures) if args.fixtures else HttpTransport(cfg)
        result = formalize_remote(_read(args.input), cfg, transport)
        formula, sig = result.formula, result.signature
    output = args.output or str(Path(args.input).with_suffix(".ir"))
    Path(output).write_text(serialize_ir(formula, sig), encoding="utf-8")
    print(f"wrote {output}")
    return EXIT_OK


def _cmd_suggest(args) -> int:
    _, sig_a = parse_ir(_read(args.left), args.left)
    _, sig_b = parse_ir(_read(args.right), args.right)
    suggestions = suggest_grounding(sig_a, sig_b, threshold=args.threshold)
    if not suggestions:
        print("warning: the two signatures share no similar variable names",
              file=sys.stderr)
    sys.stdout.write(format_suggestion_draft(suggestions, threshold=args.threshold))
    return EXIT_OK


def _load_grounding(path: str | None):
    if path is None:
        return EMPTY_MAP
    return parse_grounding_map(_read(path), path)


def _check_pair(left, right, gmap, limit: int) -> tuple[EquivalenceReport, GroundingDiagnostics]:
    grounded = apply_grounding(left, right, gmap)
    report = decide(
        grounded.formula_a,
        grounded.formula_b,
        grounded.signature,
        limit,
        ungrounded_left=grounded.diagnostics.ungrounded_left,
        ungrounded_right=grounded.diagnostics.ungrounded_right,
    )
    return report, grounded.diagnostics


def render_report(report: EquivalenceReport, extra_sections: list[str] | None = None) -> str:
    """Stable field order: verdict, directions, witness, ungrounded lists,
    plan size, soundness, tool version."""

    def flag(value: bool | None) -> str:
        return "unknown" if value is None else ("true" if value else "false")

    lines = [
        f"verdict: {report.verdict.value}",
        f"forward_holds: {flag(report.forward_holds)}",
        f"reverse_holds: {flag(report.reverse_holds)}",
    ]
    if report.witness is None:
        lines.append("witness: (none)")
    else:
        lines.append("witness:")
        for name in sorted(report.witness):
            lines.append(f"  {name} = {_value_text(report.witness[name])}")
    lines.append(_name_list("ungrounded_left", report.ungrounded_left))
    lines.append(_name_list("ungrounded_right", report.ungrounded_right))
    lines.append(f"assignments_checked: {report.assignments_checked}")
    lines.append(f"domain_plan_size: {report.domain_plan_size}")
    lines.append(f"soundness_note: {report.soundness_note}")
    lines.append(f"tool_version: {__version__}")
    if extra_sections:
        lines.extend(extra_sections)
    return "\n".join(lines) + "\n"


def _value_text(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def _name_list(label: str, names: tuple[str, ...]) -> str:
    return f"{label}: {', '.join(sorted(names)) if names else '(none)'}"


def _print_summary(report: EquivalenceReport) -> None:
    print(f"verdict: {report.verdict.value}")
    if report.witness is not None:
        print("counterexample (the two formulas disagree here):")
        for name in sorted(report.witness):
            print(f"  {name} = {_value_text(report.witness[name])}")
    for side, names in (("left", report.ungrounded_left), ("right", report.ungrounded_right)):
        if names:
            print(
                f"warning: ungrounded {side}-side variables widen the domain: "
                + ", ".join(sorted(names))
            )


def _finish_check(report: EquivalenceReport, report_path: str | None,
                  extra_sections: list[str] | None = None) -> int:
    if report_path:
        Path(report_path).write_text(render_report(report, extra_sections), encoding="utf-8")
    _print_summary(report)
    return EXIT_OK if report.verdict is Verdict.EQUIVALENT else EXIT_NOT_EQUIVALENT


def _aborted_report(exc: PlanTooLargeError) -> EquivalenceReport:
    return EquivalenceReport(
        verdict=Verdict.ABORTED,
        forward_holds=None,
        reverse_holds=None,
        witness=None,
        assignments_checked=0,
        domain_plan_size=exc.total_size,
    )


def _cmd_check(args) -> int:
    left = parse_ir(_read(args.left), args.left)
    right = parse_ir(_read(args.right), args.right)
    gmap = _load_grounding(args.grounding)
    try:
        report, _diags = _check_pair(left, right, gmap, args.limit)
    except PlanTooLargeError as exc:
        if args.report:
            Path(args.report).write_text(
                render_report(_aborted_report(exc)), encoding="utf-8"
            )
        raise
    extra: list[str] | None = None
    if args.also_prove:
        cfg = FormalizerConfig.from_env()
        transport = ReplayTransport(args.fixtures) if args.fixtures else HttpTransport(cfg)
        theorem = emit_lean_theorem(left, right, gmap, name_a="left_prop", name_b="right_prop")
        proof = prove_remote(theorem, cfg, transport)
        extra = ["prover_transcript:"]
        for message in proof.transcript:
            extra.append(f"  [{message['role']}]")
            extra.extend(f"  | {line}" for line in message["content"].split("\n"))
    return _finish_check(report, args.report, extra)


def _cmd_verify(args) -> int:
    left = _formalize_rules(args.requirement, args.id)
    feature_text = _read(args.feature)
    right = compile_feature(feature_text, args.feature)
    gmap = _load_grounding(args.grounding)
    report, _diags = _check_pair(left, right, gmap, args.limit)
    return _finish_check(report, args.report)


def _lean_name(path: str) -> str:
    stem = Path(path).stem
    name = "".join(ch if ch.isalnum() or ch == "_" else "_" for ch in stem)
    if not name or name[0].isdigit():
        name = f"p_{name}"
    return name


def _cmd_emit_lean(args) -> int:
    left = parse_ir(_read(args.left), args.left)
    right = parse_ir(_read(args.right), args.right)
    gmap = _load_grounding(args.grounding)
    name_a = args.left_name or _lean_name(args.left)
    name_b = args.right_name or _lean_name(args.right)
    if name_a == name_b:
        name_b = f"{name_b}_2"
    text = emit_lean_theorem(
        left, right, gmap, name_a=name_a, name_b=name_b, theorem_name=args.theorem_name
    )
    Path(args.output).write_text(text, encoding="utf-8")
    print(f"wrote {args.output}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
