"""Requirements-equivalence verifier.

Compiles controlled natural-language requirements and Gherkin scenarios into
a typed propositional representation, merges the two sides through an
auditable grounding map, and decides biconditional equivalence by exhaustive
enumeration with a numeric boundary abstraction — producing per-direction
verdicts and machine-checkable counterexamples.  A Lean 4 bridge emits and
ingests the propositional subset so an external prover can be compared
against the deterministic verdict.
"""

from .engine import (
    DEFAULT_ASSIGNMENT_LIMIT,
    DomainPlan,
    EquivalenceReport,
    SatResult,
    SatStatus,
    Verdict,
    build_domain_plan,
    check_satisfiable,
    decide,
)
from .errors import ReqEquivError
from .formalizer import (
    FormalizeResult,
    FormalizerConfig,
    HttpTransport,
    ProveResult,
    ReplayTransport,
    formalize_remote,
    prove_remote,
)
from .gherkin import GherkinScenario, compile_feature, compile_scenario, parse_feature
from .grounding import (
    EMPTY_MAP,
    GroundingDiagnostics,
    GroundingMap,
    GroundingResult,
    Suggestion,
    apply_grounding,
    parse_grounding_map,
    suggest_grounding,
    token_similarity,
)
from .ir import (
    And,
    Assignment,
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
    Value,
    VariableDecl,
    evaluate,
    free_variables,
    normalize,
    validate_formula,
)
from .irtext import parse_ir, serialize_ir
from .lean import emit_lean_def, emit_lean_theorem, parse_lean_def
from .requirements import RequirementDoc, load_requirements, parse_requirement

__version__ = "0.1.0"

__all__ = [
    "And",
    "Assignment",
    "BoolVar",
    "CmpOp",
    "DEFAULT_ASSIGNMENT_LIMIT",
    "DomainPlan",
    "EMPTY_MAP",
    "EnumEq",
    "EquivalenceReport",
    "Formula",
    "FormalizeResult",
    "FormalizerConfig",
    "GherkinScenario",
    "GroundingDiagnostics",
    "GroundingMap",
    "GroundingResult",
    "HttpTransport",
    "Iff",
    "Implies",
    "Not",
    "NumCmp",
    "Or",
    "ProveResult",
    "ReplayTransport",
    "ReqEquivError",
    "RequirementDoc",
    "SatResult",
    "SatStatus",
    "Signature",
    "Sort",
    "SortKind",
    "SourceSpan",
    "Suggestion",
    "Value",
    "VariableDecl",
    "Verdict",
    "apply_grounding",
    "build_domain_plan",
    "check_satisfiable",
    "compile_feature",
    "compile_scenario",
    "decide",
    "emit_lean_def",
    "emit_lean_theorem",
    "evaluate",
    "formalize_remote",
    "free_variables",
    "load_requirements",
    "normalize",
    "parse_feature",
    "parse_grounding_map",
    "parse_ir",
    "parse_lean_def",
    "parse_requirement",
    "prove_remote",
    "serialize_ir",
    "suggest_grounding",
    "token_similarity",
    "validate_formula",
    "__version__",
]
