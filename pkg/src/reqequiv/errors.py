"""Typed error hierarchy shared by every pipeline stage.

Every error carries a stable machine-readable ``code`` string.  The CLI maps
codes onto its documented exit-code table; library users can catch either the
concrete class or :class:`ReqEquivError`.
"""

from __future__ import annotations


class ReqEquivError(Exception):
    """Base class for all errors raised by this package."""

    code = "ERROR"

    def __init__(self, message: str, *, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "")
            message = f"{message} ({where})"
        super().__init__(message)


# --- intermediate representation ---------------------------------------------

class UnboundVariableError(ReqEquivError):
    """An assignment misses (or binds beyond) the signature's variables."""

    code = "UNBOUND_VARIABLE"


class SortError(ReqEquivError):
    """A binding or construction violates a variable's declared sort."""

    code = "SORT_ERROR"


class MalformedIrError(ReqEquivError):
    """IR text could not be parsed; carries the failure position."""

    code = "MALFORMED_IR"


# --- equivalence engine -------------------------------------------------------

class PlanTooLargeError(ReqEquivError):
    """The assignment space exceeds the configured enumeration limit."""

    code = "PLAN_TOO_LARGE"

    def __init__(self, total_size: int, limit: int):
        self.total_size = total_size
        self.limit = limit
        super().__init__(
            f"domain plan enumerates {total_size} assignments, over the limit of {limit}"
        )


class SignatureMismatchError(ReqEquivError):
    """A formula references variables or values missing from its signature."""

    code = "SIGNATURE_MISMATCH"


# --- frontends ----------------------------------------------------------------

class ParseError(ReqEquivError):
    """Input text does not match the controlled grammar."""

    code = "PARSE_ERROR"


class UnsupportedPhraseError(ReqEquivError):
    """A phrase is grammatical text but outside the supported phrase set."""

    code = "UNSUPPORTED_PHRASE"


class TableShapeError(ReqEquivError):
    """An Examples table is ragged or its header disagrees with its rows."""

    code = "TABLE_SHAPE_ERROR"


class UnboundPlaceholderError(ReqEquivError):
    """A step uses a ``<placeholder>`` absent from the Examples header."""

    code = "UNBOUND_PLACEHOLDER"


class ConflictingSortError(ReqEquivError):
    """One variable or table column is used with incompatible sorts."""

    code = "CONFLICTING_SORT"


# --- grounding ----------------------------------------------------------------

class SortMismatchError(ReqEquivError):
    """Aliased variables have sorts of different kinds."""

    code = "SORT_MISMATCH"


class AliasToUndeclaredError(ReqEquivError):
    """A grounding entry references a variable or value that is not declared."""

    code = "ALIAS_TO_UNDECLARED"


class MalformedGroundingError(ReqEquivError):
    """A grounding-map file could not be parsed."""

    code = "MALFORMED_GROUNDING"


# --- Lean bridge ----------------------------------------------------------------

class LeanParseError(ReqEquivError):
    """Lean source text could not be parsed; carries the failure position."""

    code = "LEAN_PARSE_ERROR"


class UnsupportedLeanError(ReqEquivError):
    """Lean source uses a construct outside the supported subset."""

    code = "UNSUPPORTED_LEAN"


class EmitUnsupportedError(ReqEquivError):
    """The IR contains a construct the Lean emitter cannot express."""

    code = "EMIT_UNSUPPORTED"


# --- remote formalizer ----------------------------------------------------------

class FormalizerError(ReqEquivError):
    """Base class for remote-formalizer failures; may carry a transcript."""

    def __init__(self, message: str, *, transcript: tuple[dict, ...] = ()):
        self.transcript = transcript
        super().__init__(message)


class ServiceUnreachableError(FormalizerError):
    code = "SERVICE_UNREACHABLE"


class RequestTimeoutError(FormalizerError):
    code = "TIMEOUT"


class NoCodeBlockError(FormalizerError):
    """The response contains no fenced lean code block."""

    code = "NO_CODE_BLOCK"


class InvalidLeanError(FormalizerError):
    """Every returned code block failed validation, retries exhausted."""

    code = "INVALID_LEAN"
