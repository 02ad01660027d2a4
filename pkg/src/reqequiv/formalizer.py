"""Client for an external chat-completion formalizer service.

The service is asked to translate one requirement into a Lean proposition
(or to complete an equivalence theorem); the reply's first fenced lean code
block is extracted and validated through the Lean parser, so a response
either becomes well-formed IR or a typed error — the model's output is never
trusted structurally.  Failed validation retries with a correction
instruction appended, up to the configured retry budget.

Transports are pluggable.  ``HttpTransport`` speaks the chat-completions
wire format; ``ReplayTransport`` serves recorded request/response fixtures
from a directory, which is how the test suite runs with zero network access.
Fixture layout: one JSON file per exchange, ``{"request": <payload>,
"response": <body>}``; a request matches a fixture when their payloads are
equal.  Transcripts never contain the API key — the key is resolved from the
environment inside the HTTP transport only.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

from .errors import (
    InvalidLeanError,
    LeanParseError,
    NoCodeBlockError,
    RequestTimeoutError,
    ServiceUnreachableError,
    UnsupportedLeanError,
)
from .ir import Formula, Signature
from .lean import parse_lean_def

#: Prompt for turning one requirement (or scenario text) into a proposition.
FORMALIZE_PROMPT = """# Formalize the following requirement using Lean syntax:
{requirement}

Translate the natural language requirement into a formal Lean 4 proposition. The result should be a `def` statement that defines a proposition (`Prop`).

Complete the following code and substitute the brackets with appropriate variables from requirements:

The definition should have the following structure:

```lean4
-- define variables here
variable (<VARIABLE> : <TYPE>)
variable (<VARIABLE> : <TYPE>)

def <ACTION_name_FOR_function> : Prop :=
-- include all conditions in the given here and finally they should either imply or not imply the action
(CONDITION A \\land CONDITION B \\land ...) -> ACTION
```"""

#: Prompt for asking the prover to complete an equivalence theorem.
PROVE_PROMPT = """Given the following Lean code, reason out and finally prove that either:
- the given two functions are logically equivalent and consistent
- the given two functions are inconsistent

Continue and complete the theorem based on the provided code:

```lean4
{theorem_code}
```"""

CORRECTION_INSTRUCTION = (
    "The previous answer could not be used: {reason}. Reply again with exactly one "
    "fenced ```lean4``` code block containing only `variable` binders, optional "
    "`inductive` declarations, and a single `def <name> : Prop := ...` in plain "
    "propositional logic (no quantifiers, no arithmetic)."
)

_CODE_BLOCK_RE = re.compile(r"```lean4?[ \t]*\n(.*?)```", re.DOTALL)


@dataclass(frozen=True)
class FormalizerConfig:
    """Connection settings; the API key itself is never stored, only the
    name of the environment variable holding it."""

    endpoint: str
    model: str
    api_key_env: str = "FORMALIZER_API_KEY"
    timeout: float = 120.0
    max_retries: int = 2
    temperature: float = 0.0
    samples: int = 1  # exposed for k-pass experiments; only the first sample is used

    def __post_init__(self):
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")
        if self.samples < 1:
            raise ValueError("samples must be >= 1")

    @classmethod
    def from_env(cls, environ: dict[str, str] | None = None) -> FormalizerConfig:
        env = os.environ if environ is None else environ
        endpoint = env.get("FORMALIZER_URL")
        model = env.get("FORMALIZER_MODEL")
        if not endpoint or not model:
            raise ValueError("FORMALIZER_URL and FORMALIZER_MODEL must be set")
        return cls(
            endpoint=endpoint,
            model=model,
            api_key_env=env.get("FORMALIZER_API_KEY_ENV", "FORMALIZER_API_KEY"),
        )


class Transport(Protocol):
    def send(self, payload: dict) -> dict: ...


class HttpTransport:
    """POSTs chat-completion payloads to the configured endpoint."""

    def __init__(self, config: FormalizerConfig):
        self.config = config

    def send(self, payload: dict) -> dict:
        import httpx

        headers = {}
        key = os.environ.get(self.config.api_key_env)
        if key:
            headers["Authorization"] = f"Bearer {key}"
        try:
            response = httpx.post(
                self.config.endpoint,
                json=payload,
                headers=headers,
                timeout=self.config.timeout,
            )
        except httpx.TimeoutException as exc:
            raise RequestTimeoutError(f"formalizer request timed out: {exc}") from exc
        except httpx.HTTPError as exc:
            raise ServiceUnreachableError(f"formalizer unreachable: {exc}") from exc
        if response.status_code != 200:
            raise ServiceUnreachableError(
                f"formalizer returned HTTP {response.status_code}"
            )
        return response.json()


class ReplayTransport:
    """Serves recorded fixtures; raises SERVICE_UNREACHABLE on a miss."""

    def __init__(self, fixtures_dir: str | Path):
        self.fixtures_dir = Path(fixtures_dir)
        self._fixtures: list[dict] = []
        for path in sorted(self.fixtures_dir.glob("*.json")):
            self._fixtures.append(json.loads(path.read_text(encoding="utf-8")))

    def send(self, payload: dict) -> dict:
        for fixture in self._fixtures:
            if fixture.get("request") == payload:
                return fixture["response"]
        raise ServiceUnreachableError(
            f"no replay fixture in {self.fixtures_dir} matches the request"
        )


def save_fixture(path: str | Path, request: dict, response: dict) -> None:
    """Write one request/response pair in the replay layout."""

    Path(path).write_text(
        json.dumps({"request": request, "response": response}, indent=2, sort_keys=True)
        + "\n",
        encoding="utf-8",
    )


@dataclass(frozen=True)
class FormalizeResult:
    formula: Formula
    signature: Signature
    lean_text: str
    transcript: tuple[dict, ...]


@dataclass(frozen=True)
class ProveResult:
    proof_text: str
    transcript: tuple[dict, ...]


def _chat(
    messages: list[dict],
    cfg: FormalizerConfig,
    transport: Transport,
    transcript: list[dict],
) -> str:
    payload = {
        "model": cfg.model,
        "messages": list(messages),
        "temperature": cfg.temperature,
    }
    response = transport.send(payload)
    try:
        content = response["choices"][0]["message"]["content"]
    except (KeyError, IndexError, TypeError) as exc:
        raise ServiceUnreachableError(
            f"malformed formalizer response: missing choices[0].message.content ({exc})"
        ) from exc
    transcript.append({"role": "assistant", "content": content})
    return content


def _extract_block(content: str) -> str | None:
    match = _CODE_BLOCK_RE.search(content)
    return match.group(1) if match else None


def formalize_remote(
    requirement_text: str,
    cfg: FormalizerConfig,
    transport: Transport | None = None,
) -> FormalizeResult:
    """Formalize one requirement through the remote service and validate the
    reply into IR.  The full message transcript is returned for audit."""

    if not requirement_text.strip():
        raise ValueError("requirement text must be nonempty")
    if transport is None:
        transport = HttpTransport(cfg)

    prompt = FORMALIZE_PROMPT.format(requirement=requirement_text)
    messages: list[dict] = [{"role": "user", "content": prompt}]
    transcript: list[dict] = list(messages)
    last_error: Exception | None = None

    for attempt in range(cfg.max_retries + 1):
        try:
            content = _chat(messages, cfg, transport, transcript)
        except (ServiceUnreachableError, RequestTimeoutError):
            if attempt == cfg.max_retries:
                raise
            continue
        block = _extract_block(content)
        if block is None:
            last_error = NoCodeBlockError("response contains no fenced lean code block")
            reason = "no fenced lean4 code block was found"
        else:
            try:
                formula, sig = parse_lean_def(block)
                return FormalizeResult(formula, sig, block, tuple(transcript))
            except (LeanParseError, UnsupportedLeanError) as exc:
                last_error = exc
                reason = f"the lean code did not validate ({exc})"
        correction = {
            "role": "user",
            "content": CORRECTION_INSTRUCTION.format(reason=reason),
        }
        messages = messages + [{"role": "assistant", "content": content}, correction]
        transcript.append(correction)

    if isinstance(last_error, NoCodeBlockError):
        raise NoCodeBlockError(str(last_error), transcript=tuple(transcript))
    raise InvalidLeanError(
        f"no valid lean definition after {cfg.max_retries + 1} attempts: {last_error}",
        transcript=tuple(transcript),
    )


def prove_remote(
    theorem_text: str,
    cfg: FormalizerConfig,
    transport: Transport | None = None,
) -> ProveResult:
    """Send an emitted theorem to the prover and return its completion.

    The reply is not judged: the deterministic engine's verdict stands on
    its own, and the transcript lets users compare the prover's behavior
    against it."""

    if not theorem_text.strip():
        raise ValueError("theorem text must be nonempty")
    if transport is None:
        transport = HttpTransport(cfg)

    prompt = PROVE_PROMPT.format(theorem_code=theorem_text.rstrip("\n"))
    messages = [{"role": "user", "content": prompt}]
    transcript: list[dict] = list(messages)
    for attempt in range(cfg.max_retries + 1):
        try:
            content = _chat(messages, cfg, transport, transcript)
        except (ServiceUnreachableError, RequestTimeoutError):
            if attempt == cfg.max_retries:
                raise
            continue
        block = _extract_block(content)
        return ProveResult(block if block is not None else content, tuple(transcript))
    raise ServiceUnreachableError("formalizer gave no response")  # unreachable
