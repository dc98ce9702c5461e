"""Decomposition driver: backend proposes, validator repairs.

A backend turns raw operator text into a candidate intent document. The
driver validates the candidate and, on violations, re-prompts the same
backend with the violation list, up to max_attempts. Backends are
stateless across calls; every bit of state travels in the arguments.
"""

from __future__ import annotations

import uuid
from dataclasses import dataclass, field
from typing import Any, Mapping, Protocol, Sequence

from ..chat import BackendUnavailable, MalformedResponse
from ..fleet.schema import METRIC_VOCABULARY
from ..intents import Intent, MalformedIntentDocument, intent_from_dict, validate_intent

__all__ = [
    "BackendUnavailable",
    "DecomposerBackend",
    "DecompositionFailed",
    "DecompositionReport",
    "FleetSummary",
    "MalformedResponse",
    "decompose",
]


@dataclass(frozen=True)
class FleetSummary:
    engine_count: int
    engine_ids: tuple[int, ...]

    def to_dict(self) -> dict[str, Any]:
        return {"engine_count": self.engine_count, "engine_ids": list(self.engine_ids)}


class DecomposerBackend(Protocol):
    name: str

    def propose(
        self,
        raw_text: str,
        vocabulary: frozenset[str],
        fleet_summary: FleetSummary,
        violations: Sequence[str] = (),
    ) -> Mapping[str, Any]:
        """Return a candidate intent document for the raw text.

        On a repair attempt, `violations` holds what was wrong with the
        previous candidate.
        """
        ...


@dataclass(frozen=True)
class DecompositionReport:
    intent: Intent
    backend_name: str
    attempts: int
    repairs: tuple[tuple[str, ...], ...] = ()  # violation list fed back per retry

    def to_dict(self) -> dict[str, Any]:
        from ..intents import intent_to_dict

        return {
            "intent": intent_to_dict(self.intent),
            "backend_name": self.backend_name,
            "attempts": self.attempts,
            "repairs": [list(r) for r in self.repairs],
        }


class DecompositionFailed(ValueError):
    def __init__(self, violations: Sequence[str], attempts: int):
        super().__init__(
            f"decomposition failed after {attempts} attempt(s): {'; '.join(violations)}"
        )
        self.violations = list(violations)
        self.attempts = attempts


def decompose(
    raw_text: str,
    backend: DecomposerBackend,
    fleet_summary: FleetSummary,
    vocabulary: frozenset[str] = METRIC_VOCABULARY,
    max_attempts: int = 3,
) -> DecompositionReport:
    """Decompose raw text into a validated intent, repairing as needed."""
    if not raw_text.strip():
        raise ValueError("raw_text must be non-empty")

    violations: list[str] = []
    repairs: list[tuple[str, ...]] = []
    for attempt in range(1, max_attempts + 1):
        try:
            candidate = backend.propose(raw_text, vocabulary, fleet_summary, tuple(violations))
            intent = intent_from_dict(_with_identity(candidate, raw_text))
        except (MalformedIntentDocument, MalformedResponse) as exc:
            violations = [str(exc)]
            repairs.append(tuple(violations))
            continue
        violations = validate_intent(intent, vocabulary)
        if intent.raw_text != raw_text:
            violations.append("raw_text not preserved verbatim")
        if not violations:
            return DecompositionReport(
                intent=intent,
                backend_name=backend.name,
                attempts=attempt,
                repairs=tuple(repairs),
            )
        repairs.append(tuple(violations))
    raise DecompositionFailed(violations, attempts=max_attempts)


def _with_identity(candidate: Mapping[str, Any], raw_text: str) -> dict[str, Any]:
    # Backends emit deterministic documents; identity is assigned here.
    doc = dict(candidate)
    doc.setdefault("id", f"intent-{uuid.uuid4().hex[:12]}")
    doc.setdefault("raw_text", raw_text)
    return doc
