from .base import (
    BackendUnavailable,
    DecomposerBackend,
    DecompositionFailed,
    DecompositionReport,
    FleetSummary,
    MalformedResponse,
    decompose,
)
from .llm import LlmBackend, load_prompt_template
from .rules import RuleBackend

__all__ = [
    "BackendUnavailable",
    "DecomposerBackend",
    "DecompositionFailed",
    "DecompositionReport",
    "FleetSummary",
    "LlmBackend",
    "MalformedResponse",
    "RuleBackend",
    "decompose",
    "load_prompt_template",
]
