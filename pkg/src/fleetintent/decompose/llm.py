"""Chat-completion decomposition backend.

Opt-in via config; never exercised live in CI. Tests replay recorded
response fixtures through the parser and repair loop instead.
"""

from __future__ import annotations

from importlib import resources
from typing import Any, Mapping, Sequence

from ..chat import ChatCompletionClient, extract_json_document
from .base import FleetSummary


def load_prompt_template() -> str:
    return (
        resources.files("fleetintent.decompose")
        .joinpath("prompt_template.txt")
        .read_text(encoding="utf-8")
    )


class LlmBackend:
    name = "llm"

    def __init__(self, client: ChatCompletionClient, critical_rul_threshold: float = 25.0):
        self.client = client
        self.critical_rul_threshold = critical_rul_threshold
        self._template = load_prompt_template()

    def propose(
        self,
        raw_text: str,
        vocabulary: frozenset[str],
        fleet_summary: FleetSummary,
        violations: Sequence[str] = (),
    ) -> Mapping[str, Any]:
        system = self._template.format(
            vocabulary=", ".join(sorted(vocabulary)),
            engine_count=fleet_summary.engine_count,
            engine_ids=", ".join(str(i) for i in fleet_summary.engine_ids),
            critical_threshold=self.critical_rul_threshold,
        )
        messages = [
            {"role": "system", "content": system},
            {"role": "user", "content": raw_text},
        ]
        if violations:
            messages.append(
                {
                    "role": "user",
                    "content": (
                        "Your previous decomposition was rejected for these violations; "
                        "fix them and reply with the corrected JSON object only:\n- "
                        + "\n- ".join(violations)
                    ),
                }
            )
        reply = self.client.complete(messages)
        doc = extract_json_document(reply)
        doc.pop("id", None)  # identity is assigned by the driver
        doc["raw_text"] = raw_text
        return doc
