"""Deterministic keyword-rule decomposition backend.

The default backend for tests, CI, and offline operation: same input,
byte-identical candidate document, no network. The rules, in the order
they contribute to the document:

  targets
    "engine <N>" (one or more)          -> static target list [N, ...]
    "all ... engines" or "fleet"        -> dynamic all-engines filter
    neither                             -> dynamic all-engines filter
  expectations
    "maintain ... working|well|running" -> maintain objective
    "avoid ... stops|failures|downtime" -> avoid objective
    bare "stop"/"shut down" verb        -> achieve objective (stop targets),
                                           except inside an avoid clause
    "check|status|inspect|show|report"  -> achieve objective (status report)
  conditions
    any mention of "rul"                -> rul >= critical threshold (cycles),
                                           threshold from maintenance policy
  context
    "predictive|proactive|plan*"        -> high priority, proactive scope
    stop verb                           -> high priority, immediate scope
    "immediate*|now|right away"         -> timeframe 0 days
  information
    rul mention                         -> rul_source = data_agent
    "table"                             -> output_format = table
    status-query phrasing               -> query = status

Inputs with no matching expectation rule yield a candidate with zero
expectations, which validation then rejects.
"""

from __future__ import annotations

import re
from typing import Any, Mapping, Sequence

from .base import FleetSummary

_ENGINE_LIST = re.compile(r"\bengines?\s+(\d+(?:(?:\s*,\s*|\s+and\s+)\d+)*)", re.IGNORECASE)
_ALL_ENGINES = re.compile(r"\ball\b[^.!?]*\bengines\b|\bfleet\b", re.IGNORECASE)
_MAINTAIN = re.compile(r"\bmaintain\b[^.!?]*\b(working|well|running|healthy)\b", re.IGNORECASE)
_AVOID = re.compile(r"\bavoid\w*\b[^.,!?;]*\b(stops?|failures?|downtime)\b", re.IGNORECASE)
_AVOID_CLAUSE = re.compile(r"\bavoid\w*\b[^.,!?;]*", re.IGNORECASE)
_STOP_VERB = re.compile(r"\b(stop|shut\s+down|shutdown)\b", re.IGNORECASE)
_QUERY = re.compile(r"\b(check|status|inspect|show|report)\b", re.IGNORECASE)
_RUL = re.compile(r"\brul\b", re.IGNORECASE)
_IMMEDIATE = re.compile(r"\b(immediate(?:ly)?|now|right\s+away)\b", re.IGNORECASE)
_PROACTIVE = re.compile(r"\b(predictive|proactive|plan(?:ned|ning)?)\b", re.IGNORECASE)
_TABLE = re.compile(r"\btable\b", re.IGNORECASE)


class RuleBackend:
    """Stateless pattern matcher producing candidate intent documents."""

    name = "rule"

    def __init__(self, critical_rul_threshold: float = 25.0):
        self.critical_rul_threshold = critical_rul_threshold

    def propose(
        self,
        raw_text: str,
        vocabulary: frozenset[str],
        fleet_summary: FleetSummary,
        violations: Sequence[str] = (),
    ) -> Mapping[str, Any]:
        # Rules are total; repair feedback cannot change a deterministic match.
        text = raw_text
        without_avoid = _AVOID_CLAUSE.sub(" ", text)

        expectations: list[dict[str, Any]] = []
        if _MAINTAIN.search(text):
            expectations.append(
                {
                    "description": "keep the target engines in working condition",
                    "objective": "maintain",
                    "metric": "rul" if _RUL.search(text) else None,
                }
            )
        if _AVOID.search(text):
            expectations.append(
                {
                    "description": "avoid unexpected stops and failures",
                    "objective": "avoid",
                    "metric": None,
                }
            )
        wants_stop = bool(_STOP_VERB.search(without_avoid))
        if wants_stop:
            expectations.append(
                {
                    "description": "stop the target engines",
                    "objective": "achieve",
                    "metric": None,
                }
            )
        is_query = bool(_QUERY.search(text)) and not wants_stop
        if is_query:
            expectations.append(
                {
                    "description": "report the current status of the target engines",
                    "objective": "achieve",
                    "metric": None,
                }
            )

        conditions: list[dict[str, Any]] = []
        if _RUL.search(text):
            conditions.append(
                {
                    "subject": "rul",
                    "comparator": "ge",
                    "threshold": self.critical_rul_threshold,
                    "unit": "cycles",
                }
            )

        engine_ids = _extract_engine_ids(text)
        if engine_ids:
            targets: dict[str, Any] = {"kind": "static", "engine_ids": engine_ids}
        else:
            targets = {"kind": "dynamic", "filter": {"kind": "all"}}

        proactive = bool(_PROACTIVE.search(text))
        priority = "high" if (proactive or wants_stop) else "normal"
        scope = "proactive maintenance" if proactive else ("immediate action" if wants_stop else "")
        timeframe = 0 if _IMMEDIATE.search(text) else None

        information: list[dict[str, str]] = []
        if _RUL.search(text):
            information.append({"key": "rul_source", "value": "data_agent"})
        if _TABLE.search(text):
            information.append({"key": "output_format", "value": "table"})
        if is_query:
            information.append({"key": "query", "value": "status"})

        return {
            "raw_text": raw_text,
            "expectations": expectations,
            "conditions": conditions,
            "targets": targets,
            "context": {"priority": priority, "timeframe_days": timeframe, "scope": scope},
            "information": information,
        }


def _extract_engine_ids(text: str) -> list[int]:
    ids: list[int] = []
    for match in _ENGINE_LIST.finditer(text):
        for token in re.split(r"\s*,\s*|\s+and\s+", match.group(1)):
            eid = int(token)
            if eid not in ids:
                ids.append(eid)
    return ids
