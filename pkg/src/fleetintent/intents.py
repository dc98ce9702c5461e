"""Five-component intent model and compliance evaluation.

An operator request decomposes into expectations (what must hold),
conditions (measurable tests), targets (which engines), context
(priority, timeframe, scope), and information (auxiliary data). All
types are immutable values; the operations here are pure functions, so
intents can be shared and evaluated from any number of concurrent
sessions.

The JSON encoding produced by ``intent_to_dict`` / ``intent_from_dict``
is the interchange contract between decomposer backends, the HTTP
service, and the operator console: field names match the dataclass
fields and enums are lowercase strings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Mapping, Sequence

from .fleet.schema import METRIC_VOCABULARY, canonicalize_metric


class Objective(str, Enum):
    MAINTAIN = "maintain"
    AVOID = "avoid"
    ACHIEVE = "achieve"


class Comparator(str, Enum):
    LT = "lt"
    LE = "le"
    GT = "gt"
    GE = "ge"
    EQ = "eq"

    def apply(self, measured: float, threshold: float) -> bool:
        if self is Comparator.LT:
            return measured < threshold
        if self is Comparator.LE:
            return measured <= threshold
        if self is Comparator.GT:
            return measured > threshold
        if self is Comparator.GE:
            return measured >= threshold
        return measured == threshold


class Priority(str, Enum):
    LOW = "low"
    NORMAL = "normal"
    HIGH = "high"


class ComplianceLabel(str, Enum):
    COMPLIANT = "compliant"
    NON_COMPLIANT = "non_compliant"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Expectation:
    """What is required from the system, e.g. keep engines running."""

    description: str
    objective: Objective
    metric: str | None = None


@dataclass(frozen=True)
class Condition:
    """Measurable test deciding whether an expectation is met."""

    subject: str
    comparator: Comparator
    threshold: float
    unit: str = ""


@dataclass(frozen=True)
class TargetFilter:
    """Dynamic target criterion: all engines, or a metric threshold."""

    kind: str  # "all" | "metric_below" | "metric_at_least"
    metric: str | None = None
    value: float | None = None


@dataclass(frozen=True)
class TargetSelector:
    """Engines an intent applies to, as an explicit list or a filter."""

    kind: str  # "static" | "dynamic"
    engine_ids: tuple[int, ...] | None = None
    filter: TargetFilter | None = None

    @classmethod
    def static(cls, engine_ids: Sequence[int]) -> "TargetSelector":
        return cls(kind="static", engine_ids=tuple(engine_ids))

    @classmethod
    def all_engines(cls) -> "TargetSelector":
        return cls(kind="dynamic", filter=TargetFilter(kind="all"))

    @classmethod
    def metric_below(cls, metric: str, value: float) -> "TargetSelector":
        return cls(kind="dynamic", filter=TargetFilter("metric_below", metric, value))

    @classmethod
    def metric_at_least(cls, metric: str, value: float) -> "TargetSelector":
        return cls(kind="dynamic", filter=TargetFilter("metric_at_least", metric, value))


@dataclass(frozen=True)
class IntentContext:
    priority: Priority = Priority.NORMAL
    timeframe_days: int | None = None
    scope: str = ""


@dataclass(frozen=True)
class InfoItem:
    key: str
    value: str


@dataclass(frozen=True)
class Intent:
    id: str
    raw_text: str
    expectations: tuple[Expectation, ...]
    conditions: tuple[Condition, ...] = ()
    targets: TargetSelector = field(default_factory=TargetSelector.all_engines)
    context: IntentContext = field(default_factory=IntentContext)
    information: tuple[InfoItem, ...] = ()


@dataclass(frozen=True)
class Evidence:
    engine_id: int
    metric: str
    value: float


@dataclass(frozen=True)
class ComplianceStatus:
    """Per-expectation verdict with the measurements that were examined."""

    expectation: Expectation
    status: ComplianceLabel
    evidence: tuple[Evidence, ...] = ()


@dataclass(frozen=True)
class TargetResolution:
    engine_ids: tuple[int, ...]
    warnings: tuple[str, ...] = ()


def validate_intent(intent: Intent, vocabulary: frozenset[str] = METRIC_VOCABULARY) -> list[str]:
    """Return every invariant violation; an empty list means the intent is valid.

    Violations are data, not failures: the decomposition repair loop feeds
    them back to the backend verbatim.
    """
    violations: list[str] = []
    if not intent.expectations:
        violations.append("no expectations")
    for i, exp in enumerate(intent.expectations):
        if not exp.description.strip():
            violations.append(f"expectation {i}: empty description")
        if exp.metric is not None and exp.metric not in vocabulary:
            violations.append(f"expectation {i}: metric '{exp.metric}' not in vocabulary")
    for i, cond in enumerate(intent.conditions):
        if cond.subject not in vocabulary:
            violations.append(f"condition {i}: subject '{cond.subject}' not in vocabulary")
        if not math.isfinite(cond.threshold):
            violations.append(f"condition {i}: threshold not finite")
    violations.extend(_validate_targets(intent.targets, vocabulary))
    ctx = intent.context
    if ctx.timeframe_days is not None and (
        not isinstance(ctx.timeframe_days, int) or ctx.timeframe_days < 0
    ):
        violations.append("context: timeframe_days must be a non-negative integer")
    for i, item in enumerate(intent.information):
        if not item.key.strip():
            violations.append(f"information {i}: empty key")
    return violations


def _validate_targets(targets: TargetSelector, vocabulary: frozenset[str]) -> list[str]:
    violations: list[str] = []
    if targets.kind == "static":
        ids = targets.engine_ids or ()
        if not ids:
            violations.append("empty static target list")
        if len(set(ids)) != len(ids):
            violations.append("duplicate ids in static target list")
    elif targets.kind == "dynamic":
        flt = targets.filter
        if flt is None:
            violations.append("dynamic targets missing filter")
        elif flt.kind in ("metric_below", "metric_at_least"):
            if flt.metric not in vocabulary:
                violations.append(f"target filter metric '{flt.metric}' not in vocabulary")
            if flt.value is None or not math.isfinite(flt.value):
                violations.append("target filter value missing or not finite")
        elif flt.kind != "all":
            violations.append(f"unknown target filter kind '{flt.kind}'")
    else:
        violations.append(f"unknown target selector kind '{targets.kind}'")
    return violations


def evaluate_condition(cond: Condition, measured: float) -> bool:
    """Apply the condition's comparator as (measured OP threshold)."""
    if not math.isfinite(measured):
        raise ValueError(f"measured value for '{cond.subject}' is not finite: {measured}")
    return cond.comparator.apply(measured, cond.threshold)


def resolve_targets(
    selector: TargetSelector,
    fleet_ids: Sequence[int],
    metric_lookup: Mapping[int, float] | None = None,
) -> TargetResolution:
    """Resolve a selector to concrete engine ids, preserving fleet order.

    Static ids absent from the fleet are dropped and reported as warnings
    rather than failing the whole resolution.
    """
    lookup = metric_lookup or {}
    if selector.kind == "static":
        wanted = set(selector.engine_ids or ())
        present = tuple(eid for eid in fleet_ids if eid in wanted)
        missing = sorted(wanted - set(present))
        warnings = tuple(f"engine {eid} not in fleet" for eid in missing)
        return TargetResolution(engine_ids=present, warnings=warnings)

    flt = selector.filter or TargetFilter(kind="all")
    if flt.kind == "all":
        return TargetResolution(engine_ids=tuple(dict.fromkeys(fleet_ids)))

    chosen: list[int] = []
    warnings: list[str] = []
    for eid in fleet_ids:
        if eid not in lookup:
            warnings.append(f"engine {eid}: no value for metric '{flt.metric}'")
            continue
        value = lookup[eid]
        keep = value < flt.value if flt.kind == "metric_below" else value >= flt.value
        if keep:
            chosen.append(eid)
    return TargetResolution(engine_ids=tuple(dict.fromkeys(chosen)), warnings=tuple(warnings))


def evaluate_compliance(
    intent: Intent,
    measurements: Mapping[int, Mapping[str, float]],
) -> list[ComplianceStatus]:
    """Evaluate every expectation against the intent's conditions.

    An expectation is compliant iff every condition holds on every resolved
    target; unknown if any required metric is missing (a telemetry gap must
    not read as a violation); non-compliant otherwise.
    """
    fleet_ids = list(measurements.keys())
    lookup: dict[int, float] = {}
    if intent.targets.kind == "dynamic" and intent.targets.filter and intent.targets.filter.metric:
        m = intent.targets.filter.metric
        lookup = {eid: vals[m] for eid, vals in measurements.items() if m in vals}
    resolution = resolve_targets(intent.targets, fleet_ids, lookup)

    results: list[ComplianceStatus] = []
    for exp in intent.expectations:
        evidence: dict[tuple[int, str], Evidence] = {}  # one entry per examined measurement
        missing = False
        violated = False
        for cond in intent.conditions:
            for eid in resolution.engine_ids:
                value = measurements.get(eid, {}).get(cond.subject)
                if value is None:
                    missing = True
                    continue
                evidence[(eid, cond.subject)] = Evidence(eid, cond.subject, value)
                if not evaluate_condition(cond, value):
                    violated = True
        if missing:
            status = ComplianceLabel.UNKNOWN
        elif violated:
            status = ComplianceLabel.NON_COMPLIANT
        else:
            status = ComplianceLabel.COMPLIANT
        results.append(
            ComplianceStatus(expectation=exp, status=status, evidence=tuple(evidence.values()))
        )
    return results


# --- JSON interchange -------------------------------------------------------


def intent_to_dict(intent: Intent) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "id": intent.id,
        "raw_text": intent.raw_text,
        "expectations": [
            {"description": e.description, "objective": e.objective.value, "metric": e.metric}
            for e in intent.expectations
        ],
        "conditions": [
            {
                "subject": c.subject,
                "comparator": c.comparator.value,
                "threshold": c.threshold,
                "unit": c.unit,
            }
            for c in intent.conditions
        ],
        "targets": _targets_to_dict(intent.targets),
        "context": {
            "priority": intent.context.priority.value,
            "timeframe_days": intent.context.timeframe_days,
            "scope": intent.context.scope,
        },
        "information": [{"key": i.key, "value": i.value} for i in intent.information],
    }
    return doc


def _targets_to_dict(targets: TargetSelector) -> dict[str, Any]:
    if targets.kind == "static":
        return {"kind": "static", "engine_ids": list(targets.engine_ids or ())}
    flt = targets.filter or TargetFilter(kind="all")
    out: dict[str, Any] = {"kind": "dynamic", "filter": {"kind": flt.kind}}
    if flt.kind != "all":
        out["filter"]["metric"] = flt.metric
        out["filter"]["value"] = flt.value
    return out


class MalformedIntentDocument(ValueError):
    """A candidate document lacks the structure of an intent."""


def intent_from_dict(doc: Mapping[str, Any]) -> Intent:
    """Decode the interchange encoding back into an Intent.

    Structural problems (wrong shapes, unknown enum values) raise
    MalformedIntentDocument; semantic problems are left to validate_intent.
    """
    try:
        expectations = tuple(
            Expectation(
                description=str(e.get("description", "")),
                objective=Objective(str(e.get("objective", "")).lower()),
                metric=_opt_str(e.get("metric")),
            )
            for e in doc.get("expectations", [])
        )
        conditions = tuple(
            Condition(
                subject=canonicalize_metric(str(c.get("subject", ""))),
                comparator=Comparator(str(c.get("comparator", "")).lower()),
                threshold=float(c.get("threshold")),
                unit=str(c.get("unit", "")),
            )
            for c in doc.get("conditions", [])
        )
        targets = _targets_from_dict(doc.get("targets") or {"kind": "dynamic", "filter": {"kind": "all"}})
        ctx_doc = doc.get("context") or {}
        timeframe = ctx_doc.get("timeframe_days")
        context = IntentContext(
            priority=Priority(str(ctx_doc.get("priority", "normal")).lower()),
            timeframe_days=int(timeframe) if timeframe is not None else None,
            scope=str(ctx_doc.get("scope", "")),
        )
        information = tuple(
            InfoItem(key=str(i.get("key", "")), value=str(i.get("value", "")))
            for i in doc.get("information", [])
        )
        return Intent(
            id=str(doc.get("id", "")),
            raw_text=str(doc.get("raw_text", "")),
            expectations=expectations,
            conditions=conditions,
            targets=targets,
            context=context,
            information=information,
        )
    except MalformedIntentDocument:
        raise
    except (TypeError, ValueError, AttributeError, KeyError) as exc:
        raise MalformedIntentDocument(f"not a valid intent document: {exc}") from exc


def _targets_from_dict(doc: Mapping[str, Any]) -> TargetSelector:
    kind = str(doc.get("kind", "")).lower()
    if kind == "static":
        ids = doc.get("engine_ids") or []
        return TargetSelector.static([int(i) for i in ids])
    if kind == "dynamic":
        flt_doc = doc.get("filter") or {"kind": "all"}
        flt_kind = str(flt_doc.get("kind", "all")).lower()
        if flt_kind == "all":
            return TargetSelector.all_engines()
        metric = canonicalize_metric(str(flt_doc.get("metric", "")))
        value = float(flt_doc.get("value"))
        if flt_kind == "metric_below":
            return TargetSelector.metric_below(metric, value)
        if flt_kind == "metric_at_least":
            return TargetSelector.metric_at_least(metric, value)
        raise MalformedIntentDocument(f"unknown target filter kind '{flt_kind}'")
    raise MalformedIntentDocument(f"unknown target selector kind '{kind}'")


def _opt_str(value: Any) -> str | None:
    if value is None or value == "":
        return None
    return canonicalize_metric(str(value))
