"""Fleet-wide plan consolidation and the engine stop action.

For every running engine: suggest an action from its RUL band, price it,
crew it, and place it on the calendar. Tasks then aggregate into groups
keyed by (action, priority, window) for the consolidated summary table.
Stopped engines are excluded from planning and reported separately.

Planning is pure: it reads snapshots and books a private calendar, so
concurrent plans never interfere. Identical inputs produce identical
plan documents.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Any, Sequence

from ..fleet.store import EngineSnapshot, EngineStatus, FleetStore, set_engine_status
from ..fleet.store import get_engine_data
from .policy import (
    ActionRecommendation,
    CostModel,
    MaintenanceAction,
    PolicyBands,
    Role,
    ScheduleWindow,
    StaffRoster,
    TaskPriority,
    assign_maintenance_staff,
    estimate_maintenance_cost,
    suggest_maintenance_action,
)
from .scheduling import Calendar, MaintenanceTask, TaskDraft, WindowUnschedulable, schedule_maintenance_task

PLAN_COLUMNS = (
    "# Engines",
    "RUL Range",
    "Recommended Action",
    "Priority",
    "Cost (USD)",
    "Labor Hours",
    "Assigned Staff",
    "Scheduled Time",
)


@dataclass(frozen=True)
class PlanGroup:
    action: MaintenanceAction
    priority: TaskPriority
    window_label: str
    engine_ids: tuple[int, ...]
    ruls: tuple[int, ...]  # distinct values, ascending
    cost_usd: float
    labor_hours: float
    staff: tuple[Role, ...]

    @property
    def engine_count(self) -> int:
        return len(self.engine_ids)

    @property
    def rul_min(self) -> int:
        return self.ruls[0]

    @property
    def rul_max(self) -> int:
        return self.ruls[-1]

    @property
    def rul_range(self) -> str:
        if len(self.ruls) == 1:
            return str(self.ruls[0])
        if len(self.ruls) == 2:
            return f"{self.ruls[0]}, {self.ruls[1]}"
        return f"{self.rul_min}-{self.rul_max}"

    def to_dict(self) -> dict[str, Any]:
        return {
            "engine_count": self.engine_count,
            "engine_ids": list(self.engine_ids),
            "rul_min": self.rul_min,
            "rul_max": self.rul_max,
            "rul_range": self.rul_range,
            "action": self.action.value,
            "priority": self.priority.value,
            "cost_usd": self.cost_usd,
            "labor_hours": self.labor_hours,
            "staff": [r.value for r in self.staff],
            "scheduled_time": self.window_label,
        }


@dataclass(frozen=True)
class PlanTotals:
    cost_usd: float
    labor_hours: float

    def to_dict(self) -> dict[str, float]:
        return {"cost_usd": self.cost_usd, "labor_hours": self.labor_hours}


@dataclass(frozen=True)
class MaintenancePlan:
    tasks: tuple[MaintenanceTask, ...]
    groups: tuple[PlanGroup, ...]
    totals: PlanTotals
    stopped_engine_ids: tuple[int, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        return {
            "tasks": [t.to_dict() for t in self.tasks],
            "groups": [g.to_dict() for g in self.groups],
            "totals": self.totals.to_dict(),
            "stopped_engine_ids": list(self.stopped_engine_ids),
        }


def consolidate_plan(
    snapshots: Sequence[EngineSnapshot],
    bands: PolicyBands = PolicyBands(),
    roster: StaffRoster = StaffRoster(),
    cost_model: CostModel = CostModel(),
) -> MaintenancePlan:
    """Build the consolidated plan for a fleet of snapshots.

    Scheduling is earliest-fit in urgency order (ascending RUL, engine id
    as tie-break) on a fresh calendar. Raises WindowUnschedulable listing
    every engine that cannot fit its window.
    """
    if not snapshots:
        raise ValueError("cannot plan over an empty snapshot list")

    running = [s for s in snapshots if s.status is EngineStatus.RUNNING]
    stopped_ids = tuple(s.engine_id for s in snapshots if s.status is EngineStatus.STOPPED)

    calendar = Calendar()
    tasks: list[MaintenanceTask] = []
    unschedulable: list[int] = []
    for snap in sorted(running, key=lambda s: (s.rul, s.engine_id)):
        draft = _draft_for(snap, bands, roster, cost_model)
        try:
            tasks.append(schedule_maintenance_task(draft, calendar, roster))
        except WindowUnschedulable:
            unschedulable.append(snap.engine_id)
    if unschedulable:
        raise WindowUnschedulable(sorted(unschedulable))

    tasks.sort(key=lambda t: t.engine_id)
    groups = _group_tasks(tasks)
    totals = PlanTotals(
        cost_usd=sum(t.cost.cost_usd for t in tasks),
        labor_hours=sum(t.cost.labor_hours for t in tasks),
    )
    return MaintenancePlan(
        tasks=tuple(tasks),
        groups=tuple(groups),
        totals=totals,
        stopped_engine_ids=stopped_ids,
    )


def _draft_for(
    snap: EngineSnapshot, bands: PolicyBands, roster: StaffRoster, cost_model: CostModel
) -> TaskDraft:
    recommendation = suggest_maintenance_action(snap.rul, bands)
    cost = estimate_maintenance_cost(recommendation.action, cost_model)
    staff = assign_maintenance_staff(recommendation.action, roster)
    return TaskDraft(
        engine_id=snap.engine_id,
        rul=snap.rul,
        recommendation=recommendation,
        cost=cost,
        staff=staff,
    )


def _group_tasks(tasks: Sequence[MaintenanceTask]) -> list[PlanGroup]:
    buckets: dict[tuple[str, str, str], list[MaintenanceTask]] = {}
    for task in tasks:
        rec = task.recommendation
        key = (rec.action.value, rec.priority.value, rec.window.label)
        buckets.setdefault(key, []).append(task)

    groups = []
    for (action, priority, window_label), members in buckets.items():
        members.sort(key=lambda t: t.engine_id)
        groups.append(
            PlanGroup(
                action=MaintenanceAction(action),
                priority=TaskPriority(priority),
                window_label=window_label,
                engine_ids=tuple(m.engine_id for m in members),
                ruls=tuple(sorted({m.rul for m in members})),
                cost_usd=members[0].cost.cost_usd,
                labor_hours=members[0].cost.labor_hours,
                staff=members[0].staff,
            )
        )
    groups.sort(key=lambda g: (g.rul_min, g.action.severity))
    return groups


class ConfirmationRequired(PermissionError):
    """A critical action was attempted without an explicit confirmation."""


def stop_engine(
    store: FleetStore,
    engine_id: int,
    confirmed: bool,
    bands: PolicyBands = PolicyBands(),
    roster: StaffRoster = StaffRoster(),
    cost_model: CostModel = CostModel(),
) -> tuple[MaintenanceTask, bool]:
    """Stop an engine and emit its critical task.

    Returns (task, already_stopped). Idempotent: re-stopping a stopped
    engine succeeds without changing anything. Raises UnknownEngine for
    absent ids and ConfirmationRequired when the caller has no clearance.
    """
    if not confirmed:
        raise ConfirmationRequired(f"stopping engine {engine_id} requires confirmation")
    snap = get_engine_data(store, engine_id)
    already_stopped = snap.status is EngineStatus.STOPPED
    if not already_stopped:
        set_engine_status(store, engine_id, EngineStatus.STOPPED)
    recommendation = ActionRecommendation(
        MaintenanceAction.STOP, TaskPriority.CRITICAL, ScheduleWindow.immediate()
    )
    cost = estimate_maintenance_cost(MaintenanceAction.STOP, cost_model)
    staff = assign_maintenance_staff(MaintenanceAction.STOP, roster)
    task = MaintenanceTask(
        engine_id=engine_id,
        rul=snap.rul,
        recommendation=recommendation,
        cost=cost,
        staff=staff,
        scheduled_day=0,
    )
    return task, already_stopped


# --- Rendering ---------------------------------------------------------------


def render_plan_table(plan: MaintenancePlan) -> str:
    """Fixed-column plain-text summary table plus a totals line."""
    rows = [PLAN_COLUMNS] + [_group_row(g) for g in plan.groups]
    widths = [max(len(row[i]) for row in rows) for i in range(len(PLAN_COLUMNS))]
    lines = []
    for idx, row in enumerate(rows):
        lines.append(" | ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
        if idx == 0:
            lines.append("-+-".join("-" * w for w in widths))
    lines.append("")
    lines.append(
        f"Totals: {_money(plan.totals.cost_usd)} USD, {_hours(plan.totals.labor_hours)} labor hours"
    )
    if plan.stopped_engine_ids:
        ids = ", ".join(str(i) for i in plan.stopped_engine_ids)
        lines.append(f"Already stopped (excluded from plan): engines {ids}")
    return "\n".join(lines) + "\n"


def render_plan_csv(plan: MaintenancePlan) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(PLAN_COLUMNS)
    for group in plan.groups:
        writer.writerow(_group_row(group))
    return buf.getvalue()


def _group_row(group: PlanGroup) -> tuple[str, ...]:
    return (
        str(group.engine_count),
        group.rul_range,
        group.action.value.upper(),
        group.priority.value,
        _money(group.cost_usd),
        _hours(group.labor_hours),
        "[" + ", ".join(r.value for r in group.staff) + "]",
        group.window_label,
    )


def _money(value: float) -> str:
    return str(int(value)) if value == int(value) else f"{value:.2f}"


def _hours(value: float) -> str:
    return str(int(value)) if value == int(value) else f"{value:g}"
