"""Greedy earliest-fit scheduling against per-role daily capacity.

A task books its labor hours against every assigned role on the chosen
day. Immediate tasks always land on day 0 even when that overruns
capacity (the overrun is flagged, not refused); windowed tasks take the
earliest day with room for every role, or fail as unschedulable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .policy import (
    ActionRecommendation,
    CostEstimate,
    Role,
    StaffRoster,
)


@dataclass(frozen=True)
class TaskDraft:
    engine_id: int
    rul: int
    recommendation: ActionRecommendation
    cost: CostEstimate
    staff: tuple[Role, ...]


@dataclass(frozen=True)
class MaintenanceTask:
    engine_id: int
    rul: int
    recommendation: ActionRecommendation
    cost: CostEstimate
    staff: tuple[Role, ...]
    scheduled_day: int
    over_capacity: bool = False

    def to_dict(self) -> dict[str, Any]:
        return {
            "engine_id": self.engine_id,
            "rul": self.rul,
            **self.recommendation.to_dict(),
            **self.cost.to_dict(),
            "staff": [r.value for r in self.staff],
            "scheduled_day": self.scheduled_day,
            "over_capacity": self.over_capacity,
        }


class WindowUnschedulable(ValueError):
    def __init__(self, engine_ids: list[int]):
        ids = ", ".join(str(e) for e in engine_ids)
        super().__init__(f"no day in the window has capacity for engine(s): {ids}")
        self.engine_ids = engine_ids


@dataclass
class Calendar:
    """Booked hours per (role, day); one calendar per planning run."""

    booked: dict[tuple[str, int], float] = field(default_factory=dict)

    def hours(self, role: Role, day: int) -> float:
        return self.booked.get((role.value, day), 0.0)

    def book(self, roles: tuple[Role, ...], day: int, hours: float) -> None:
        for role in roles:
            key = (role.value, day)
            self.booked[key] = self.booked.get(key, 0.0) + hours


def schedule_maintenance_task(
    draft: TaskDraft, calendar: Calendar, roster: StaffRoster
) -> MaintenanceTask:
    """Place a draft on the earliest day with capacity and book the hours."""
    window = draft.recommendation.window
    hours = draft.cost.labor_hours

    if window.is_immediate:
        over = any(
            calendar.hours(role, 0) + hours > roster.capacity(role) for role in draft.staff
        )
        calendar.book(draft.staff, 0, hours)
        return _scheduled(draft, day=0, over_capacity=over)

    for day in range(0, window.last_day + 1):
        if all(calendar.hours(role, day) + hours <= roster.capacity(role) for role in draft.staff):
            calendar.book(draft.staff, day, hours)
            return _scheduled(draft, day=day)
    raise WindowUnschedulable([draft.engine_id])


def _scheduled(draft: TaskDraft, day: int, over_capacity: bool = False) -> MaintenanceTask:
    return MaintenanceTask(
        engine_id=draft.engine_id,
        rul=draft.rul,
        recommendation=draft.recommendation,
        cost=draft.cost,
        staff=draft.staff,
        scheduled_day=day,
        over_capacity=over_capacity,
    )
