"""RUL-band maintenance policy: action, cost, and staffing models.

The band thresholds, flat per-action costs, and per-action crews are all
configuration; the defaults reproduce the reference fleet plan. Cost and
staff are constant functions of the action class on purpose, anything
richer belongs to a different policy engine.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Mapping


class MaintenanceAction(str, Enum):
    MONITOR = "monitor"
    REPAIR = "repair"
    STOP = "stop"

    @property
    def severity(self) -> int:
        return {"monitor": 0, "repair": 1, "stop": 2}[self.value]


class TaskPriority(str, Enum):
    LOW = "low"
    HIGH = "high"
    CRITICAL = "critical"


class Role(str, Enum):
    JR_MECHANIC = "jr_mechanic"
    MECHANIC = "mechanic"
    SR_MECHANIC = "sr_mechanic"
    TECH_LEAD = "tech_lead"


@dataclass(frozen=True)
class ScheduleWindow:
    """When a task must land: day 0 (immediate) or within `days` days."""

    days: int | None = None  # None = immediate

    @classmethod
    def immediate(cls) -> "ScheduleWindow":
        return cls(days=None)

    @classmethod
    def within_days(cls, days: int) -> "ScheduleWindow":
        if days <= 0:
            raise ValueError("window days must be positive")
        return cls(days=days)

    @property
    def is_immediate(self) -> bool:
        return self.days is None

    @property
    def last_day(self) -> int:
        return 0 if self.days is None else self.days

    @property
    def label(self) -> str:
        return "IMMEDIATE" if self.days is None else f"Within {self.days} days"


@dataclass(frozen=True)
class PolicyBands:
    """RUL thresholds separating stop, repair, and the two monitor windows."""

    stop_below: int = 25
    repair_below: int = 60
    monitor_soon_below: int = 80

    def __post_init__(self):
        if not (0 < self.stop_below < self.repair_below < self.monitor_soon_below):
            raise ValueError(
                "bands must satisfy 0 < stop_below < repair_below < monitor_soon_below, "
                f"got {self.stop_below}/{self.repair_below}/{self.monitor_soon_below}"
            )


@dataclass(frozen=True)
class ActionRecommendation:
    action: MaintenanceAction
    priority: TaskPriority
    window: ScheduleWindow

    def to_dict(self) -> dict[str, Any]:
        return {
            "action": self.action.value,
            "priority": self.priority.value,
            "window": self.window.label,
        }


@dataclass(frozen=True)
class CostEstimate:
    cost_usd: float
    labor_hours: float

    def to_dict(self) -> dict[str, float]:
        return {"cost_usd": self.cost_usd, "labor_hours": self.labor_hours}


@dataclass(frozen=True)
class CostModel:
    per_action: Mapping[str, CostEstimate] = field(
        default_factory=lambda: {
            MaintenanceAction.MONITOR.value: CostEstimate(0.0, 0.0),
            MaintenanceAction.REPAIR.value: CostEstimate(6000.0, 4.0),
            MaintenanceAction.STOP.value: CostEstimate(15000.0, 8.0),
        }
    )


@dataclass(frozen=True)
class StaffRoster:
    """Available headcount per role and the shared daily capacity hours."""

    headcount: Mapping[str, int] = field(
        default_factory=lambda: {
            Role.JR_MECHANIC.value: 2,
            Role.MECHANIC.value: 2,
            Role.SR_MECHANIC.value: 1,
            Role.TECH_LEAD.value: 1,
        }
    )
    daily_capacity_hours: float = 8.0

    def capacity(self, role: Role) -> float:
        return self.headcount.get(role.value, 0) * self.daily_capacity_hours


STAFF_BY_ACTION: dict[MaintenanceAction, tuple[Role, ...]] = {
    MaintenanceAction.MONITOR: (Role.JR_MECHANIC,),
    MaintenanceAction.REPAIR: (Role.MECHANIC, Role.JR_MECHANIC),
    MaintenanceAction.STOP: (Role.TECH_LEAD, Role.SR_MECHANIC),
}


class RoleUnavailable(ValueError):
    def __init__(self, role: Role):
        super().__init__(f"roster has no staff for role '{role.value}'")
        self.role = role


def suggest_maintenance_action(rul: int, bands: PolicyBands = PolicyBands()) -> ActionRecommendation:
    """Map a remaining-useful-life reading to an action, priority, and window."""
    if rul < 0:
        raise ValueError(f"rul must be non-negative, got {rul}")
    if rul < bands.stop_below:
        return ActionRecommendation(
            MaintenanceAction.STOP, TaskPriority.CRITICAL, ScheduleWindow.immediate()
        )
    if rul < bands.repair_below:
        return ActionRecommendation(
            MaintenanceAction.REPAIR, TaskPriority.HIGH, ScheduleWindow.within_days(3)
        )
    if rul < bands.monitor_soon_below:
        return ActionRecommendation(
            MaintenanceAction.MONITOR, TaskPriority.LOW, ScheduleWindow.within_days(3)
        )
    return ActionRecommendation(
        MaintenanceAction.MONITOR, TaskPriority.LOW, ScheduleWindow.within_days(7)
    )


def estimate_maintenance_cost(
    action: MaintenanceAction, model: CostModel = CostModel()
) -> CostEstimate:
    return model.per_action[action.value]


def assign_maintenance_staff(
    action: MaintenanceAction, roster: StaffRoster = StaffRoster()
) -> tuple[Role, ...]:
    """Crew for an action class; every required role must exist in the roster."""
    crew = STAFF_BY_ACTION[action]
    for role in crew:
        if roster.headcount.get(role.value, 0) <= 0:
            raise RoleUnavailable(role)
    return crew
