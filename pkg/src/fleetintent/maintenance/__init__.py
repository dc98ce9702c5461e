from .plan import (
    ConfirmationRequired,
    MaintenancePlan,
    PLAN_COLUMNS,
    PlanGroup,
    PlanTotals,
    consolidate_plan,
    render_plan_csv,
    render_plan_table,
    stop_engine,
)
from .policy import (
    ActionRecommendation,
    CostEstimate,
    CostModel,
    MaintenanceAction,
    PolicyBands,
    Role,
    RoleUnavailable,
    ScheduleWindow,
    StaffRoster,
    TaskPriority,
    assign_maintenance_staff,
    estimate_maintenance_cost,
    suggest_maintenance_action,
)
from .scheduling import (
    Calendar,
    MaintenanceTask,
    TaskDraft,
    WindowUnschedulable,
    schedule_maintenance_task,
)

__all__ = [
    "ActionRecommendation",
    "Calendar",
    "ConfirmationRequired",
    "CostEstimate",
    "CostModel",
    "MaintenanceAction",
    "MaintenancePlan",
    "MaintenanceTask",
    "PLAN_COLUMNS",
    "PlanGroup",
    "PlanTotals",
    "PolicyBands",
    "Role",
    "RoleUnavailable",
    "ScheduleWindow",
    "StaffRoster",
    "TaskDraft",
    "TaskPriority",
    "WindowUnschedulable",
    "assign_maintenance_staff",
    "consolidate_plan",
    "estimate_maintenance_cost",
    "render_plan_csv",
    "render_plan_table",
    "schedule_maintenance_task",
    "stop_engine",
    "suggest_maintenance_action",
]
