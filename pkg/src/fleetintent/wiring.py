"""Assembly: fleet store, the seven agent tools, and the agent hierarchy.

Tool handlers close over the shared fleet store and the maintenance
policy configuration. The data tools accept an optional engine scope and
return the whole fleet when unscoped, so a sub-agent covers twenty
engines in one call instead of looping per engine.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Any, Mapping

from .chat import ChatCompletionClient
from .config import ServiceConfig
from .decompose import FleetSummary, LlmBackend, RuleBackend
from .fleet import (
    EngineStatus,
    Fixture,
    FleetStore,
    UnknownEngine,
    fleet_snapshots,
    get_engine_data,
    load_fleet,
    parse_cmapss,
    predict_engine_rul,
)
from .maintenance import (
    MaintenanceAction,
    MaintenancePlan,
    WindowUnschedulable,
    assign_maintenance_staff,
    consolidate_plan,
    estimate_maintenance_cost,
    render_plan_table,
    stop_engine,
    suggest_maintenance_action,
)
from .runtime import (
    AgentSpec,
    DATA_AGENT,
    MAINTENANCE_AGENT,
    ParamSpec,
    ROOT_AGENT,
    ReturnSpec,
    RulePlanner,
    ToolRegistry,
    ToolResult,
    ToolSpec,
    ToolEffect,
    LlmPlanner,
    validate_agent_graph,
)

_SCOPE_PARAMS = (
    ParamSpec("engine_id", "int", required=False),
    ParamSpec("engine_ids", "string", required=False),
)

_ACTION_PARAM = ParamSpec(
    "action", "enum", required=True, enum_values=tuple(a.value for a in MaintenanceAction)
)


@dataclass
class Orchestrator:
    """Everything a session needs, wired to one fleet store."""

    config: ServiceConfig
    store: FleetStore
    registry: ToolRegistry
    agents: dict[str, AgentSpec]
    decomposer: Any
    latest_plan: MaintenancePlan | None = None
    _plan_lock: threading.Lock = field(default_factory=threading.Lock)
    _llm_client: ChatCompletionClient | None = None

    @property
    def root_agent(self) -> AgentSpec:
        return self.agents[ROOT_AGENT]

    def fleet_summary(self) -> FleetSummary:
        return FleetSummary(
            engine_count=len(self.store), engine_ids=tuple(self.store.engine_ids)
        )

    def make_planner(self):
        if self.config.backend == "llm":
            assert self._llm_client is not None
            return LlmPlanner(self._llm_client, self.registry)
        return RulePlanner()

    def record_plan(self, plan: MaintenancePlan) -> None:
        with self._plan_lock:
            self.latest_plan = plan


def build_orchestrator(config: ServiceConfig) -> Orchestrator:
    store = _build_store(config)
    orchestrator = Orchestrator(
        config=config,
        store=store,
        registry=ToolRegistry(),
        agents=_build_agents(),
        decomposer=None,
    )
    _register_tools(orchestrator)
    validate_agent_graph(orchestrator.agents)

    if config.backend == "llm":
        assert config.llm is not None
        client = ChatCompletionClient(config.llm)
        orchestrator._llm_client = client
        orchestrator.decomposer = LlmBackend(
            client, critical_rul_threshold=float(config.bands.stop_below)
        )
    else:
        orchestrator.decomposer = RuleBackend(
            critical_rul_threshold=float(config.bands.stop_below)
        )
    return orchestrator


def _build_store(config: ServiceConfig) -> FleetStore:
    records = parse_cmapss(config.data_path)
    if config.fixture_path is not None:
        observation = Fixture.from_file(config.fixture_path)
    else:
        from .fleet import Latest

        observation = Latest()
    return load_fleet(records, engine_limit=config.engine_limit, observation=observation)


def _build_agents() -> dict[str, AgentSpec]:
    return {
        ROOT_AGENT: AgentSpec(
            name=ROOT_AGENT,
            role_instructions=(
                "Own the operator's intent end to end: gather fleet data through the "
                "data agent, obtain a consolidated plan from the maintenance agent, "
                "stop critical engines yourself, and answer with a structured summary."
            ),
            tool_names=("stop_engine",),
            sub_agent_names=(DATA_AGENT, MAINTENANCE_AGENT),
            max_steps=12,
        ),
        DATA_AGENT: AgentSpec(
            name=DATA_AGENT,
            role_instructions=(
                "Retrieve engine telemetry snapshots and ground-truth remaining useful "
                "life for the requested engines."
            ),
            tool_names=("get_engine_data", "predict_engine_rul"),
            max_steps=8,
        ),
        MAINTENANCE_AGENT: AgentSpec(
            name=MAINTENANCE_AGENT,
            role_instructions=(
                "Recommend maintenance actions from remaining useful life, price and "
                "staff them, and schedule everything into a consolidated plan."
            ),
            tool_names=(
                "suggest_maintenance_action",
                "estimate_maintenance_cost",
                "assign_maintenance_staff",
                "schedule_maintenance_task",
            ),
            max_steps=8,
        ),
    }


def _register_tools(orch: Orchestrator) -> None:
    config, store, registry = orch.config, orch.store, orch.registry

    def scoped_ids(arguments: Mapping[str, Any]) -> list[int]:
        if "engine_id" in arguments:
            return [int(arguments["engine_id"])]
        raw = arguments.get("engine_ids")
        if raw:
            return [int(tok) for tok in str(raw).replace(" ", "").split(",") if tok]
        return store.engine_ids

    def handle_get_engine_data(arguments: Mapping[str, Any]) -> ToolResult:
        try:
            snapshots = [get_engine_data(store, eid).to_dict() for eid in scoped_ids(arguments)]
        except UnknownEngine as exc:
            return ToolResult.error("unknown_engine", str(exc))
        payload: dict[str, Any] = {"snapshots": snapshots}
        if len(snapshots) == 1:
            payload["snapshot"] = snapshots[0]
        return ToolResult.success(payload)

    def handle_predict_rul(arguments: Mapping[str, Any]) -> ToolResult:
        try:
            readings = [predict_engine_rul(store, eid).to_dict() for eid in scoped_ids(arguments)]
        except UnknownEngine as exc:
            return ToolResult.error("unknown_engine", str(exc))
        payload: dict[str, Any] = {"ruls": readings, "method": "ground_truth"}
        if len(readings) == 1:
            payload["rul"] = readings[0]["rul"]
            payload["engine_id"] = readings[0]["engine_id"]
        return ToolResult.success(payload)

    def running_snapshots(arguments: Mapping[str, Any]):
        snaps = fleet_snapshots(store, scoped_ids(arguments))
        explicit = "engine_id" in arguments or arguments.get("engine_ids")
        if explicit:
            return snaps
        return [s for s in snaps if s.status is EngineStatus.RUNNING]

    def handle_suggest(arguments: Mapping[str, Any]) -> ToolResult:
        if "rul" in arguments:
            rec = suggest_maintenance_action(int(arguments["rul"]), config.bands)
            return ToolResult.success({"recommendation": rec.to_dict()})
        try:
            snaps = running_snapshots(arguments)
        except UnknownEngine as exc:
            return ToolResult.error("unknown_engine", str(exc))
        recommendations = [
            {"engine_id": s.engine_id, "rul": s.rul,
             **suggest_maintenance_action(s.rul, config.bands).to_dict()}
            for s in snaps
        ]
        return ToolResult.success({"recommendations": recommendations})

    def handle_estimate(arguments: Mapping[str, Any]) -> ToolResult:
        action = MaintenanceAction(arguments["action"])
        estimate = estimate_maintenance_cost(action, config.cost_model)
        return ToolResult.success({"action": action.value, **estimate.to_dict()})

    def handle_assign(arguments: Mapping[str, Any]) -> ToolResult:
        action = MaintenanceAction(arguments["action"])
        crew = assign_maintenance_staff(action, config.roster)
        return ToolResult.success({"action": action.value, "staff": [r.value for r in crew]})

    def handle_schedule(arguments: Mapping[str, Any]) -> ToolResult:
        try:
            snaps = fleet_snapshots(store, scoped_ids(arguments))
        except UnknownEngine as exc:
            return ToolResult.error("unknown_engine", str(exc))
        try:
            plan = consolidate_plan(snaps, config.bands, config.roster, config.cost_model)
        except WindowUnschedulable as exc:
            return ToolResult.error(
                "window_unschedulable", str(exc), engine_ids=list(exc.engine_ids)
            )
        orch.record_plan(plan)
        return ToolResult.success({"plan": plan.to_dict(), "table": render_plan_table(plan)})

    def handle_stop(arguments: Mapping[str, Any]) -> ToolResult:
        # The confirmation gate already cleared this call; the policy latch
        # below it is set accordingly.
        try:
            task, already_stopped = stop_engine(
                store,
                int(arguments["engine_id"]),
                confirmed=True,
                bands=config.bands,
                roster=config.roster,
                cost_model=config.cost_model,
            )
        except UnknownEngine as exc:
            return ToolResult.error("unknown_engine", str(exc))
        return ToolResult.success(
            {
                "engine_id": task.engine_id,
                "status": "stopped",
                "already_stopped": already_stopped,
                "task": task.to_dict(),
            }
        )

    registry.register(
        ToolSpec(
            name="get_engine_data",
            description=(
                "Current telemetry snapshot (settings, sensors, cycle, status, rul) for "
                "one engine, a comma-separated list, or the whole fleet when unscoped."
            ),
            params=_SCOPE_PARAMS,
            returns=ReturnSpec("object", "snapshots keyed by engine"),
            effect=ToolEffect.READ_ONLY,
        ),
        handle_get_engine_data,
    )
    registry.register(
        ToolSpec(
            name="predict_engine_rul",
            description=(
                "Remaining useful life in cycles for the scoped engines; values are "
                "ground truth from the dataset, tagged method=ground_truth."
            ),
            params=_SCOPE_PARAMS,
            returns=ReturnSpec("object", "rul readings with method tag"),
            effect=ToolEffect.READ_ONLY,
        ),
        handle_predict_rul,
    )
    registry.register(
        ToolSpec(
            name="suggest_maintenance_action",
            description=(
                "Map remaining useful life to a maintenance action, priority, and "
                "scheduling window; pass rul directly or scope by engines."
            ),
            params=_SCOPE_PARAMS + (ParamSpec("rul", "int", required=False),),
            returns=ReturnSpec("object", "action recommendations"),
            effect=ToolEffect.READ_ONLY,
        ),
        handle_suggest,
    )
    registry.register(
        ToolSpec(
            name="estimate_maintenance_cost",
            description="Flat cost and labor hours for a maintenance action class.",
            params=(_ACTION_PARAM,),
            returns=ReturnSpec("object", "cost_usd and labor_hours"),
            effect=ToolEffect.READ_ONLY,
        ),
        handle_estimate,
    )
    registry.register(
        ToolSpec(
            name="assign_maintenance_staff",
            description="Crew roles required for a maintenance action class.",
            params=(_ACTION_PARAM,),
            returns=ReturnSpec("object", "list of roles"),
            effect=ToolEffect.READ_ONLY,
        ),
        handle_assign,
    )
    registry.register(
        ToolSpec(
            name="schedule_maintenance_task",
            description=(
                "Build the consolidated maintenance plan for the scoped engines "
                "(running engines only): recommend, price, staff, and place each task "
                "on the earliest day with crew capacity."
            ),
            params=_SCOPE_PARAMS,
            returns=ReturnSpec("object", "consolidated plan document and summary table"),
            effect=ToolEffect.READ_ONLY,
        ),
        handle_schedule,
    )
    registry.register(
        ToolSpec(
            name="stop_engine",
            description=(
                "Immediately stop an engine and emit its critical task. Irreversible "
                "within a session; requires operator confirmation unless auto-confirm "
                "is enabled."
            ),
            params=(ParamSpec("engine_id", "int", required=True),),
            returns=ReturnSpec("object", "stop outcome and critical task"),
            effect=ToolEffect.CRITICAL,
        ),
        handle_stop,
    )
