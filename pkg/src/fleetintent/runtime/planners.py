"""Planner backends: scripted replay, deterministic rules, chat-completion.

The rule planner is the offline embodiment of the delegation workflow:
maintenance intents flow data gathering -> plan consolidation -> critical
stops -> summary response; query intents stop after the data agent;
explicit stop intents call the critical tool directly.
"""

from __future__ import annotations

import json
from typing import Any, Iterable, Mapping

from ..chat import ChatCompletionClient, extract_json_document
from ..decompose.base import MalformedResponse
from ..intents import Intent, Objective
from .agents import CallTool, Delegate, Observation, PlannerContext, PlannerDecision, Respond
from .tools import ToolCall, ToolRegistry, tool_catalog

ROOT_AGENT = "root_agent"
DATA_AGENT = "data_agent"
MAINTENANCE_AGENT = "maintenance_agent"


class ScriptedPlanner:
    """Replays a fixed decision list; after that, responds by default."""

    def __init__(self, script: Iterable[PlannerDecision]):
        self._script = list(script)
        self._cursor = 0

    def decide(self, ctx: PlannerContext) -> PlannerDecision:
        if self._cursor >= len(self._script):
            return Respond(text="(no scripted decisions remain)")
        decision = self._script[self._cursor]
        self._cursor += 1
        return decision


class RulePlanner:
    """Deterministic intent-to-workflow mapping, no model in the loop."""

    def decide(self, ctx: PlannerContext) -> PlannerDecision:
        if ctx.agent.name == DATA_AGENT:
            return self._data_agent(ctx)
        if ctx.agent.name == MAINTENANCE_AGENT:
            return self._maintenance_agent(ctx)
        return self._root_agent(ctx)

    # -- root -----------------------------------------------------------------

    def _root_agent(self, ctx: PlannerContext) -> PlannerDecision:
        pending = _pending_confirmation(ctx.observations)
        if pending is not None:
            token, call = pending
            engine = call.arguments.get("engine_id")
            return Respond(
                text=(
                    f"Stopping engine {engine} is a critical action and needs operator "
                    f"confirmation (token {token})."
                ),
                payload={"pending_confirmation": token, "deferred_call": _call_doc(call)},
            )
        failure = _fatal_failure(ctx.observations)
        if failure is not None:
            return Respond(
                text=f"Could not complete the request: {failure.result.payload.get('detail', failure.result.error_kind)}",
                payload={"error": failure.result.error_kind},
            )

        if _is_stop_intent(ctx.intent):
            return self._root_stop_flow(ctx)
        if _is_query_intent(ctx.intent):
            return self._root_query_flow(ctx)
        if _is_maintenance_intent(ctx.intent):
            return self._root_maintenance_flow(ctx)
        return Respond(
            text="I could not map this intent to a fleet action.",
            payload={"unhandled_intent": ctx.intent.id},
        )

    def _root_stop_flow(self, ctx: PlannerContext) -> PlannerDecision:
        target_ids = _static_target_ids(ctx.intent)
        if target_ids is None:
            # Dynamic stop targets need the data agent to enumerate engines.
            snapshots = _delegated_snapshots(ctx.observations)
            if snapshots is None:
                return Delegate(
                    agent=DATA_AGENT,
                    task="list current snapshots for the stop targets",
                    payload=_data_scope(ctx.intent),
                )
            target_ids = [s["engine_id"] for s in snapshots]
        stopped = _stopped_engine_ids(ctx.observations)
        remaining = [eid for eid in target_ids if eid not in stopped]
        if remaining:
            return CallTool(ToolCall("stop_engine", {"engine_id": remaining[0]}))
        return Respond(
            text=f"Stopped engine(s): {', '.join(str(e) for e in target_ids)}.",
            payload={"stopped_engine_ids": list(target_ids)},
        )

    def _root_query_flow(self, ctx: PlannerContext) -> PlannerDecision:
        snapshots = _delegated_snapshots(ctx.observations)
        if snapshots is None:
            return Delegate(
                agent=DATA_AGENT,
                task="report current telemetry and remaining useful life",
                payload=_data_scope(ctx.intent),
            )
        lines = [
            f"engine {s['engine_id']}: rul {s['rul']} cycles, {s['status']}" for s in snapshots
        ]
        return Respond(
            text="Current fleet status:\n" + "\n".join(lines),
            payload={"snapshots": snapshots},
        )

    def _root_maintenance_flow(self, ctx: PlannerContext) -> PlannerDecision:
        snapshots = _delegated_snapshots(ctx.observations)
        if snapshots is None:
            return Delegate(
                agent=DATA_AGENT,
                task="gather snapshots and ground-truth RUL for the targets",
                payload=_data_scope(ctx.intent),
            )
        plan_doc, plan_table = _delegated_plan(ctx.observations)
        if plan_doc is None:
            return Delegate(
                agent=MAINTENANCE_AGENT,
                task="build the consolidated maintenance plan for these snapshots",
                payload={**_data_scope(ctx.intent), "snapshots": snapshots},
            )
        stop_ids = [t["engine_id"] for t in plan_doc.get("tasks", []) if t.get("action") == "stop"]
        already = _stopped_engine_ids(ctx.observations)
        remaining = [eid for eid in stop_ids if eid not in already]
        if remaining:
            return CallTool(ToolCall("stop_engine", {"engine_id": remaining[0]}))
        text = "Consolidated maintenance plan:\n" + (plan_table or json.dumps(plan_doc, indent=2))
        if stop_ids:
            text += "\nCritical stop(s) executed: " + ", ".join(str(e) for e in stop_ids)
        return Respond(text=text, payload={"plan": plan_doc, "stopped_engine_ids": stop_ids})

    # -- sub-agents -------------------------------------------------------------

    def _data_agent(self, ctx: PlannerContext) -> PlannerDecision:
        scope = _scope_arguments(ctx.task_payload)
        calls_made = [o for o in ctx.observations if o.kind == "tool"]
        if not calls_made:
            return CallTool(ToolCall("get_engine_data", scope))
        if len(calls_made) == 1:
            return CallTool(ToolCall("predict_engine_rul", scope))
        snapshots = calls_made[0].result.payload.get("snapshots", [])
        ruls = calls_made[1].result.payload.get("ruls", [])
        return Respond(
            text=f"{len(snapshots)} snapshot(s) with ground-truth RUL readings.",
            payload={"snapshots": snapshots, "ruls": ruls},
        )

    def _maintenance_agent(self, ctx: PlannerContext) -> PlannerDecision:
        scope = _scope_arguments(ctx.task_payload)
        calls_made = [o for o in ctx.observations if o.kind == "tool"]
        if not calls_made:
            return CallTool(ToolCall("suggest_maintenance_action", scope))
        if len(calls_made) == 1:
            return CallTool(ToolCall("schedule_maintenance_task", scope))
        schedule = calls_made[1].result.payload
        return Respond(
            text=schedule.get("table", "plan ready"),
            payload={"plan": schedule.get("plan"), "table": schedule.get("table")},
        )


class LlmPlanner:
    """Drives decisions through a chat-completion endpoint."""

    def __init__(self, client: ChatCompletionClient, registry: ToolRegistry):
        self.client = client
        self.registry = registry

    def decide(self, ctx: PlannerContext) -> PlannerDecision:
        catalog = tool_catalog(self.registry, ctx.agent.tool_names)
        system = (
            f"You are agent '{ctx.agent.name}'. {ctx.agent.role_instructions}\n"
            f"Available tools:\n{json.dumps(catalog, indent=2)}\n"
            f"Sub-agents you may delegate to: {', '.join(ctx.agent.sub_agent_names) or 'none'}.\n"
            "Reply with exactly one JSON object, one of:\n"
            '{"decision": "call_tool", "tool": str, "arguments": object}\n'
            '{"decision": "delegate", "agent": str, "task": str}\n'
            '{"decision": "respond", "text": str}'
        )
        observations = [
            {"kind": o.kind, "name": o.name, "result": o.result.to_dict()}
            for o in ctx.observations
        ]
        user = json.dumps(
            {"task": ctx.task, "task_payload": dict(ctx.task_payload), "observations": observations}
        )
        reply = self.client.complete(
            [{"role": "system", "content": system}, {"role": "user", "content": user}]
        )
        doc = extract_json_document(reply)
        return _decision_from_doc(doc)


def _decision_from_doc(doc: Mapping[str, Any]) -> PlannerDecision:
    kind = doc.get("decision")
    if kind == "call_tool":
        return CallTool(ToolCall(str(doc.get("tool", "")), dict(doc.get("arguments") or {})))
    if kind == "delegate":
        return Delegate(
            agent=str(doc.get("agent", "")),
            task=str(doc.get("task", "")),
            payload=dict(doc.get("payload") or {}),
        )
    if kind == "respond":
        return Respond(text=str(doc.get("text", "")), payload=dict(doc.get("payload") or {}))
    raise MalformedResponse(f"unknown planner decision kind: {kind!r}")


# -- intent classification and observation helpers ------------------------------


def _is_stop_intent(intent: Intent) -> bool:
    return any(
        e.objective is Objective.ACHIEVE and "stop" in e.description.lower()
        for e in intent.expectations
    )


def _is_query_intent(intent: Intent) -> bool:
    return any(i.key == "query" for i in intent.information) and not _is_maintenance_intent(intent)


def _is_maintenance_intent(intent: Intent) -> bool:
    return any(
        e.objective in (Objective.MAINTAIN, Objective.AVOID) for e in intent.expectations
    )


def _static_target_ids(intent: Intent) -> list[int] | None:
    if intent.targets.kind == "static":
        return list(intent.targets.engine_ids or ())
    return None


def _data_scope(intent: Intent) -> dict[str, Any]:
    ids = _static_target_ids(intent)
    return {"engine_ids": ids} if ids else {"all": True}


def _scope_arguments(task_payload: Mapping[str, Any]) -> dict[str, Any]:
    ids = task_payload.get("engine_ids")
    if ids:
        return {"engine_ids": ",".join(str(i) for i in ids)}
    return {}


def _pending_confirmation(observations: list[Observation]) -> tuple[str, ToolCall] | None:
    for obs in observations:
        if obs.kind == "tool" and obs.result.error_kind == "confirmation_required":
            token = obs.result.payload.get("token", "")
            return token, obs.call or ToolCall(obs.name, {})
    return None


def _fatal_failure(observations: list[Observation]) -> Observation | None:
    for obs in observations:
        if not obs.result.ok and obs.result.error_kind != "confirmation_required":
            return obs
    return None


def _delegated_snapshots(observations: list[Observation]) -> list[dict[str, Any]] | None:
    for obs in observations:
        if obs.kind == "delegation" and obs.name == DATA_AGENT and obs.result.ok:
            return obs.result.payload.get("payload", {}).get("snapshots", [])
    return None


def _delegated_plan(observations: list[Observation]):
    for obs in observations:
        if obs.kind == "delegation" and obs.name == MAINTENANCE_AGENT and obs.result.ok:
            payload = obs.result.payload.get("payload", {})
            return payload.get("plan"), payload.get("table")
    return None, None


def _stopped_engine_ids(observations: list[Observation]) -> set[int]:
    stopped: set[int] = set()
    for obs in observations:
        if obs.kind == "tool" and obs.name == "stop_engine" and obs.result.ok:
            eid = obs.result.payload.get("engine_id")
            if eid is not None:
                stopped.add(int(eid))
    return stopped


def _call_doc(call: ToolCall) -> dict[str, Any]:
    return {"tool": call.tool, "arguments": dict(call.arguments)}
