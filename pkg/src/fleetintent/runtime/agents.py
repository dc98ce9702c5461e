"""Hierarchical plan-act-observe execution engine.

A planner drives the acting agent one decision at a time: call a tool,
delegate to a sub-agent, or respond. Tool results (including refusals)
feed back as observations rather than aborting the turn; delegation runs
the sub-agent's own loop to completion and returns its response to the
parent as a single observation. Per-agent step budgets and a delegation
depth limit bound every turn.
"""

from __future__ import annotations

import uuid
from dataclasses import dataclass, field
from typing import Any, Mapping, Protocol, Union

from ..intents import Intent, intent_to_dict
from .tools import ConfirmationGate, ToolCall, ToolRegistry, ToolResult, invoke_tool
from .trace import EventKind, Trace


@dataclass(frozen=True)
class AgentSpec:
    name: str
    role_instructions: str
    tool_names: tuple[str, ...] = ()
    sub_agent_names: tuple[str, ...] = ()
    max_steps: int = 8


class InvalidAgentGraph(ValueError):
    pass


def validate_agent_graph(agents: Mapping[str, AgentSpec]) -> None:
    """Reject self-delegation and cycles; the sub-agent graph must be a DAG."""
    for name, spec in agents.items():
        if name in spec.sub_agent_names:
            raise InvalidAgentGraph(f"agent '{name}' lists itself as a sub-agent")

    visiting: set[str] = set()
    done: set[str] = set()

    def visit(name: str, path: tuple[str, ...]) -> None:
        if name in done:
            return
        if name in visiting:
            cycle = " -> ".join(path + (name,))
            raise InvalidAgentGraph(f"delegation cycle: {cycle}")
        visiting.add(name)
        for child in agents.get(name, AgentSpec(name, "")).sub_agent_names:
            visit(child, path + (name,))
        visiting.discard(name)
        done.add(name)

    for name in agents:
        visit(name, ())


@dataclass(frozen=True)
class CallTool:
    call: ToolCall


@dataclass(frozen=True)
class Delegate:
    agent: str
    task: str
    payload: Mapping[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class Respond:
    text: str
    payload: Mapping[str, Any] = field(default_factory=dict)


PlannerDecision = Union[CallTool, Delegate, Respond]


@dataclass(frozen=True)
class Observation:
    """What the acting agent saw after one decision."""

    kind: str  # "tool" | "delegation"
    name: str
    result: ToolResult
    call: ToolCall | None = None  # set for tool observations


@dataclass
class PlannerContext:
    agent: AgentSpec
    intent: Intent
    task: str
    task_payload: Mapping[str, Any]
    observations: list[Observation]
    step: int


class PlannerBackend(Protocol):
    def decide(self, ctx: PlannerContext) -> PlannerDecision: ...


@dataclass(frozen=True)
class PendingConfirmation:
    token: str
    call: ToolCall
    user_turn_event_id: int


@dataclass
class Session:
    session_id: str
    trace: Trace = field(default_factory=Trace)
    history: list[dict[str, str]] = field(default_factory=list)
    steps_consumed: int = 0
    pending_confirmation: PendingConfirmation | None = None

    @classmethod
    def new(cls) -> "Session":
        return cls(session_id=f"session-{uuid.uuid4().hex[:12]}")


@dataclass(frozen=True)
class AgentReply:
    text: str
    payload: Mapping[str, Any] = field(default_factory=dict)
    budget_exceeded: bool = False


@dataclass(frozen=True)
class TurnResult:
    text: str
    payload: Mapping[str, Any]
    pending_confirmation: str | None = None
    budget_exceeded: bool = False
    steps_by_agent: Mapping[str, int] = field(default_factory=dict)


@dataclass
class _TurnState:
    session: Session
    intent: Intent
    planner: PlannerBackend
    registry: ToolRegistry
    agents: Mapping[str, AgentSpec]
    gate: ConfirmationGate
    depth_limit: int
    user_event_id: int
    steps: dict[str, int] = field(default_factory=dict)
    pending_token: str | None = None


def run_turn(
    session: Session,
    intent: Intent,
    root: AgentSpec,
    planner: PlannerBackend,
    registry: ToolRegistry,
    agents: Mapping[str, AgentSpec],
    gate: ConfirmationGate,
    depth_limit: int = 3,
) -> TurnResult:
    """Execute one operator turn under the root agent."""
    session.history.append({"role": "operator", "text": intent.raw_text})
    user_event = session.trace.append(
        EventKind.USER_TURN,
        agent="operator",
        payload={"text": intent.raw_text, "intent": intent_to_dict(intent)},
    )
    state = _TurnState(
        session=session,
        intent=intent,
        planner=planner,
        registry=registry,
        agents=agents,
        gate=gate,
        depth_limit=depth_limit,
        user_event_id=user_event.event_id,
    )
    reply = _run_agent(
        state,
        spec=root,
        task=intent.raw_text,
        task_payload={},
        parent_event_id=user_event.event_id,
        depth=0,
    )
    session.history.append({"role": "agent", "text": reply.text})
    return TurnResult(
        text=reply.text,
        payload=reply.payload,
        pending_confirmation=state.pending_token,
        budget_exceeded=reply.budget_exceeded,
        steps_by_agent=dict(state.steps),
    )


def _run_agent(
    state: _TurnState,
    spec: AgentSpec,
    task: str,
    task_payload: Mapping[str, Any],
    parent_event_id: int,
    depth: int,
) -> AgentReply:
    observations: list[Observation] = []
    while state.steps.get(spec.name, 0) < spec.max_steps:
        ctx = PlannerContext(
            agent=spec,
            intent=state.intent,
            task=task,
            task_payload=task_payload,
            observations=observations,
            step=state.steps.get(spec.name, 0) + 1,
        )
        decision = state.planner.decide(ctx)
        state.steps[spec.name] = state.steps.get(spec.name, 0) + 1
        state.session.steps_consumed += 1

        if isinstance(decision, Respond):
            state.session.trace.append(
                EventKind.AGENT_RESPONSE,
                agent=spec.name,
                payload={"text": decision.text, "payload": dict(decision.payload)},
                parent_id=parent_event_id,
            )
            return AgentReply(text=decision.text, payload=decision.payload)

        if isinstance(decision, CallTool):
            observations.append(_execute_call(state, spec, decision.call, parent_event_id))
            continue

        if isinstance(decision, Delegate):
            observations.append(_execute_delegation(state, spec, decision, parent_event_id, depth))
            continue

        raise TypeError(f"planner returned unknown decision: {decision!r}")

    summary = _progress_summary(observations)
    text = f"Step budget exhausted for agent '{spec.name}' after {spec.max_steps} steps. {summary}"
    state.session.trace.append(
        EventKind.AGENT_RESPONSE,
        agent=spec.name,
        payload={"text": text, "payload": {"budget_exceeded": True}},
        parent_id=parent_event_id,
    )
    return AgentReply(text=text, payload={"budget_exceeded": True}, budget_exceeded=True)


def _execute_call(
    state: _TurnState, spec: AgentSpec, call: ToolCall, parent_event_id: int
) -> Observation:
    # Pre-validate before emitting a tool_call event: recorded calls always
    # reference a registered tool and carry schema-valid arguments.
    refusal = _refuse_call(state, spec, call)
    if refusal is not None:
        state.session.trace.append(
            EventKind.TOOL_RESULT,
            agent=spec.name,
            payload={"attempted_call": _call_doc(call), **refusal.to_dict()},
            parent_id=parent_event_id,
        )
        return Observation(kind="tool", name=call.tool, result=refusal, call=call)

    call_event = state.session.trace.append(
        EventKind.TOOL_CALL,
        agent=spec.name,
        payload=_call_doc(call),
        parent_id=parent_event_id,
    )
    result = invoke_tool(state.registry, call, state.gate)
    if result.error_kind == "confirmation_required":
        token = result.payload.get("token", "")
        state.pending_token = token
        state.session.pending_confirmation = PendingConfirmation(
            token=token, call=call, user_turn_event_id=state.user_event_id
        )
    state.session.trace.append(
        EventKind.TOOL_RESULT,
        agent=spec.name,
        payload=result.to_dict(),
        parent_id=call_event.event_id,
    )
    return Observation(kind="tool", name=call.tool, result=result, call=call)


def _refuse_call(state: _TurnState, spec: AgentSpec, call: ToolCall) -> ToolResult | None:
    from .tools import validate_arguments

    if call.tool not in spec.tool_names:
        return ToolResult.error("tool_not_permitted", f"agent '{spec.name}' may not call '{call.tool}'")
    tool_spec = state.registry.resolve(call.tool)
    if tool_spec is None:
        return ToolResult.error("unknown_tool", f"no tool named '{call.tool}'")
    violations = validate_arguments(tool_spec, call.arguments)
    if violations:
        return ToolResult.error("schema_violation", "; ".join(violations))
    return None


def _execute_delegation(
    state: _TurnState, spec: AgentSpec, decision: Delegate, parent_event_id: int, depth: int
) -> Observation:
    delegation_event = state.session.trace.append(
        EventKind.DELEGATION,
        agent=spec.name,
        payload={"to": decision.agent, "task": decision.task, "payload": dict(decision.payload)},
        parent_id=parent_event_id,
    )

    def fail(kind: str, detail: str) -> Observation:
        result = ToolResult.error(kind, detail)
        state.session.trace.append(
            EventKind.AGENT_RESPONSE,
            agent=decision.agent,
            payload={"text": detail, "payload": result.to_dict()},
            parent_id=delegation_event.event_id,
        )
        return Observation(kind="delegation", name=decision.agent, result=result)

    if decision.agent not in spec.sub_agent_names:
        return fail("unknown_sub_agent", f"agent '{spec.name}' may not delegate to '{decision.agent}'")
    sub_spec = state.agents.get(decision.agent)
    if sub_spec is None:
        return fail("unknown_sub_agent", f"no agent named '{decision.agent}'")
    if depth + 1 > state.depth_limit:
        return fail(
            "delegation_depth_exceeded",
            f"delegation depth {depth + 1} exceeds limit {state.depth_limit}",
        )

    reply = _run_agent(
        state,
        spec=sub_spec,
        task=decision.task,
        task_payload=decision.payload,
        parent_event_id=delegation_event.event_id,
        depth=depth + 1,
    )
    result = ToolResult.success({"text": reply.text, "payload": dict(reply.payload)})
    if reply.budget_exceeded:
        result = ToolResult.error("budget_exceeded", reply.text)
    return Observation(kind="delegation", name=decision.agent, result=result)


def _progress_summary(observations: list[Observation]) -> str:
    calls = sum(1 for o in observations if o.kind == "tool")
    delegations = sum(1 for o in observations if o.kind == "delegation")
    failures = sum(1 for o in observations if not o.result.ok)
    return (
        f"Progress so far: {calls} tool call(s), {delegations} delegation(s), "
        f"{failures} failure(s)."
    )


def _call_doc(call: ToolCall) -> dict[str, Any]:
    return {"tool": call.tool, "arguments": dict(call.arguments)}
