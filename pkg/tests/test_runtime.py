import random

import pytest

from fleetintent.decompose import FleetSummary, RuleBackend, decompose
from fleetintent.fleet import EngineStatus, fleet_snapshots, get_engine_data
from fleetintent.maintenance import consolidate_plan
from fleetintent.runtime import (
    AgentSpec,
    CallTool,
    ConfirmationGate,
    Delegate,
    DuplicateToolName,
    EventKind,
    InvalidAgentGraph,
    ParamSpec,
    Respond,
    ReturnSpec,
    RulePlanner,
    ScriptedPlanner,
    Session,
    ToolCall,
    ToolRegistry,
    ToolResult,
    ToolSpec,
    ToolEffect,
    Trace,
    invoke_tool,
    run_turn,
    validate_agent_graph,
)
from fleetintent.wiring import build_orchestrator

from conftest import GOLDEN_PROMPT, make_config
from runtime_checks import ChaosPlanner, assert_valid_trace, fleet_state_hash, max_delegation_depth

SEVEN_TOOLS = (
    "get_engine_data",
    "predict_engine_rul",
    "suggest_maintenance_action",
    "estimate_maintenance_cost",
    "assign_maintenance_staff",
    "schedule_maintenance_task",
    "stop_engine",
)


@pytest.fixture
def orchestrator():
    return build_orchestrator(make_config())


@pytest.fixture
def auto_orchestrator():
    return build_orchestrator(make_config(auto_confirm_critical=True))


def golden_intent(orch):
    return decompose(GOLDEN_PROMPT, RuleBackend(), orch.fleet_summary()).intent


def run(orch, intent, planner, gate=None, session=None, depth_limit=3):
    session = session or Session.new()
    gate = gate or ConfirmationGate(auto_confirm=True)
    result = run_turn(
        session, intent, orch.root_agent, planner, orch.registry, orch.agents, gate, depth_limit
    )
    return result, session


class TestRegistry:
    def test_register_and_resolve(self):
        registry = ToolRegistry()
        spec = ToolSpec(
            name="stop_engine",
            description="stop",
            params=(ParamSpec("engine_id", "int"),),
            returns=ReturnSpec("object", "outcome"),
            effect=ToolEffect.CRITICAL,
        )
        registry.register(spec, lambda args: ToolResult.success({}))
        assert registry.resolve("stop_engine") is spec

    def test_duplicate_name_rejected(self):
        registry = ToolRegistry()
        spec = ToolSpec("t", "d", (), ReturnSpec("object", ""))
        registry.register(spec, lambda args: ToolResult.success({}))
        with pytest.raises(DuplicateToolName):
            registry.register(spec, lambda args: ToolResult.success({}))

    def test_all_seven_fleet_tools_resolve(self, orchestrator):
        for name in SEVEN_TOOLS:
            assert orchestrator.registry.resolve(name) is not None

    def test_critical_effect_is_mutating(self):
        assert ToolEffect.CRITICAL.is_mutating
        assert not ToolEffect.READ_ONLY.is_mutating


class TestInvokeTool:
    def test_unknown_tool(self, orchestrator):
        result = invoke_tool(orchestrator.registry, ToolCall("ghost_tool", {}), ConfirmationGate())
        assert not result.ok and result.error_kind == "unknown_tool"

    def test_schema_violation_expected_int(self, orchestrator):
        result = invoke_tool(
            orchestrator.registry,
            ToolCall("get_engine_data", {"engine_id": "seven"}),
            ConfirmationGate(),
        )
        assert result.error_kind == "schema_violation"
        assert "engine_id: expected int" in result.payload["detail"]

    def test_missing_required_argument(self, orchestrator):
        result = invoke_tool(orchestrator.registry, ToolCall("stop_engine", {}), ConfirmationGate())
        assert result.error_kind == "schema_violation"
        assert "required argument missing" in result.payload["detail"]

    def test_enum_argument_validated(self, orchestrator):
        result = invoke_tool(
            orchestrator.registry,
            ToolCall("estimate_maintenance_cost", {"action": "explode"}),
            ConfirmationGate(),
        )
        assert result.error_kind == "schema_violation"

    def test_unexpected_argument_rejected(self, orchestrator):
        result = invoke_tool(
            orchestrator.registry,
            ToolCall("get_engine_data", {"surprise": 1}),
            ConfirmationGate(),
        )
        assert result.error_kind == "schema_violation"

    def test_critical_without_token_is_refused_with_fresh_token(self, orchestrator):
        gate = ConfirmationGate()
        result = invoke_tool(orchestrator.registry, ToolCall("stop_engine", {"engine_id": 7}), gate)
        assert result.error_kind == "confirmation_required"
        assert result.payload["token"]
        assert get_engine_data(orchestrator.store, 7).status is EngineStatus.RUNNING

    def test_critical_with_confirmed_token_executes(self, orchestrator):
        gate = ConfirmationGate()
        call = ToolCall("stop_engine", {"engine_id": 7})
        refused = invoke_tool(orchestrator.registry, call, gate)
        gate.confirm(refused.payload["token"])
        result = invoke_tool(orchestrator.registry, call, gate)
        assert result.ok
        assert get_engine_data(orchestrator.store, 7).status is EngineStatus.STOPPED

    def test_confirmation_token_is_single_use(self, orchestrator):
        gate = ConfirmationGate()
        call = ToolCall("stop_engine", {"engine_id": 7})
        token = invoke_tool(orchestrator.registry, call, gate).payload["token"]
        gate.confirm(token)
        with pytest.raises(KeyError):
            gate.confirm(token)

    def test_auto_confirm_skips_the_gate(self, orchestrator):
        result = invoke_tool(
            orchestrator.registry,
            ToolCall("stop_engine", {"engine_id": 7}),
            ConfirmationGate(auto_confirm=True),
        )
        assert result.ok

    def test_handler_exception_becomes_error_result(self):
        registry = ToolRegistry()
        registry.register(
            ToolSpec("broken", "always raises", (), ReturnSpec("object", "")),
            lambda args: 1 / 0,
        )
        result = invoke_tool(registry, ToolCall("broken", {}), ConfirmationGate())
        assert result.error_kind == "handler_error"


class TestAgentGraph:
    def test_self_delegation_rejected(self):
        agents = {"a": AgentSpec("a", "", sub_agent_names=("a",))}
        with pytest.raises(InvalidAgentGraph):
            validate_agent_graph(agents)

    def test_cycle_rejected(self):
        agents = {
            "a": AgentSpec("a", "", sub_agent_names=("b",)),
            "b": AgentSpec("b", "", sub_agent_names=("a",)),
        }
        with pytest.raises(InvalidAgentGraph):
            validate_agent_graph(agents)

    def test_dag_accepted(self):
        agents = {
            "a": AgentSpec("a", "", sub_agent_names=("b", "c")),
            "b": AgentSpec("b", "", sub_agent_names=("c",)),
            "c": AgentSpec("c", ""),
        }
        validate_agent_graph(agents)


class TestTrace:
    def test_append_only_increasing_ids(self):
        trace = Trace()
        first = trace.append(EventKind.USER_TURN, "operator")
        second = trace.append(EventKind.AGENT_RESPONSE, "root_agent", parent_id=first.event_id)
        assert second.event_id == first.event_id + 1

    def test_parent_must_exist(self):
        trace = Trace()
        with pytest.raises(ValueError):
            trace.append(EventKind.THOUGHT, "root_agent", parent_id=42)

    def test_events_since_cursor(self):
        trace = Trace()
        first = trace.append(EventKind.USER_TURN, "operator")
        trace.append(EventKind.AGENT_RESPONSE, "root_agent", parent_id=first.event_id)
        assert [e.event_id for e in trace.events_since(0)] == [1, 2]
        assert [e.event_id for e in trace.events_since(1)] == [2]
        assert trace.events_since(2) == []

    def test_jsonl_export_one_line_per_event(self):
        trace = Trace()
        root = trace.append(EventKind.USER_TURN, "operator")
        trace.append(EventKind.AGENT_RESPONSE, "root_agent", parent_id=root.event_id)
        lines = trace.to_jsonl().strip().splitlines()
        assert len(lines) == 2


class TestRunTurnScripted:
    def test_immediate_respond_yields_two_event_trace(self, orchestrator):
        intent = golden_intent(orchestrator)
        result, session = run(orchestrator, intent, ScriptedPlanner([Respond(text="hello")]))
        assert result.text == "hello"
        events = [e.to_dict() for e in session.trace.events()]
        assert [e["kind"] for e in events] == ["user_turn", "agent_response"]
        assert_valid_trace(events)

    def test_empty_script_defaults_to_respond(self, orchestrator):
        intent = golden_intent(orchestrator)
        result, _ = run(orchestrator, intent, ScriptedPlanner([]))
        assert not result.budget_exceeded
        assert "no scripted decisions" in result.text

    def test_tool_loop_exhausts_budget(self, orchestrator):
        intent = golden_intent(orchestrator)

        class LoopPlanner:
            def decide(self, ctx):
                return CallTool(ToolCall("stop_engine", {"engine_id": 7}))

        result, session = run(orchestrator, intent, LoopPlanner())
        assert result.budget_exceeded
        assert result.steps_by_agent["root_agent"] == orchestrator.root_agent.max_steps

    def test_scripted_delegation_flow_produces_consolidated_plan(self, auto_orchestrator):
        orch = auto_orchestrator
        intent = golden_intent(orch)
        script = [
            Delegate(agent="data_agent", task="gather snapshots", payload={"all": True}),
            CallTool(ToolCall("get_engine_data", {})),
            CallTool(ToolCall("predict_engine_rul", {})),
            Respond(text="data ready"),
            Delegate(agent="maintenance_agent", task="plan maintenance", payload={"all": True}),
            CallTool(ToolCall("schedule_maintenance_task", {})),
            Respond(text="plan ready"),
            Respond(text="done"),
        ]
        result, session = run(orch, intent, ScriptedPlanner(script))
        assert result.text == "done"
        events = [e.to_dict() for e in session.trace.events()]
        assert_valid_trace(events)

        schedule_results = [
            e for e in events
            if e["kind"] == "tool_result" and "plan" in e["payload"].get("payload", {})
        ]
        assert schedule_results, "schedule tool must report the consolidated plan"
        plan_doc = schedule_results[-1]["payload"]["payload"]["plan"]
        expected = consolidate_plan(
            fleet_snapshots(orch.store), orch.config.bands, orch.config.roster, orch.config.cost_model
        ).to_dict()
        assert plan_doc == expected

    def test_tool_not_in_agent_spec_is_refused(self, orchestrator):
        intent = golden_intent(orchestrator)
        script = [CallTool(ToolCall("get_engine_data", {})), Respond(text="done")]
        result, session = run(orchestrator, intent, ScriptedPlanner(script))
        events = [e.to_dict() for e in session.trace.events()]
        refusals = [
            e for e in events
            if e["kind"] == "tool_result" and e["payload"].get("error_kind") == "tool_not_permitted"
        ]
        assert refusals, "root agent may not call data tools directly"

    def test_unknown_sub_agent_is_an_observation_not_a_crash(self, orchestrator):
        intent = golden_intent(orchestrator)
        script = [Delegate(agent="nonexistent_agent", task="x"), Respond(text="done")]
        result, session = run(orchestrator, intent, ScriptedPlanner(script))
        assert result.text == "done"


class TestRunTurnRulePlanner:
    def test_golden_intent_full_flow(self, auto_orchestrator):
        orch = auto_orchestrator
        intent = golden_intent(orch)
        result, session = run(orch, intent, RulePlanner())
        events = [e.to_dict() for e in session.trace.events()]
        assert_valid_trace(events)

        stop_calls = [
            e for e in events
            if e["kind"] == "tool_call" and e["payload"].get("tool") == "stop_engine"
        ]
        assert len(stop_calls) == 1
        assert stop_calls[0]["payload"]["arguments"] == {"engine_id": 3}

        delegations = [e["payload"]["to"] for e in events if e["kind"] == "delegation"]
        assert delegations == ["data_agent", "maintenance_agent"]

        assert result.payload["plan"]["groups"][0]["action"] == "stop"
        assert get_engine_data(orch.store, 3).status is EngineStatus.STOPPED

    def test_query_intent_delegates_to_data_agent_only(self, orchestrator):
        intent = decompose("check engine 3", RuleBackend(), orchestrator.fleet_summary()).intent
        result, session = run(orchestrator, intent, RulePlanner())
        events = [e.to_dict() for e in session.trace.events()]
        delegations = [e["payload"]["to"] for e in events if e["kind"] == "delegation"]
        assert delegations == ["data_agent"]
        assert "rul 16" in result.text

    def test_stop_intent_without_auto_confirm_parks_a_token(self, orchestrator):
        intent = decompose("stop engine 7", RuleBackend(), orchestrator.fleet_summary()).intent
        gate = ConfirmationGate(auto_confirm=False)
        result, session = run(orchestrator, intent, RulePlanner(), gate=gate)
        assert result.pending_confirmation
        assert session.pending_confirmation.token == result.pending_confirmation
        assert get_engine_data(orchestrator.store, 7).status is EngineStatus.RUNNING

    def test_stop_intent_with_auto_confirm_stops_engine(self, orchestrator):
        intent = decompose("stop engine 7 now", RuleBackend(), orchestrator.fleet_summary()).intent
        result, _ = run(orchestrator, intent, RulePlanner(), gate=ConfirmationGate(auto_confirm=True))
        assert get_engine_data(orchestrator.store, 7).status is EngineStatus.STOPPED
        assert result.pending_confirmation is None


class TestLlmPlanner:
    def _planner(self, orchestrator, replies):
        import httpx

        from fleetintent.chat import ChatCompletionClient, ChatEndpoint
        from fleetintent.runtime import LlmPlanner

        scripted = [
            {"choices": [{"message": {"role": "assistant", "content": content}}]}
            for content in replies
        ]

        def handler(request: httpx.Request) -> httpx.Response:
            return httpx.Response(200, json=scripted.pop(0))

        client = ChatCompletionClient(
            ChatEndpoint(base_url="http://chat.test/v1", model="recorded"),
            transport=httpx.MockTransport(handler),
        )
        return LlmPlanner(client, orchestrator.registry)

    def test_replayed_delegation_flow(self, orchestrator):
        intent = golden_intent(orchestrator)
        planner = self._planner(
            orchestrator,
            [
                '{"decision": "delegate", "agent": "data_agent", "task": "gather"}',
                '{"decision": "call_tool", "tool": "get_engine_data", "arguments": {"engine_id": 3}}',
                '{"decision": "respond", "text": "snapshot ready"}',
                '{"decision": "respond", "text": "all done"}',
            ],
        )
        result, session = run(orchestrator, intent, planner)
        assert result.text == "all done"
        events = [e.to_dict() for e in session.trace.events()]
        assert [e["payload"]["to"] for e in events if e["kind"] == "delegation"] == ["data_agent"]
        assert_valid_trace(events)

    def test_prose_reply_raises_malformed_response(self, orchestrator):
        from fleetintent.decompose import MalformedResponse

        intent = golden_intent(orchestrator)
        planner = self._planner(orchestrator, ["I think we should look at the engines."])
        with pytest.raises(MalformedResponse):
            run(orchestrator, intent, planner)

    def test_unknown_decision_kind_raises(self, orchestrator):
        from fleetintent.decompose import MalformedResponse

        intent = golden_intent(orchestrator)
        planner = self._planner(orchestrator, ['{"decision": "meditate"}'])
        with pytest.raises(MalformedResponse):
            run(orchestrator, intent, planner)


class TestAdversarialProperties:
    def test_chaos_planners_respect_all_invariants(self, auto_orchestrator):
        orch = auto_orchestrator
        intent = golden_intent(orch)
        for seed in range(60):
            session = Session.new()
            planner = ChaosPlanner(random.Random(seed))
            result = run_turn(
                session,
                intent,
                orch.root_agent,
                planner,
                orch.registry,
                orch.agents,
                ConfirmationGate(auto_confirm=True),
                depth_limit=3,
            )
            for name, steps in result.steps_by_agent.items():
                assert steps <= orch.agents[name].max_steps
            events = [e.to_dict() for e in session.trace.events()]
            assert_valid_trace(events)
            assert max_delegation_depth(events) <= 3

    def test_schema_violations_never_mutate_fleet(self, orchestrator):
        intent = golden_intent(orchestrator)
        before = fleet_state_hash(orchestrator.store)

        class BadArgsPlanner:
            def __init__(self):
                self.calls = iter(
                    [
                        CallTool(ToolCall("stop_engine", {"engine_id": "three"})),
                        CallTool(ToolCall("stop_engine", {"engine_id": True})),
                        CallTool(ToolCall("stop_engine", {})),
                        CallTool(ToolCall("stop_engine", {"engine_id": 3, "bogus": 1})),
                        Respond(text="done"),
                    ]
                )

            def decide(self, ctx):
                return next(self.calls)

        run(orchestrator, intent, BadArgsPlanner(), gate=ConfirmationGate(auto_confirm=True))
        assert fleet_state_hash(orchestrator.store) == before

    def test_unregistered_tool_reports_unknown_tool(self, orchestrator):
        intent = golden_intent(orchestrator)
        agents = dict(orchestrator.agents)
        root = orchestrator.root_agent
        agents["root_agent"] = AgentSpec(
            name=root.name,
            role_instructions=root.role_instructions,
            tool_names=root.tool_names + ("ghost_tool",),
            sub_agent_names=root.sub_agent_names,
            max_steps=root.max_steps,
        )
        session = Session.new()
        run_turn(
            session,
            intent,
            agents["root_agent"],
            ScriptedPlanner([CallTool(ToolCall("ghost_tool", {})), Respond(text="x")]),
            orchestrator.registry,
            agents,
            ConfirmationGate(auto_confirm=True),
        )
        events = [e.to_dict() for e in session.trace.events()]
        kinds = [
            e["payload"].get("error_kind") for e in events if e["kind"] == "tool_result"
        ]
        assert "unknown_tool" in kinds

    def test_delegation_depth_limit_blocks_deep_chains(self, orchestrator):
        chain = {
            "root_agent": AgentSpec("root_agent", "", sub_agent_names=("level1",), max_steps=4),
            "level1": AgentSpec("level1", "", sub_agent_names=("level2",), max_steps=4),
            "level2": AgentSpec("level2", "", sub_agent_names=("level3",), max_steps=4),
            "level3": AgentSpec("level3", "", sub_agent_names=("level4",), max_steps=4),
            "level4": AgentSpec("level4", "", max_steps=4),
        }
        validate_agent_graph(chain)

        class DiveDeep:
            def decide(self, ctx):
                if ctx.agent.sub_agent_names:
                    return Delegate(agent=ctx.agent.sub_agent_names[0], task="descend")
                return Respond(text="bottom")

        intent = golden_intent(orchestrator)
        session = Session.new()
        run_turn(
            session,
            intent,
            chain["root_agent"],
            DiveDeep(),
            orchestrator.registry,
            chain,
            ConfirmationGate(auto_confirm=True),
            depth_limit=3,
        )
        events = [e.to_dict() for e in session.trace.events()]
        assert max_delegation_depth(events) <= 4  # the 4th is refused, never run
        depth_errors = [
            e for e in events
            if e["kind"] == "agent_response"
            and e["payload"].get("payload", {}).get("error_kind") == "delegation_depth_exceeded"
        ]
        assert depth_errors
