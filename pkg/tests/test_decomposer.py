import json
from pathlib import Path

import httpx
import pytest
from hypothesis import given, strategies as st

from fleetintent.chat import ChatCompletionClient, ChatEndpoint
from fleetintent.decompose import (
    BackendUnavailable,
    DecompositionFailed,
    FleetSummary,
    LlmBackend,
    MalformedResponse,
    RuleBackend,
    decompose,
    load_prompt_template,
)
from fleetintent.fleet.schema import METRIC_VOCABULARY
from fleetintent.intents import Objective, Priority, validate_intent

from conftest import GOLDEN_PROMPT

FIXTURES = Path(__file__).parent / "fixtures"

FLEET = FleetSummary(engine_count=20, engine_ids=tuple(range(1, 21)))


class TestRuleBackend:
    def test_golden_prompt_candidate(self):
        doc = RuleBackend().propose(GOLDEN_PROMPT, METRIC_VOCABULARY, FLEET)
        objectives = [e["objective"] for e in doc["expectations"]]
        assert "maintain" in objectives and "avoid" in objectives
        assert doc["targets"] == {"kind": "dynamic", "filter": {"kind": "all"}}
        assert doc["conditions"] == [
            {"subject": "rul", "comparator": "ge", "threshold": 25.0, "unit": "cycles"}
        ]
        assert doc["context"]["priority"] == "high"
        assert "proactive" in doc["context"]["scope"]
        info = {i["key"]: i["value"] for i in doc["information"]}
        assert info["rul_source"] == "data_agent"
        assert info["output_format"] == "table"

    def test_no_signal_input_has_zero_expectations(self):
        doc = RuleBackend().propose("hello", METRIC_VOCABULARY, FLEET)
        assert doc["expectations"] == []

    def test_check_engine_query(self):
        doc = RuleBackend().propose("check engine 3", METRIC_VOCABULARY, FLEET)
        assert doc["targets"] == {"kind": "static", "engine_ids": [3]}
        objectives = [e["objective"] for e in doc["expectations"]]
        assert "maintain" not in objectives
        info = {i["key"]: i["value"] for i in doc["information"]}
        assert info["query"] == "status"

    def test_stop_engine_now(self):
        doc = RuleBackend().propose("stop engine 7 now", METRIC_VOCABULARY, FLEET)
        assert doc["targets"] == {"kind": "static", "engine_ids": [7]}
        assert any(
            e["objective"] == "achieve" and "stop" in e["description"]
            for e in doc["expectations"]
        )
        assert doc["context"]["priority"] == "high"
        assert doc["context"]["timeframe_days"] == 0

    def test_avoiding_stops_is_not_a_stop_command(self):
        doc = RuleBackend().propose(GOLDEN_PROMPT, METRIC_VOCABULARY, FLEET)
        assert not any(
            e["objective"] == "achieve" and "stop" in e["description"]
            for e in doc["expectations"]
        )

    def test_engine_id_list_parsing(self):
        doc = RuleBackend().propose("check engines 3, 5 and 9", METRIC_VOCABULARY, FLEET)
        assert doc["targets"]["engine_ids"] == [3, 5, 9]

    def test_byte_identical_across_runs(self):
        first = json.dumps(
            RuleBackend().propose(GOLDEN_PROMPT, METRIC_VOCABULARY, FLEET), sort_keys=True
        )
        for _ in range(5):
            again = json.dumps(
                RuleBackend().propose(GOLDEN_PROMPT, METRIC_VOCABULARY, FLEET), sort_keys=True
            )
            assert again == first

    def test_threshold_comes_from_policy_config(self):
        doc = RuleBackend(critical_rul_threshold=40.0).propose(
            "watch the fleet RUL", METRIC_VOCABULARY, FLEET
        )
        assert doc["conditions"][0]["threshold"] == 40.0


class TestDecompose:
    def test_golden_prompt_decomposes_and_validates(self):
        report = decompose(GOLDEN_PROMPT, RuleBackend(), FLEET)
        intent = report.intent
        assert validate_intent(intent) == []
        assert report.attempts == 1
        assert report.backend_name == "rule"
        assert intent.raw_text == GOLDEN_PROMPT
        assert {e.objective for e in intent.expectations} == {Objective.MAINTAIN, Objective.AVOID}
        assert intent.context.priority is Priority.HIGH

    def test_empty_input_rejected(self):
        with pytest.raises(ValueError):
            decompose("", RuleBackend(), FLEET)
        with pytest.raises(ValueError):
            decompose("   ", RuleBackend(), FLEET)

    def test_no_signal_input_fails_after_max_attempts(self):
        with pytest.raises(DecompositionFailed) as err:
            decompose("hello", RuleBackend(), FLEET)
        assert "no expectations" in err.value.violations
        assert err.value.attempts == 3

    def test_repair_loop_feeds_violations_back(self):
        class FlakyBackend:
            name = "flaky"

            def __init__(self):
                self.seen_violations = []

            def propose(self, raw_text, vocabulary, fleet_summary, violations=()):
                self.seen_violations.append(tuple(violations))
                if len(self.seen_violations) == 1:
                    return {"expectations": [], "targets": {"kind": "static", "engine_ids": []}}
                return RuleBackend().propose(raw_text, vocabulary, fleet_summary, violations)

        backend = FlakyBackend()
        report = decompose(GOLDEN_PROMPT, backend, FLEET)
        assert report.attempts == 2
        assert backend.seen_violations[0] == ()
        assert "no expectations" in backend.seen_violations[1]
        assert "empty static target list" in backend.seen_violations[1]
        assert report.repairs == (backend.seen_violations[1],)

    def test_attempts_never_exceed_max(self):
        class CountingBackend:
            name = "counting"
            calls = 0

            def propose(self, raw_text, vocabulary, fleet_summary, violations=()):
                CountingBackend.calls += 1
                return {"expectations": []}

        with pytest.raises(DecompositionFailed):
            decompose("anything", CountingBackend(), FLEET, max_attempts=3)
        assert CountingBackend.calls == 3

    @given(
        doc=st.one_of(
            st.just({}),
            st.just({"expectations": "not a list"}),
            st.just({"expectations": [{"objective": "conquer"}]}),
            st.just({"expectations": [{"description": "x", "objective": "maintain"}],
                     "conditions": [{"subject": "made_up", "comparator": "ge", "threshold": 1}]}),
            st.just({"expectations": [{"description": "x", "objective": "maintain"}],
                     "targets": {"kind": "mystery"}}),
        )
    )
    def test_adversarial_candidates_never_escape_validation(self, doc):
        class AdversarialBackend:
            name = "adversarial"

            def propose(self, raw_text, vocabulary, fleet_summary, violations=()):
                return doc

        try:
            report = decompose("do something", AdversarialBackend(), FLEET)
        except DecompositionFailed:
            return
        assert validate_intent(report.intent) == []


def scripted_transport(bodies):
    """Replay canned chat-completion responses in order."""
    replies = list(bodies)

    def handler(request: httpx.Request) -> httpx.Response:
        if not replies:
            raise AssertionError("no scripted replies left")
        return httpx.Response(200, json=replies.pop(0))

    return httpx.MockTransport(handler)


def load_fixture(name: str) -> dict:
    return json.loads((FIXTURES / name).read_text(encoding="utf-8"))


def llm_backend(transport) -> LlmBackend:
    client = ChatCompletionClient(
        ChatEndpoint(base_url="http://chat.test/v1", model="recorded"), transport=transport
    )
    return LlmBackend(client)


class TestLlmBackend:
    def test_recorded_golden_reply_parses_to_same_structure(self):
        backend = llm_backend(scripted_transport([load_fixture("chat_reply_golden.json")]))
        report = decompose(GOLDEN_PROMPT, backend, FLEET)
        intent = report.intent
        assert validate_intent(intent) == []
        assert {e.objective for e in intent.expectations} == {Objective.MAINTAIN, Objective.AVOID}
        assert intent.targets.kind == "dynamic" and intent.targets.filter.kind == "all"
        assert intent.conditions[0].subject == "rul"
        assert intent.context.priority is Priority.HIGH
        assert {i.key for i in intent.information} >= {"rul_source", "output_format"}

    def test_prose_only_reply_is_malformed(self):
        backend = llm_backend(scripted_transport([load_fixture("chat_reply_prose_only.json")]))
        with pytest.raises(MalformedResponse):
            backend.propose("hello", METRIC_VOCABULARY, FLEET)

    def test_unknown_metric_triggers_repair_reprompt(self):
        backend = llm_backend(
            scripted_transport(
                [load_fixture("chat_reply_bad_metric.json"), load_fixture("chat_reply_golden.json")]
            )
        )
        report = decompose(GOLDEN_PROMPT, backend, FLEET)
        assert report.attempts == 2
        assert any("not in vocabulary" in v for v in report.repairs[0])

    def test_transport_failure_is_backend_unavailable(self):
        def handler(request):
            raise httpx.ConnectError("connection refused")

        backend = llm_backend(httpx.MockTransport(handler))
        with pytest.raises(BackendUnavailable):
            backend.propose("hello", METRIC_VOCABULARY, FLEET)

    def test_prompt_carries_glossary_vocabulary_and_repair_feedback(self):
        captured = []

        def handler(request: httpx.Request) -> httpx.Response:
            captured.append(json.loads(request.content))
            return httpx.Response(200, json=load_fixture("chat_reply_golden.json"))

        backend = llm_backend(httpx.MockTransport(handler))
        backend.propose(
            GOLDEN_PROMPT, METRIC_VOCABULARY, FLEET, violations=("previous was wrong",)
        )
        body = captured[0]
        system = body["messages"][0]["content"]
        assert "expectations" in system and "conditions" in system and "targets" in system
        assert "rul" in system
        assert body["messages"][1]["content"] == GOLDEN_PROMPT
        assert any("previous was wrong" in m["content"] for m in body["messages"])


def test_prompt_template_is_a_packaged_asset():
    template = load_prompt_template()
    for component in ("expectations", "conditions", "targets", "context", "information"):
        assert component in template
