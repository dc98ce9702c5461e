import math

import pytest
from hypothesis import given, strategies as st

from fleetintent.fleet.schema import METRIC_VOCABULARY
from fleetintent.intents import (
    ComplianceLabel,
    Comparator,
    Condition,
    Expectation,
    Intent,
    IntentContext,
    InfoItem,
    Objective,
    Priority,
    TargetSelector,
    evaluate_compliance,
    evaluate_condition,
    intent_from_dict,
    intent_to_dict,
    resolve_targets,
    validate_intent,
)


def make_intent(**overrides) -> Intent:
    fields = dict(
        id="intent-test",
        raw_text="keep the fleet healthy",
        expectations=(Expectation("keep engines running", Objective.MAINTAIN, "rul"),),
        conditions=(Condition("rul", Comparator.GE, 25.0, "cycles"),),
        targets=TargetSelector.all_engines(),
        context=IntentContext(priority=Priority.HIGH, scope="proactive"),
        information=(InfoItem("rul_source", "data_agent"),),
    )
    fields.update(overrides)
    return Intent(**fields)


class TestValidateIntent:
    def test_valid_intent_has_no_violations(self):
        assert validate_intent(make_intent()) == []

    def test_zero_expectations(self):
        violations = validate_intent(make_intent(expectations=()))
        assert "no expectations" in violations

    def test_empty_static_target_list(self):
        intent = make_intent(targets=TargetSelector(kind="static", engine_ids=()))
        assert "empty static target list" in validate_intent(intent)

    def test_duplicate_static_ids(self):
        intent = make_intent(targets=TargetSelector(kind="static", engine_ids=(3, 3)))
        assert "duplicate ids in static target list" in validate_intent(intent)

    def test_unknown_condition_subject(self):
        intent = make_intent(conditions=(Condition("warp_flux", Comparator.GE, 1.0),))
        assert any("not in vocabulary" in v for v in validate_intent(intent))

    def test_non_finite_threshold(self):
        intent = make_intent(conditions=(Condition("rul", Comparator.GE, math.inf),))
        assert any("not finite" in v for v in validate_intent(intent))

    def test_negative_timeframe_rejected_zero_allowed(self):
        bad = make_intent(context=IntentContext(timeframe_days=-1))
        assert any("timeframe" in v for v in validate_intent(bad))
        immediate = make_intent(context=IntentContext(timeframe_days=0))
        assert validate_intent(immediate) == []

    def test_empty_information_key(self):
        intent = make_intent(information=(InfoItem("", "x"),))
        assert any("empty key" in v for v in validate_intent(intent))


class TestEvaluateCondition:
    def test_rul_below_critical_threshold(self):
        cond = Condition("rul", Comparator.GE, 25.0, "cycles")
        assert evaluate_condition(cond, 16) is False

    def test_boundary_equality_under_ge(self):
        cond = Condition("rul", Comparator.GE, 25.0, "cycles")
        assert evaluate_condition(cond, 25) is True

    def test_strict_less_than(self):
        cond = Condition("rul", Comparator.LT, 80.0, "cycles")
        assert evaluate_condition(cond, 82) is False

    def test_non_finite_measurement_rejected(self):
        cond = Condition("rul", Comparator.GE, 25.0)
        with pytest.raises(ValueError):
            evaluate_condition(cond, math.nan)

    @given(
        comparator=st.sampled_from(list(Comparator)),
        threshold=st.floats(-1e6, 1e6),
        measured=st.floats(-1e6, 1e6),
    )
    def test_pure_function_of_inputs(self, comparator, threshold, measured):
        cond = Condition("rul", comparator, threshold)
        first = evaluate_condition(cond, measured)
        assert evaluate_condition(cond, measured) is first
        ops = {
            Comparator.LT: measured < threshold,
            Comparator.LE: measured <= threshold,
            Comparator.GT: measured > threshold,
            Comparator.GE: measured >= threshold,
            Comparator.EQ: measured == threshold,
        }
        assert first is ops[comparator]


class TestResolveTargets:
    def test_all_filter_returns_whole_fleet(self):
        fleet = list(range(1, 21))
        resolution = resolve_targets(TargetSelector.all_engines(), fleet, {})
        assert list(resolution.engine_ids) == fleet

    def test_static_singleton(self):
        resolution = resolve_targets(TargetSelector.static([5]), [1, 5, 9], {})
        assert resolution.engine_ids == (5,)
        assert resolution.warnings == ()

    def test_static_missing_id_warns_but_resolves(self):
        resolution = resolve_targets(TargetSelector.static([5, 99]), [1, 5, 9], {})
        assert resolution.engine_ids == (5,)
        assert resolution.warnings == ("engine 99 not in fleet",)

    def test_metric_below_filters_reference_ruls(self, fixture_ruls):
        fleet = sorted(fixture_ruls)
        lookup = {eid: float(rul) for eid, rul in fixture_ruls.items()}
        resolution = resolve_targets(TargetSelector.metric_below("rul", 25), fleet, lookup)
        # exactly the one engine whose pinned rul sits below the critical band
        assert resolution.engine_ids == (3,)
        assert fixture_ruls[3] == 16

    @given(
        fleet=st.lists(st.integers(1, 60), unique=True, max_size=30),
        selector=st.one_of(
            st.builds(TargetSelector.static, st.lists(st.integers(1, 80), min_size=1, unique=True)),
            st.just(TargetSelector.all_engines()),
            st.builds(TargetSelector.metric_below, st.just("rul"), st.floats(0, 200)),
            st.builds(TargetSelector.metric_at_least, st.just("rul"), st.floats(0, 200)),
        ),
        data=st.data(),
    )
    def test_output_subset_of_fleet_and_duplicate_free(self, fleet, selector, data):
        lookup = {
            eid: data.draw(st.floats(0, 300), label=f"metric[{eid}]") for eid in fleet
        }
        resolution = resolve_targets(selector, fleet, lookup)
        assert set(resolution.engine_ids) <= set(fleet)
        assert len(set(resolution.engine_ids)) == len(resolution.engine_ids)


class TestEvaluateCompliance:
    def test_no_conditions_is_vacuously_compliant(self):
        intent = make_intent(conditions=())
        results = evaluate_compliance(intent, {1: {"rul": 5.0}})
        assert [r.status for r in results] == [ComplianceLabel.COMPLIANT]
        assert results[0].evidence == ()

    def test_reference_fleet_violates_critical_threshold(self, fixture_ruls):
        intent = make_intent()
        measurements = {eid: {"rul": float(rul)} for eid, rul in fixture_ruls.items()}
        results = evaluate_compliance(intent, measurements)
        assert all(r.status is ComplianceLabel.NON_COMPLIANT for r in results)
        flagged = {e.engine_id for e in results[0].evidence if e.value < 25}
        assert flagged == {3}

    def test_missing_metric_is_unknown_not_noncompliant(self):
        intent = make_intent(targets=TargetSelector.static([1, 2]))
        measurements = {1: {"rul": 100.0}, 2: {}}
        results = evaluate_compliance(intent, measurements)
        assert results[0].status is ComplianceLabel.UNKNOWN

    def test_target_metric_pair_listed_at_most_once(self):
        intent = make_intent(
            conditions=(
                Condition("rul", Comparator.GE, 25.0),
                Condition("rul", Comparator.LT, 200.0),
            )
        )
        results = evaluate_compliance(intent, {1: {"rul": 50.0}})
        keys = [(e.engine_id, e.metric) for e in results[0].evidence]
        assert len(keys) == len(set(keys))

    @given(
        thresholds=st.lists(st.floats(0, 150), min_size=1, max_size=3),
        values=st.dictionaries(st.integers(1, 8), st.floats(0, 150), min_size=1, max_size=8),
    )
    def test_matches_brute_force_conjunction(self, thresholds, values):
        conditions = tuple(Condition("rul", Comparator.GE, t, "cycles") for t in thresholds)
        intent = make_intent(conditions=conditions)
        measurements = {eid: {"rul": v} for eid, v in values.items()}
        results = evaluate_compliance(intent, measurements)

        expected_ok = all(
            evaluate_condition(c, measurements[eid]["rul"])
            for c in conditions
            for eid in measurements
        )
        expected = ComplianceLabel.COMPLIANT if expected_ok else ComplianceLabel.NON_COMPLIANT
        assert all(r.status is expected for r in results)


# -- serialization -------------------------------------------------------------

_metric = st.one_of(st.none(), st.sampled_from(sorted(METRIC_VOCABULARY)))

_expectations = st.lists(
    st.builds(
        Expectation,
        description=st.text(min_size=1, max_size=40).filter(str.strip),
        objective=st.sampled_from(list(Objective)),
        metric=_metric,
    ),
    min_size=1,
    max_size=4,
)

_conditions = st.lists(
    st.builds(
        Condition,
        subject=st.sampled_from(sorted(METRIC_VOCABULARY)),
        comparator=st.sampled_from(list(Comparator)),
        threshold=st.floats(-1e6, 1e6),
        unit=st.sampled_from(["", "cycles", "rpm"]),
    ),
    max_size=3,
)

_targets = st.one_of(
    st.builds(TargetSelector.static, st.lists(st.integers(1, 99), min_size=1, unique=True)),
    st.just(TargetSelector.all_engines()),
    st.builds(
        TargetSelector.metric_below, st.sampled_from(sorted(METRIC_VOCABULARY)), st.floats(0, 500)
    ),
)

_intents = st.builds(
    Intent,
    id=st.uuids().map(lambda u: f"intent-{u.hex[:12]}"),
    raw_text=st.text(min_size=1, max_size=120),
    expectations=_expectations.map(tuple),
    conditions=_conditions.map(tuple),
    targets=_targets,
    context=st.builds(
        IntentContext,
        priority=st.sampled_from(list(Priority)),
        timeframe_days=st.one_of(st.none(), st.integers(0, 365)),
        scope=st.text(max_size=30),
    ),
    information=st.lists(
        st.builds(
            InfoItem,
            key=st.text(min_size=1, max_size=20).filter(str.strip),
            value=st.text(max_size=30),
        ),
        max_size=3,
    ).map(tuple),
)


@given(intent=_intents)
def test_serialization_round_trip(intent):
    assert intent_from_dict(intent_to_dict(intent)) == intent


def test_raw_text_round_trips_verbatim():
    raw = '  odd   spacing\tand "quotes" survive µ '
    intent = make_intent(raw_text=raw)
    assert intent_from_dict(intent_to_dict(intent)).raw_text == raw
