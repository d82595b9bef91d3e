from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from taxiwarn.airportmodel import Relation, SharedFeature
from taxiwarn.conflict import (
    DEFAULT_THRESHOLDS,
    SafetyThresholds,
    WarningConfig,
    WarningLevel,
    classify,
    conflict_probability,
    detect,
    evaluate_pair,
    gap_interval,
    memberships,
    offset_sweep,
    response_action,
    sweep_to_csv,
    threshold_for,
)
from taxiwarn.deduction import TimeInterval

from conftest import SATURDAY_10, make_command, make_timeline

# --- thresholds ---


def test_threshold_identities_from_rules():
    t = SafetyThresholds.from_rules()
    assert t.t_c1_s == pytest.approx(1.8, abs=1e-9)
    assert t.t_c2_s == pytest.approx(3.6, abs=1e-9)
    assert t.t_no1_s == pytest.approx(5.0, abs=1e-9)
    assert t.t_no2_s == pytest.approx(6.8, abs=1e-9)


def test_threshold_for_relation():
    assert threshold_for(Relation.CONFRONTATION) == pytest.approx(5.0, abs=1e-9)
    assert threshold_for(Relation.CROSS) == pytest.approx(6.8, abs=1e-9)
    assert threshold_for(Relation.REAR_END) == pytest.approx(6.8, abs=1e-9)


def test_thresholds_scale_with_rules():
    # half the separation floor halves the conflict windows
    t = SafetyThresholds.from_rules(l_min_m=25.0)
    assert t.t_c1_s == pytest.approx(0.9, abs=1e-9)
    assert t.t_no2_s == pytest.approx(1.8 + 1.2 + 2.0, abs=1e-9)


# --- gap intervals ---


def test_gap_straddles_zero():
    gap = gap_interval(TimeInterval(10, 20), TimeInterval(12, 15))
    assert (gap.lo_s, gap.hi_s) == (0.0, 8.0)


def test_gap_disjoint_windows():
    gap = gap_interval(TimeInterval(100, 110), TimeInterval(10, 20))
    assert (gap.lo_s, gap.hi_s) == (80.0, 100.0)


def test_gap_identical_windows():
    gap = gap_interval(TimeInterval(40, 55), TimeInterval(40, 55))
    assert (gap.lo_s, gap.hi_s) == (0.0, 15.0)


@settings(max_examples=500)
@given(
    a=st.tuples(st.floats(0, 1e4), st.floats(0, 1e4)).map(lambda t: TimeInterval(min(t), max(t))),
    b=st.tuples(st.floats(0, 1e4), st.floats(0, 1e4)).map(lambda t: TimeInterval(min(t), max(t))),
)
def test_gap_symmetric_and_nonnegative(a, b):
    g1 = gap_interval(a, b)
    g2 = gap_interval(b, a)
    assert g1 == g2
    assert 0.0 <= g1.lo_s <= g1.hi_s


@settings(max_examples=300)
@given(
    a=st.tuples(st.floats(0, 1e3), st.floats(0, 1e3)).map(lambda t: TimeInterval(min(t), max(t))),
    b=st.tuples(st.floats(0, 1e3), st.floats(0, 1e3)).map(lambda t: TimeInterval(min(t), max(t))),
    widen=st.floats(0, 100),
)
def test_widening_inputs_widens_gap(a, b, widen):
    base = gap_interval(a, b)
    wide = gap_interval(TimeInterval(a.lo_s - widen, a.hi_s + widen), b)
    assert wide.lo_s <= base.lo_s + 1e-9
    assert wide.hi_s >= base.hi_s - 1e-9


# --- probability ---


def test_probability_midpoint():
    assert conflict_probability(TimeInterval(2, 8), 5.0) == pytest.approx(0.5)


def test_probability_zero_when_gap_far():
    assert conflict_probability(TimeInterval(10, 30), 6.8) == 0.0


def test_probability_one_when_gap_small():
    assert conflict_probability(TimeInterval(0, 3), 5.0) == 1.0


def test_probability_degenerate_gap():
    assert conflict_probability(TimeInterval(4, 4), 5.0) == 1.0
    assert conflict_probability(TimeInterval(6, 6), 5.0) == 0.0


def test_probability_continuous_at_branches():
    # approaching t_no == t_min from both sides
    assert conflict_probability(TimeInterval(5, 15), 5.0) == pytest.approx(0.0)
    assert conflict_probability(TimeInterval(5, 15), 5.0 + 1e-9) == pytest.approx(0.0, abs=1e-9)
    # approaching t_no == t_max
    assert conflict_probability(TimeInterval(1, 5), 5.0) == pytest.approx(1.0)
    assert conflict_probability(TimeInterval(1, 5), 5.0 - 1e-9) == pytest.approx(1.0, abs=1e-9)


@settings(max_examples=300)
@given(
    lo=st.floats(0, 100),
    width=st.floats(0.001, 100),
    t_no=st.floats(0, 120),
    shift=st.floats(0, 50),
)
def test_probability_nonincreasing_in_gap_location(lo, width, t_no, shift):
    near = conflict_probability(TimeInterval(lo, lo + width), t_no)
    far = conflict_probability(TimeInterval(lo + shift, lo + width + shift), t_no)
    assert far <= near + 1e-12


# --- memberships and classification ---


def test_memberships_at_zero():
    grades = memberships(0.0)
    assert grades == {"low": 1.0, "intermediate": 0.0, "high": 0.0}


def test_memberships_midband():
    grades = memberships(0.465)
    assert grades["low"] == pytest.approx(0.25, abs=1e-12)
    assert grades["intermediate"] == 1.0
    assert grades["high"] == pytest.approx(0.25, abs=1e-12)


def test_memberships_at_one():
    grades = memberships(1.0)
    assert grades == {"low": 0.0, "intermediate": 0.0, "high": 1.0}


def test_memberships_boundaries_are_one_for_adjacent_levels():
    at_a = memberships(0.32)
    assert at_a["low"] == 1.0 and at_a["intermediate"] == 1.0
    at_b = memberships(0.61)
    assert at_b["intermediate"] == 1.0 and at_b["high"] == 1.0


def test_memberships_rejects_out_of_range():
    with pytest.raises(ValueError):
        memberships(1.5)


def test_classify_golden_points():
    assert classify(0.3290) is WarningLevel.INTERMEDIATE
    assert classify(0.2501) is WarningLevel.LOW
    assert classify(0.6740) is WarningLevel.HIGH
    assert classify(1.0) is WarningLevel.DANGER


def test_classify_boundary_ties_resolve_upward():
    assert classify(0.32) is WarningLevel.INTERMEDIATE
    assert classify(0.61) is WarningLevel.HIGH


def test_classify_custom_breakpoints():
    config = WarningConfig(a=0.2, b=0.5)
    assert classify(0.25, config) is WarningLevel.INTERMEDIATE
    assert classify(0.55, config) is WarningLevel.HIGH


def test_danger_reserved_for_certainty():
    assert classify(0.9999) is WarningLevel.HIGH
    assert classify(1.0) is WarningLevel.DANGER


def test_response_actions():
    assert response_action(WarningLevel.LOW).must_modify is False
    assert response_action(WarningLevel.INTERMEDIATE).must_modify is False
    assert response_action(WarningLevel.HIGH).must_modify is True
    assert response_action(WarningLevel.HIGH).immediate is False
    danger = response_action(WarningLevel.DANGER)
    assert danger.must_modify and danger.immediate


# --- detect on hand-built timelines ---


def _cross_feature(node="B3"):
    return SharedFeature(kind="node", feature_id=node, relation=Relation.CROSS)


def test_detect_disjoint_routes_low():
    a = make_timeline("a", "AP", [("P", "B3", 100.0, 120.0)])
    b = make_timeline("b", "B1", [("B-1", "B2", 300.0, 320.0)])
    report = detect(a, b, [])
    assert report.probability == 0.0
    assert report.level is WarningLevel.LOW
    assert report.features == ()
    assert report.action.must_modify is False


def test_detect_cross_gap_hand_case():
    # gap [2, 8] against t_no2 = 6.8 -> p = 0.8 -> high warning
    a = make_timeline("a", "AP", [("P", "B3", 100.0, 104.0)])
    b = make_timeline("b", "R1", [("C1", "B3", 106.0, 108.0)])
    report = detect(a, b, [_cross_feature()])
    fa = report.features[0]
    assert (fa.gap.t_min_s, fa.gap.t_max_s) == (2.0, 8.0)
    assert fa.t_no_s == pytest.approx(6.8, abs=1e-9)
    assert report.probability == pytest.approx(0.8, abs=1e-9)
    assert report.level is WarningLevel.HIGH
    assert report.action.must_modify


def test_detect_confrontation_certainty_is_danger():
    a = make_timeline("a", "B2", [("B-4", "B4", 100.0, 101.0)])
    b = make_timeline("b", "B6", [("B-4", "B3", 99.0, 102.0)])
    feature = SharedFeature(kind="segment", feature_id="B-4", relation=Relation.CONFRONTATION)
    report = detect(a, b, [feature])
    assert report.features[0].t_no_s == pytest.approx(5.0, abs=1e-9)
    assert report.probability == 1.0
    assert report.level is WarningLevel.DANGER
    assert report.action.immediate


def test_detect_overall_is_max_over_features():
    a = make_timeline("a", "AP", [("P", "B3", 100.0, 104.0), ("C", "CN", 300.0, 310.0)])
    b = make_timeline("b", "R1", [("C1", "B3", 106.0, 108.0), ("C6", "CN", 500.0, 520.0)])
    features = [_cross_feature("B3"), _cross_feature("CN")]
    report = detect(a, b, features)
    per_feature = [fa.probability for fa in report.features]
    assert report.probability == max(per_feature)
    assert per_feature[0] == pytest.approx(0.8, abs=1e-9)
    assert per_feature[1] == 0.0


def test_detect_symmetric_pairwise():
    a = make_timeline("a", "AP", [("P", "B3", 100.0, 104.0)])
    b = make_timeline("b", "R1", [("C1", "B3", 106.0, 108.0)])
    r1 = detect(a, b, [_cross_feature()])
    r2 = detect(b, a, [_cross_feature()])
    assert r1.probability == r2.probability
    assert r1.level is r2.level


def test_detect_start_node_is_point_arrival():
    # b's route starts at B3: its arrival there is the point [start, start]
    a = make_timeline("a", "AP", [("P", "B3", 100.0, 104.0)])
    b = make_timeline("b", "B3", [("B-4", "B4", 220.0, 260.0)], start_epoch=102.0)
    report = detect(a, b, [_cross_feature()])
    assert (report.features[0].gap.t_min_s, report.features[0].gap.t_max_s) == (0.0, 2.0)
    assert report.probability == 1.0


def test_detect_missing_feature_rejected():
    a = make_timeline("a", "AP", [("P", "B3", 100.0, 104.0)])
    b = make_timeline("b", "B1", [("B-1", "B2", 300.0, 320.0)])
    with pytest.raises(ValueError):
        detect(a, b, [_cross_feature("CN")])


# --- probability invariant: p = 1 iff threshold clears the whole gap ---


@settings(max_examples=300)
@given(
    t_min=st.floats(0, 50),
    width=st.floats(0, 50),
    t_no=st.floats(0, 120),
)
def test_probability_one_iff_threshold_above_gap(t_min, width, t_no):
    gap = TimeInterval(t_min, t_min + width)
    p = conflict_probability(gap, t_no)
    if t_no > gap.hi_s:
        assert p == 1.0
    if t_no < gap.lo_s:
        assert p == 0.0
    assert 0.0 <= p <= 1.0


# --- integration through evaluate_pair and the sweep ---


def test_evaluate_pair_head_on_uses_tighter_threshold(airport, flat_calibration):
    a = make_command("a", ["B-2", "B-4", "B-6"], start=SATURDAY_10)
    b = make_command("b", ["B-8", "B-6", "B-4"], start=SATURDAY_10)
    report = evaluate_pair(a, b, flat_calibration, airport)
    assert {fa.gap.relation for fa in report.features} == {Relation.CONFRONTATION}
    assert all(fa.t_no_s == pytest.approx(5.0, abs=1e-9) for fa in report.features)


def test_evaluate_pair_cross_uses_wider_threshold(airport, flat_calibration):
    a = make_command("a", ["P", "C"], start=SATURDAY_10)
    b = make_command("b", ["C1", "B-4"], start=SATURDAY_10)
    report = evaluate_pair(a, b, flat_calibration, airport)
    assert [fa.gap.relation for fa in report.features] == [Relation.CROSS]
    assert report.features[0].t_no_s == pytest.approx(6.8, abs=1e-9)


def test_offset_sweep_shape_and_zero_offset(airport, flat_calibration):
    a = make_command("a", ["P", "C"], start=SATURDAY_10)
    b = make_command("b", ["C1", "B-4"], start=SATURDAY_10)
    rows = offset_sweep(a, b, flat_calibration, airport)
    assert len(rows) == 21
    assert [row.offset_s for row in rows] == [float(v) for v in range(0, 101, 5)]
    direct = evaluate_pair(a, b, flat_calibration, airport)
    assert rows[0].probability == direct.probability
    assert rows[0].level is direct.level
    csv_text = sweep_to_csv(rows)
    assert csv_text.splitlines()[0] == "offset_s,probability,level"
    assert len(csv_text.strip().splitlines()) == 22


def test_sweep_levels_match_classifier(airport, flat_calibration):
    a = make_command("a", ["P", "C"], start=SATURDAY_10)
    b = make_command("b", ["C1", "B-4"], start=SATURDAY_10)
    for row in offset_sweep(a, b, flat_calibration, airport):
        assert row.level is classify(row.probability)


# --- Monte-Carlo oracle bracketing for a straddling (peaked) scenario ---


def test_mc_argmax_brackets_index_argmax(airport, flat_calibration):
    """Uniform-sampling risk peaks where the probability index peaks."""
    rng = np.random.default_rng(2024)
    a = make_command("a", ["P", "C"], start=SATURDAY_10)
    b = make_command("b", ["C1", "B-4"], start=SATURDAY_10)
    rows = offset_sweep(a, b, flat_calibration, airport)
    probs = [row.probability for row in rows]

    from taxiwarn.deduction import deduce_timeline

    timeline_a = deduce_timeline(a, flat_calibration, airport)
    timeline_b = deduce_timeline(b, flat_calibration, airport)
    arrival_a = timeline_a.arrival_at_node("B3")
    arrival_b = timeline_b.arrival_at_node("B3")
    n = 10_000
    u_a = rng.uniform(arrival_a.lo_s, arrival_a.hi_s, size=n)
    u_b = rng.uniform(arrival_b.lo_s, arrival_b.hi_s, size=n)
    t_no = DEFAULT_THRESHOLDS.t_no2_s
    mc = [float(np.mean(np.abs(u_a - (u_b + off)) <= t_no)) for off in range(0, 101, 5)]

    best_index = int(np.argmax(probs))
    mc_at_best = mc[best_index]
    mc_max = max(mc)
    sigma = np.sqrt(mc_max * (1 - mc_max) / n) + 1e-9
    assert mc_at_best >= mc_max - 4 * sigma
