from __future__ import annotations

from datetime import timezone

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from taxiwarn.calibration import SpeedInterval, TimeBand
from taxiwarn.deduction import (
    TimeInterval,
    deduce_timeline,
    interval_contains,
    segment_duration,
    timeline_midpoint_deviation,
)
from taxiwarn.errors import InvalidCalibrationError, UncalibratedSegmentError
from taxiwarn.synth import default_profile, replay_traversal
from taxiwarn.timeutil import to_epoch
from taxiwarn.trackdata import MPS_PER_KNOT

from conftest import SATURDAY_10, TUESDAY_10, make_command, uniform_calibration

UTC = timezone.utc


def _interval(lo=7.776, hi=15.552) -> SpeedInterval:
    return SpeedInterval(lo, hi, sample_count=50, mean_kn=(lo + hi) / 2, stddev_kn=(hi - lo) / 6)


# --- segment_duration ---


def test_segment_duration_hand_case():
    # 200 m at [7.776, 15.552] kn: close to [25, 50] s (the knots are the
    # rounded equivalents of 4 and 8 m/s).
    duration = segment_duration(200.0, _interval())
    expected_lo = 200.0 / (15.552 * MPS_PER_KNOT)
    expected_hi = 200.0 / (7.776 * MPS_PER_KNOT)
    assert duration.lo_s == pytest.approx(expected_lo, abs=1e-12)
    assert duration.hi_s == pytest.approx(expected_hi, abs=1e-12)
    assert duration.lo_s == pytest.approx(25.0, rel=1e-3)
    assert duration.hi_s == pytest.approx(50.0, rel=1e-3)


def test_segment_duration_point_interval():
    duration = segment_duration(300.0, _interval(10.0, 10.0))
    assert duration.lo_s == duration.hi_s == pytest.approx(300.0 / (10.0 * MPS_PER_KNOT))


def test_segment_duration_zero_length():
    duration = segment_duration(0.0, _interval())
    assert (duration.lo_s, duration.hi_s) == (0.0, 0.0)


def test_segment_duration_rejects_nonpositive_speed():
    bad = SpeedInterval.__new__(SpeedInterval)  # bypass validation to probe the guard
    object.__setattr__(bad, "v_lo_kn", 0.0)
    object.__setattr__(bad, "v_hi_kn", 10.0)
    with pytest.raises(InvalidCalibrationError):
        segment_duration(100.0, bad)


# --- TimeInterval arithmetic ---


def test_interval_add_and_validation():
    assert TimeInterval(1, 2) + TimeInterval(10, 20) == TimeInterval(11, 22)
    with pytest.raises(ValueError):
        TimeInterval(3, 2)


@settings(max_examples=500)
@given(
    bounds=st.lists(
        st.tuples(st.floats(0, 1e4), st.floats(0, 1e4)).map(lambda t: (min(t), max(t))),
        min_size=3,
        max_size=3,
    )
)
def test_interval_addition_associative(bounds):
    a, b, c = (TimeInterval(lo, hi) for lo, hi in bounds)
    left = (a + b) + c
    right = a + (b + c)
    assert left.lo_s == pytest.approx(right.lo_s, abs=1e-9)
    assert left.hi_s == pytest.approx(right.hi_s, abs=1e-9)


@given(
    lo=st.floats(1.0, 20.0),
    width=st.floats(0.0, 10.0),
    widen=st.floats(0.0, 5.0),
    length=st.floats(1.0, 2000.0),
)
def test_widening_speed_interval_never_narrows_duration(lo, width, widen, length):
    hi = min(lo + width, 26.9)
    lo_wide = max(0.5, lo - widen)
    hi_wide = min(26.9, hi + widen)
    base = segment_duration(length, _interval(lo, hi))
    wide = segment_duration(length, _interval(lo_wide, hi_wide))
    assert wide.lo_s <= base.lo_s + 1e-9
    assert wide.hi_s >= base.hi_s - 1e-9


# --- deduce_timeline ---


def test_single_segment_route(airport):
    calibration = uniform_calibration(airport)
    cmd = make_command("one", ["B-1"], start=SATURDAY_10)
    timeline = deduce_timeline(cmd, calibration, airport)
    start = to_epoch(SATURDAY_10)
    duration = segment_duration(200.0, _interval())
    assert len(timeline.entries) == 1
    entry = timeline.entries[0]
    assert entry.node_id == "B2"
    assert entry.arrival.lo_s == pytest.approx(start + duration.lo_s)
    assert entry.arrival.hi_s == pytest.approx(start + duration.hi_s)
    assert entry.arrival.lo_s >= start


def test_two_segment_accumulation(airport):
    calibration = uniform_calibration(airport)
    cmd = make_command("two", ["B-1", "B-2"], start=SATURDAY_10)
    timeline = deduce_timeline(cmd, calibration, airport)
    start = to_epoch(SATURDAY_10)
    d1 = segment_duration(200.0, _interval())
    d2 = segment_duration(545.5, _interval())
    second = timeline.entries[1]
    assert second.node_id == "B3"
    assert second.arrival.lo_s == pytest.approx(start + d1.lo_s + d2.lo_s, abs=1e-6)
    assert second.arrival.hi_s == pytest.approx(start + d1.hi_s + d2.hi_s, abs=1e-6)


def test_band_chosen_once_from_start_time(airport, synthetic_calibration):
    cmd = make_command("wknd", ["P", "C", "C6", "B-8"], start=SATURDAY_10)
    timeline = deduce_timeline(cmd, synthetic_calibration, airport)
    assert timeline.band is TimeBand.WEEKEND_DAY

    cmd2 = make_command("wkdy", ["P", "C", "C6", "B-8"], start=TUESDAY_10)
    assert deduce_timeline(cmd2, synthetic_calibration, airport).band is TimeBand.WEEKDAY_DAY

    # band depends only on the start time, not on the route
    for route in (["B-1"], ["N"], ["C1", "B-4"]):
        assert deduce_timeline(make_command("r", route, start=SATURDAY_10), synthetic_calibration, airport).band is TimeBand.WEEKEND_DAY


def test_uncalibrated_segment_raises_with_name(airport):
    from taxiwarn.calibration import CalibrationSet

    empty = CalibrationSet(entries={}, metadata={})
    with pytest.raises(UncalibratedSegmentError, match="B-1"):
        deduce_timeline(make_command("x", ["B-1"]), empty, airport)


def test_entries_are_nested_monotone(airport, synthetic_calibration):
    cmd = make_command("mono", ["P", "C", "C6", "B-8"], start=TUESDAY_10)
    timeline = deduce_timeline(cmd, synthetic_calibration, airport)
    for earlier, later in zip(timeline.entries, timeline.entries[1:]):
        assert later.arrival.lo_s > earlier.arrival.lo_s
        assert later.arrival.hi_s > earlier.arrival.hi_s
        assert later.arrival.width_s >= earlier.arrival.width_s


def test_point_speed_degenerates_to_uniform_trajectory(airport):
    # a point-valued speed interval is the uniform-speed deduction
    v = 11.664  # knots
    calibration = uniform_calibration(airport, lo_kn=v, hi_kn=v)
    cmd = make_command("pt", ["B-1", "B-2"], start=TUESDAY_10)
    timeline = deduce_timeline(cmd, calibration, airport)
    start = to_epoch(TUESDAY_10)
    expected = start + (200.0 + 545.5) / (v * MPS_PER_KNOT)
    assert timeline.entries[-1].arrival.lo_s == pytest.approx(expected, abs=1e-6)
    assert timeline.entries[-1].arrival.hi_s == pytest.approx(expected, abs=1e-6)


def test_reassociation_of_sums_matches(airport):
    # summing durations in any grouping gives the same final interval
    rng = np.random.default_rng(1)
    durations = [TimeInterval(lo, lo + w) for lo, w in rng.uniform(1, 60, size=(50, 2))]
    forward = TimeInterval(0, 0)
    for d in durations:
        forward = forward + d
    backward = TimeInterval(0, 0)
    for d in reversed(durations):
        backward = d + backward
    assert forward.lo_s == pytest.approx(backward.lo_s, abs=1e-9)
    assert forward.hi_s == pytest.approx(backward.hi_s, abs=1e-9)


# --- containment / deviation ---


def test_interval_contains_boundaries(airport):
    calibration = uniform_calibration(airport)
    timeline = deduce_timeline(make_command("c", ["B-1"]), calibration, airport)
    entry = timeline.entries[0]
    assert interval_contains(entry, entry.arrival.lo_s)
    assert interval_contains(entry, entry.arrival.hi_s)
    assert not interval_contains(entry, entry.arrival.hi_s + 0.001)


def test_replayed_synthetic_track_contained(airport):
    profile = default_profile()
    # wide calibration straight from the profile's own 3-sigma range
    lo = profile.default[TimeBand.WEEKEND_DAY].mean_kn - 3 * profile.default[TimeBand.WEEKEND_DAY].std_kn
    hi = profile.default[TimeBand.WEEKEND_DAY].mean_kn + 3 * profile.default[TimeBand.WEEKEND_DAY].std_kn
    calibration = uniform_calibration(airport, lo_kn=lo, hi_kn=hi)
    cmd = make_command("rp", ["P", "C", "C6", "B-8"], start=SATURDAY_10)
    timeline = deduce_timeline(cmd, calibration, airport)
    rng = np.random.default_rng(12)
    start = to_epoch(SATURDAY_10)
    for _ in range(20):
        observed = replay_traversal(cmd, profile, airport, rng)
        inside = [
            interval_contains(entry, start + obs) for entry, obs in zip(timeline.entries, observed)
        ]
        assert all(inside)


def test_midpoint_deviation_zero_when_observed_at_midpoints(airport):
    calibration = uniform_calibration(airport)
    timeline = deduce_timeline(make_command("m", ["P", "C", "C6"]), calibration, airport)
    start = timeline.start_epoch_s
    mids = [e.arrival.midpoint_s - start for e in timeline.entries]
    report = timeline_midpoint_deviation(timeline, mids)
    assert report.avg_deviation_pct == pytest.approx(0.0, abs=1e-9)
    assert report.correlation == pytest.approx(1.0, abs=1e-12)
    assert all(report.contained)


def test_midpoint_deviation_scaled_observations(airport):
    calibration = uniform_calibration(airport)
    timeline = deduce_timeline(make_command("m", ["P", "C", "C6"]), calibration, airport)
    start = timeline.start_epoch_s
    observed = [(e.arrival.midpoint_s - start) * 1.05 for e in timeline.entries]
    report = timeline_midpoint_deviation(timeline, observed)
    assert report.avg_deviation_pct == pytest.approx(100.0 * (1 / 1.05 - 1), abs=1e-9)
    assert report.correlation == pytest.approx(1.0, abs=1e-12)


def test_midpoint_deviation_length_mismatch(airport):
    calibration = uniform_calibration(airport)
    timeline = deduce_timeline(make_command("m", ["P", "C"]), calibration, airport)
    with pytest.raises(ValueError):
        timeline_midpoint_deviation(timeline, [1.0])


def test_timeline_json_shape(airport, synthetic_calibration):
    timeline = deduce_timeline(make_command("j", ["P", "C"]), synthetic_calibration, airport)
    doc = timeline.to_json_dict()
    assert doc["command_id"] == "j"
    assert doc["band"] in {"wdd", "wdn", "wed", "wen"}
    assert [e["taxiway_id"] for e in doc["entries"]] == ["P", "C"]
    for entry in doc["entries"]:
        assert entry["lo_s"] <= entry["hi_s"]
