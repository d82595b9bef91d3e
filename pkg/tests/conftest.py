from __future__ import annotations

from datetime import datetime, timezone

import pytest

from taxiwarn.airportmodel import AirportMap, TaxiCommand, load_map
from taxiwarn.bundled import bundled_map_path, bundled_registry_path
from taxiwarn.calibration import (
    BAND_ORDER,
    CalibrationConfig,
    CalibrationEntry,
    CalibrationSet,
    SpeedInterval,
    build_calibration,
)
from taxiwarn.deduction import DeducedTimeline, TimeInterval, TimelineEntry
from taxiwarn.synth import default_profile, generate_tracks
from taxiwarn.trackdata import assign_to_segments, filter_speed_outliers, load_registry

# A Saturday morning: weekend-day band, comfortably inside the day window.
SATURDAY_10 = datetime(2024, 3, 9, 10, 0, tzinfo=timezone.utc)
# A Tuesday morning: weekday-day band.
TUESDAY_10 = datetime(2024, 3, 5, 10, 0, tzinfo=timezone.utc)


@pytest.fixture(scope="session")
def airport() -> AirportMap:
    return load_map(bundled_map_path())


@pytest.fixture(scope="session")
def registry():
    return load_registry(bundled_registry_path())


@pytest.fixture(scope="session")
def synthetic_calibration(airport):
    """Calibration built from one seeded synthetic archive via the real pipeline."""
    records = generate_tracks(airport, default_profile(), seed=4242, fixes_per_band=80)
    fixes, _ = assign_to_segments(filter_speed_outliers(records), airport)
    return build_calibration(fixes, airport, CalibrationConfig())


def uniform_calibration(
    airport: AirportMap, lo_kn: float = 7.776, hi_kn: float = 15.552
) -> CalibrationSet:
    """Hand-built calibration giving every taxiway the same interval in every band."""
    mean = 0.5 * (lo_kn + hi_kn)
    std = (hi_kn - lo_kn) / 6.0
    entries = {}
    for taxiway_id in airport.segments:
        interval = SpeedInterval(lo_kn, hi_kn, sample_count=100, mean_kn=mean, stddev_kn=std)
        entries[taxiway_id] = CalibrationEntry(
            taxiway_id=taxiway_id,
            pauta=interval,
            bands={band: interval for band in BAND_ORDER},
            fallback_bands=frozenset(),
        )
    return CalibrationSet(entries=entries, metadata={"day_window": "06:00-18:00", "min_samples": 30})


@pytest.fixture(scope="session")
def flat_calibration(airport) -> CalibrationSet:
    return uniform_calibration(airport)


def make_command(command_id: str, route: list[str], start=SATURDAY_10, icao24: str = "780201") -> TaxiCommand:
    return TaxiCommand.make(command_id, icao24, route, start)


def make_timeline(
    command_id: str,
    start_node: str,
    entries: list[tuple[str, str, float, float]],
    start_epoch: float = 0.0,
    band=BAND_ORDER[0],
) -> DeducedTimeline:
    """Timeline with explicit absolute arrival windows, for pure detection tests."""
    from taxiwarn.timeutil import from_epoch

    return DeducedTimeline(
        command_id=command_id,
        start_time=from_epoch(start_epoch),
        start_node=start_node,
        band=band,
        entries=tuple(
            TimelineEntry(taxiway_id=taxiway, node_id=node, arrival=TimeInterval(lo, hi), fallback=False)
            for taxiway, node, lo, hi in entries
        ),
    )
