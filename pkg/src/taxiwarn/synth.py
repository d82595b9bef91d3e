"""Synthetic surface-track generation.

Real decoded track archives are airport property and cannot ship with the
repo, so tests and demos run on generated data: per taxiway and time band,
speeds are drawn from a configured Gaussian, positions are sampled inside
the taxiway's geofence, and timestamps are placed inside the band within a
fixed anchor week. Everything is driven by one seeded generator, so a given
(profile, seed) pair reproduces byte-identical output.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from pathlib import Path

import numpy as np

from .airportmodel import AirportMap, TaxiCommand
from .calibration import BAND_ORDER, DEFAULT_DAY_WINDOW, DayWindow, TimeBand, classify_time_band
from .geo import GeodeticPosition
from .trackdata import MPS_PER_KNOT, TrackRecord

# Monday of the anchor week used for generated timestamps.
ANCHOR_MONDAY = datetime(2024, 3, 4, tzinfo=timezone.utc)

DEFAULT_ICAO24S = tuple(f"7802{i:02x}" for i in range(12))


@dataclass(frozen=True)
class BandProfile:
    mean_kn: float
    std_kn: float


@dataclass(frozen=True)
class SpeedProfile:
    """Gaussian speed parameters per band, with per-taxiway overrides."""

    default: dict[TimeBand, BandProfile]
    per_taxiway: dict[str, dict[TimeBand, BandProfile]] = field(default_factory=dict)

    def band(self, taxiway_id: str, band: TimeBand) -> BandProfile:
        override = self.per_taxiway.get(taxiway_id, {})
        return override.get(band, self.default[band])


def default_profile() -> SpeedProfile:
    """Plausible band means: a little faster on weekends, slower at night."""
    return SpeedProfile(
        default={
            TimeBand.WEEKDAY_DAY: BandProfile(12.5, 1.8),
            TimeBand.WEEKDAY_NIGHT: BandProfile(9.5, 1.5),
            TimeBand.WEEKEND_DAY: BandProfile(14.0, 1.8),
            TimeBand.WEEKEND_NIGHT: BandProfile(10.5, 1.5),
        }
    )


def load_profile(source: str | Path | dict) -> SpeedProfile:
    """Load a profile JSON: {default: {band: {mean_kn, std_kn}}, taxiways: {...}}."""
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as fh:
            doc = json.load(fh)
    else:
        doc = source

    def bands(body: dict) -> dict[TimeBand, BandProfile]:
        return {
            TimeBand(code): BandProfile(float(sub["mean_kn"]), float(sub["std_kn"]))
            for code, sub in body.items()
        }

    base = default_profile().default
    base.update(bands(doc.get("default", {})))
    return SpeedProfile(
        default=base,
        per_taxiway={taxiway: bands(body) for taxiway, body in doc.get("taxiways", {}).items()},
    )


def _sample_band_timestamp(
    rng: np.random.Generator, band: TimeBand, day_window: DayWindow
) -> datetime:
    if band in (TimeBand.WEEKEND_DAY, TimeBand.WEEKEND_NIGHT):
        day = int(rng.integers(5, 7))
    else:
        day = int(rng.integers(0, 5))
    window = day_window.end_minute - day_window.start_minute
    if band in (TimeBand.WEEKDAY_DAY, TimeBand.WEEKEND_DAY):
        minute = day_window.start_minute + float(rng.uniform(0, window))
    else:
        u = float(rng.uniform(0, 1440 - window))
        minute = u if u < day_window.start_minute else u + window
    return ANCHOR_MONDAY + timedelta(days=day, minutes=minute)


def _point_in_fence(rng: np.random.Generator, fence: tuple) -> GeodeticPosition:
    # Convex combination of the vertices stays inside a convex polygon.
    weights = rng.random(len(fence))
    weights = weights / weights.sum()
    lat = float(sum(w * v[0] for w, v in zip(weights, fence)))
    lon = float(sum(w * v[1] for w, v in zip(weights, fence)))
    return GeodeticPosition(lat, lon, 5.0)


def _segment_heading_deg(airport: AirportMap, taxiway_id: str) -> float:
    seg = airport.segment(taxiway_id)
    a = airport.nodes[seg.endpoints[0]]
    b = airport.nodes[seg.endpoints[1]]
    east = (b.longitude_deg - a.longitude_deg) * math.cos(math.radians(a.latitude_deg))
    north = b.latitude_deg - a.latitude_deg
    return math.degrees(math.atan2(east, north)) % 360.0


def generate_tracks(
    airport: AirportMap,
    profile: SpeedProfile,
    seed: int,
    fixes_per_band: int = 60,
    icao24s: tuple[str, ...] = DEFAULT_ICAO24S,
    day_window: DayWindow = DEFAULT_DAY_WINDOW,
) -> list[TrackRecord]:
    """Generate fixes for every geofenced taxiway in every band.

    Output is sorted by timestamp; the record stream feeds the normal parse/
    filter/assign pipeline exactly like a real archive would.
    """
    rng = np.random.default_rng(seed)
    records: list[TrackRecord] = []
    for taxiway_id in sorted(airport.segments):
        seg = airport.segment(taxiway_id)
        if not seg.geofence:
            continue
        heading = _segment_heading_deg(airport, taxiway_id)
        for band in BAND_ORDER:
            params = profile.band(taxiway_id, band)
            for _ in range(fixes_per_band):
                speed = max(0.05, float(rng.normal(params.mean_kn, params.std_kn)))
                ts = _sample_band_timestamp(rng, band, day_window)
                records.append(
                    TrackRecord(
                        icao24=str(rng.choice(icao24s)),
                        timestamp=ts,
                        position=_point_in_fence(rng, seg.geofence),
                        ground_speed_kn=speed,
                        heading_deg=heading,
                    )
                )
    records.sort(key=lambda r: (r.timestamp, r.icao24, r.ground_speed_kn))
    return records


def replay_traversal(
    cmd: TaxiCommand,
    profile: SpeedProfile,
    airport: AirportMap,
    rng: np.random.Generator,
    day_window: DayWindow = DEFAULT_DAY_WINDOW,
) -> list[float]:
    """Simulate one actual taxi of the commanded route.

    Draws a traversal speed per segment from the same band distribution the
    calibration saw, and returns cumulative elapsed seconds at each segment
    completion node.
    """
    band = classify_time_band(cmd.start_time, day_window)
    elapsed = 0.0
    arrivals: list[float] = []
    for taxiway_id in cmd.route:
        params = profile.band(taxiway_id, band)
        speed_kn = max(0.05, float(rng.normal(params.mean_kn, params.std_kn)))
        elapsed += airport.segment(taxiway_id).length_m / (speed_kn * MPS_PER_KNOT)
        arrivals.append(elapsed)
    return arrivals
