"""Pre-taxi deduction of arrival-time intervals along a commanded route.

The travel time over a taxiway of length L with calibrated speed range
[v_lo, v_hi] is the closed interval [L/v_hi, L/v_lo]. Accumulating those
duration intervals from the clearance start time gives, at each segment
completion node, the window in which the aircraft will arrive. The time
band is fixed once, from the start time: a clearance is deduced before any
movement, so mid-route re-banding has nothing to anchor to.

All interval endpoints are absolute UTC epoch seconds; containment is
inclusive at both ends.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime
from typing import Sequence

from .airportmodel import AirportMap, TaxiCommand, walk_nodes
from .calibration import DEFAULT_DAY_WINDOW, CalibrationSet, DayWindow, SpeedInterval, TimeBand, classify_time_band, pearson
from .errors import InvalidCalibrationError
from .timeutil import format_timestamp, to_epoch
from .trackdata import MPS_PER_KNOT


@dataclass(frozen=True)
class TimeInterval:
    """Closed interval of seconds; by context a duration or an absolute window."""

    lo_s: float
    hi_s: float

    def __post_init__(self):
        if self.lo_s > self.hi_s:
            raise ValueError(f"interval lower bound {self.lo_s} exceeds upper bound {self.hi_s}")

    def __add__(self, other: "TimeInterval") -> "TimeInterval":
        return TimeInterval(self.lo_s + other.lo_s, self.hi_s + other.hi_s)

    def shift(self, seconds: float) -> "TimeInterval":
        return TimeInterval(self.lo_s + seconds, self.hi_s + seconds)

    def contains(self, t: float) -> bool:
        return self.lo_s <= t <= self.hi_s

    @property
    def width_s(self) -> float:
        return self.hi_s - self.lo_s

    @property
    def midpoint_s(self) -> float:
        return 0.5 * (self.lo_s + self.hi_s)


def segment_duration(length_m: float, interval: SpeedInterval) -> TimeInterval:
    """Traversal-duration interval [L/v_hi, L/v_lo] with speeds in knots."""
    if interval.v_lo_kn <= 0:
        raise InvalidCalibrationError(
            f"speed interval lower bound must be positive, got {interval.v_lo_kn}"
        )
    v_lo_mps = interval.v_lo_kn * MPS_PER_KNOT
    v_hi_mps = interval.v_hi_kn * MPS_PER_KNOT
    return TimeInterval(length_m / v_hi_mps, length_m / v_lo_mps)


@dataclass(frozen=True)
class TimelineEntry:
    taxiway_id: str
    node_id: str  # segment completion node in route direction
    arrival: TimeInterval  # absolute epoch seconds
    fallback: bool  # True when the band interval was a fallback to the overall one


@dataclass(frozen=True)
class DeducedTimeline:
    command_id: str
    start_time: datetime
    start_node: str
    band: TimeBand
    entries: tuple[TimelineEntry, ...]

    @property
    def start_epoch_s(self) -> float:
        return to_epoch(self.start_time)

    def arrival_at_node(self, node_id: str) -> TimeInterval | None:
        """Arrival window at a walk node; the start node is the point [t_s, t_s]."""
        if node_id == self.start_node:
            t = self.start_epoch_s
            return TimeInterval(t, t)
        for entry in self.entries:
            if entry.node_id == node_id:
                return entry.arrival
        return None

    def arrival_at_segment(self, taxiway_id: str) -> TimeInterval | None:
        """Arrival window at the completion of the given taxiway on this route."""
        for entry in self.entries:
            if entry.taxiway_id == taxiway_id:
                return entry.arrival
        return None

    def to_json_dict(self) -> dict:
        return {
            "command_id": self.command_id,
            "start_time": format_timestamp(self.start_time),
            "start_node": self.start_node,
            "band": self.band.value,
            "entries": [
                {
                    "taxiway_id": entry.taxiway_id,
                    "node": entry.node_id,
                    "lo_s": entry.arrival.lo_s,
                    "hi_s": entry.arrival.hi_s,
                    "fallback": entry.fallback,
                }
                for entry in self.entries
            ],
            "fallbacks": sorted({e.taxiway_id for e in self.entries if e.fallback}),
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "DeducedTimeline":
        from .timeutil import parse_timestamp

        return cls(
            command_id=str(doc["command_id"]),
            start_time=parse_timestamp(doc["start_time"]),
            start_node=str(doc["start_node"]),
            band=TimeBand(doc["band"]),
            entries=tuple(
                TimelineEntry(
                    taxiway_id=str(entry["taxiway_id"]),
                    node_id=str(entry["node"]),
                    arrival=TimeInterval(float(entry["lo_s"]), float(entry["hi_s"])),
                    fallback=bool(entry.get("fallback", False)),
                )
                for entry in doc["entries"]
            ),
        )


def deduce_timeline(
    cmd: TaxiCommand,
    calibration: CalibrationSet,
    airport: AirportMap,
    day_window: DayWindow = DEFAULT_DAY_WINDOW,
) -> DeducedTimeline:
    """Deduce per-node arrival intervals for a validated command.

    Raises UncalibratedSegmentError when a route taxiway has no usable entry.
    """
    band = classify_time_band(cmd.start_time, day_window)
    nodes = walk_nodes(cmd, airport)
    cursor = TimeInterval(to_epoch(cmd.start_time), to_epoch(cmd.start_time))
    entries: list[TimelineEntry] = []
    for i, taxiway_id in enumerate(cmd.route):
        interval, fallback = calibration.interval_for(taxiway_id, band)
        cursor = cursor + segment_duration(airport.segment(taxiway_id).length_m, interval)
        entries.append(
            TimelineEntry(taxiway_id=taxiway_id, node_id=nodes[i + 1], arrival=cursor, fallback=fallback)
        )
    return DeducedTimeline(
        command_id=cmd.command_id,
        start_time=cmd.start_time,
        start_node=nodes[0],
        band=band,
        entries=tuple(entries),
    )


def interval_contains(entry: TimelineEntry | TimeInterval, observed_s: float) -> bool:
    """Inclusive containment of an observed arrival (epoch seconds)."""
    interval = entry.arrival if isinstance(entry, TimelineEntry) else entry
    return interval.contains(observed_s)


@dataclass(frozen=True)
class DeviationReport:
    avg_deviation_pct: float
    correlation: float
    deviations_pct: tuple[float, ...]
    contained: tuple[bool, ...]


def timeline_midpoint_deviation(
    timeline: DeducedTimeline, observed_elapsed_s: Sequence[float]
) -> DeviationReport:
    """Compare interval midpoints against observed arrivals, one per entry.

    Observations are elapsed seconds since the command start. Deviation per
    entry is (midpoint - observed) / observed in percent; the correlation is
    Pearson's r between midpoints and observations.
    """
    if len(observed_elapsed_s) != len(timeline.entries):
        raise ValueError(
            f"expected {len(timeline.entries)} observations, got {len(observed_elapsed_s)}"
        )
    start = timeline.start_epoch_s
    midpoints = [entry.arrival.midpoint_s - start for entry in timeline.entries]
    deviations = tuple(
        100.0 * (mid - obs) / obs for mid, obs in zip(midpoints, observed_elapsed_s)
    )
    contained = tuple(
        entry.arrival.contains(start + obs)
        for entry, obs in zip(timeline.entries, observed_elapsed_s)
    )
    correlation = pearson(midpoints, list(observed_elapsed_s))
    return DeviationReport(
        avg_deviation_pct=sum(deviations) / len(deviations),
        correlation=correlation,
        deviations_pct=deviations,
        contained=contained,
    )
