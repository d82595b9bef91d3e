"""Surface-track ingestion and cleaning.

Input is a decoded, SBS/BaseStation-flavoured CSV with one fix per line
(`icao24,timestamp_iso8601,lat_deg,lon_deg,alt_m,gs_kn,heading_deg`), i.e.
fields already extracted from transponder messages. Bit-level demodulation
is out of scope; this module starts where a receiver's decoder ends.

Cleaning follows the operational speed rule: fixes claiming more than the
surface speed cap (50 km/h) are positioning glitches and are removed,
while very low and zero speeds are genuine taxi-waiting and are kept.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import Iterable, Iterator

from .airportmodel import AirportMap, point_in_polygon
from .geo import GeodeticPosition
from .timeutil import format_timestamp, parse_timestamp

# Unit conventions: speeds cross the boundary in knots, rules are in km/h.
KMH_PER_KNOT = 1.852
MPS_PER_KNOT = 1.852 / 3.6
MAX_TAXI_SPEED_KMH = 50.0
MAX_TAXI_SPEED_KN = MAX_TAXI_SPEED_KMH / KMH_PER_KNOT  # 26.9978...

TRACK_CSV_HEADER = "icao24,timestamp,lat_deg,lon_deg,alt_m,gs_kn,heading_deg"

_ICAO24_RE = re.compile(r"^[0-9a-fA-F]{6}$")


@dataclass(frozen=True)
class TrackRecord:
    """One decoded surface position report."""

    icao24: str
    timestamp: datetime
    position: GeodeticPosition
    ground_speed_kn: float
    heading_deg: float


@dataclass(frozen=True)
class RejectedLine:
    line_no: int
    reason: str


@dataclass(frozen=True)
class AircraftInfo:
    icao24: str
    airline: str
    aircraft_type: str
    registration: str


@dataclass(frozen=True)
class SegmentFix:
    """A track record attributed to one taxiway via its geofence."""

    taxiway_id: str
    timestamp: datetime
    ground_speed_kn: float
    icao24: str


def parse_track_file(lines: Iterable[str]) -> tuple[list[TrackRecord], list[RejectedLine]]:
    """Parse CSV lines into track records; malformed lines become rejections.

    Blank lines and a leading header row are skipped silently; every other
    unparseable line is recorded with a reason, never dropped.
    """
    records: list[TrackRecord] = []
    rejected: list[RejectedLine] = []
    for line_no, line in enumerate(lines, start=1):
        text = line.strip()
        if not text:
            continue
        if text.lower().startswith("icao24,"):
            continue
        parsed = _parse_line(text)
        if isinstance(parsed, str):
            rejected.append(RejectedLine(line_no=line_no, reason=parsed))
        else:
            records.append(parsed)
    return records, rejected


def _parse_line(text: str) -> TrackRecord | str:
    fields = [f.strip() for f in text.split(",")]
    if len(fields) != 7:
        return "missing-field" if len(fields) < 7 else "extra-field"
    icao24, ts_raw, lat_raw, lon_raw, alt_raw, gs_raw, hdg_raw = fields
    if not _ICAO24_RE.match(icao24):
        return "invalid-icao24"
    try:
        ts = parse_timestamp(ts_raw)
    except ValueError:
        return "bad-timestamp"
    try:
        lat, lon, alt = float(lat_raw), float(lon_raw), float(alt_raw)
        gs, hdg = float(gs_raw), float(hdg_raw)
    except ValueError:
        return "bad-number"
    if not (-90.0 <= lat <= 90.0 and -180.0 <= lon <= 180.0):
        return "position-out-of-range"
    if gs < 0:
        return "negative-speed"
    if not 0.0 <= hdg < 360.0:
        return "heading-out-of-range"
    return TrackRecord(
        icao24=icao24.lower(),
        timestamp=ts,
        position=GeodeticPosition(lat, lon, alt),
        ground_speed_kn=gs,
        heading_deg=hdg,
    )


def serialize_track_records(records: Iterable[TrackRecord]) -> Iterator[str]:
    """Render records back to CSV lines (header first); round-trips with the parser."""
    yield TRACK_CSV_HEADER
    for rec in records:
        yield ",".join(
            [
                rec.icao24,
                format_timestamp(rec.timestamp),
                repr(rec.position.latitude_deg),
                repr(rec.position.longitude_deg),
                repr(rec.position.altitude_m),
                repr(rec.ground_speed_kn),
                repr(rec.heading_deg),
            ]
        )


def filter_speed_outliers(
    records: Iterable[TrackRecord], max_taxi_speed_kmh: float = MAX_TAXI_SPEED_KMH
) -> list[TrackRecord]:
    """Drop fixes whose speed exceeds the taxi cap; keep slow and stopped traffic.

    Over-cap speeds on a taxiway are positioning artifacts. Idempotent.
    """
    cap_kn = max_taxi_speed_kmh / KMH_PER_KNOT
    return [rec for rec in records if rec.ground_speed_kn <= cap_kn]


def assign_to_segments(
    records: Iterable[TrackRecord], airport: AirportMap
) -> tuple[list[SegmentFix], int]:
    """Attribute each record to the taxiway whose geofence contains it.

    Geofences are validated as pairwise non-overlapping at map load, so a fix
    matches at most one. Returns the fixes plus the count of records that fell
    outside every geofence.
    """
    fenced = [
        (seg.taxiway_id, list(seg.geofence))
        for seg in sorted(airport.segments.values(), key=lambda s: s.taxiway_id)
        if seg.geofence
    ]
    fixes: list[SegmentFix] = []
    dropped = 0
    for rec in records:
        lat, lon = rec.position.latitude_deg, rec.position.longitude_deg
        for taxiway_id, polygon in fenced:
            if point_in_polygon(lat, lon, polygon):
                fixes.append(
                    SegmentFix(
                        taxiway_id=taxiway_id,
                        timestamp=rec.timestamp,
                        ground_speed_kn=rec.ground_speed_kn,
                        icao24=rec.icao24,
                    )
                )
                break
        else:
            dropped += 1
    return fixes, dropped


def load_registry(source: str | Path | list[dict]) -> dict[str, AircraftInfo]:
    """Load the local icao24 lookup table (JSON array of registry rows)."""
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as fh:
            rows = json.load(fh)
    else:
        rows = source
    registry: dict[str, AircraftInfo] = {}
    for row in rows:
        info = AircraftInfo(
            icao24=str(row["icao24"]).lower(),
            airline=str(row.get("airline", "")),
            aircraft_type=str(row.get("type", "UNKNOWN")),
            registration=str(row.get("registration", "")),
        )
        registry[info.icao24] = info
    return registry


def build_aircraft_table(
    records: Iterable[TrackRecord], registry: dict[str, AircraftInfo]
) -> list[AircraftInfo]:
    """One row per distinct icao24 seen; addresses missing from the registry
    are kept with type UNKNOWN so the table always covers the traffic."""
    seen = sorted({rec.icao24 for rec in records})
    table: list[AircraftInfo] = []
    for icao24 in seen:
        info = registry.get(icao24)
        if info is None:
            info = AircraftInfo(icao24=icao24, airline="", aircraft_type="UNKNOWN", registration="")
        table.append(info)
    return table
