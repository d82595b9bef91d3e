"""Per-taxiway speed-interval calibration and constraint statistics.

Historical speed populations per taxiway are summarized two ways:

* a 3-sigma ("Pauta") interval over all of a taxiway's fixes, and
* four time-banded intervals (weekday/weekend x day/night), since date and
  daylight are the two factors with a real effect on taxi speed; fleet type
  and taxiway length are weakly or un-correlated, and the constraint report
  re-derives that evidence for every calibration run.

Bands with too few samples fall back to the taxiway's overall interval,
flagged so downstream consumers can see which numbers are defaults.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from statistics import median
from typing import Iterable, Sequence

import numpy as np

from .airportmodel import AirportMap
from .errors import (
    DegenerateDataError,
    InsufficientDataError,
    UncalibratedSegmentError,
    UndefinedCorrelationError,
)
from .timeutil import format_timestamp, to_utc
from .trackdata import MAX_TAXI_SPEED_KN, AircraftInfo, SegmentFix

SPEED_FLOOR_KN = 0.5  # keeps interval division bounded; waiting is data, zero is not usable
DEFAULT_MIN_SAMPLES = 30
KS_MIN_SAMPLES = 8


class TimeBand(str, Enum):
    WEEKDAY_DAY = "wdd"
    WEEKDAY_NIGHT = "wdn"
    WEEKEND_DAY = "wed"
    WEEKEND_NIGHT = "wen"


BAND_ORDER = (TimeBand.WEEKDAY_DAY, TimeBand.WEEKDAY_NIGHT, TimeBand.WEEKEND_DAY, TimeBand.WEEKEND_NIGHT)


@dataclass(frozen=True)
class DayWindow:
    """Half-open daytime window [start, end) in minutes since midnight."""

    start_minute: int = 6 * 60
    end_minute: int = 18 * 60

    @classmethod
    def parse(cls, text: str) -> "DayWindow":
        """Parse 'HH:MM-HH:MM'."""
        try:
            start_raw, end_raw = text.split("-")
            sh, sm = (int(v) for v in start_raw.split(":"))
            eh, em = (int(v) for v in end_raw.split(":"))
        except ValueError as exc:
            raise ValueError(f"bad day window {text!r}, expected HH:MM-HH:MM") from exc
        return cls(start_minute=sh * 60 + sm, end_minute=eh * 60 + em)

    def contains(self, minute_of_day: int) -> bool:
        return self.start_minute <= minute_of_day < self.end_minute

    def __str__(self) -> str:
        return "{:02d}:{:02d}-{:02d}:{:02d}".format(
            self.start_minute // 60, self.start_minute % 60, self.end_minute // 60, self.end_minute % 60
        )


DEFAULT_DAY_WINDOW = DayWindow()


def classify_time_band(timestamp: datetime, day_window: DayWindow = DEFAULT_DAY_WINDOW) -> TimeBand:
    """Band for a timestamp: Saturday/Sunday are weekend, daytime per window."""
    ts = to_utc(timestamp)
    weekend = ts.weekday() >= 5
    day = day_window.contains(ts.hour * 60 + ts.minute)
    if weekend:
        return TimeBand.WEEKEND_DAY if day else TimeBand.WEEKEND_NIGHT
    return TimeBand.WEEKDAY_DAY if day else TimeBand.WEEKDAY_NIGHT


@dataclass(frozen=True)
class SpeedInterval:
    """Calibrated taxi speed range on one taxiway, in knots."""

    v_lo_kn: float
    v_hi_kn: float
    sample_count: int
    mean_kn: float
    stddev_kn: float

    def __post_init__(self):
        if not 0 < self.v_lo_kn <= self.v_hi_kn:
            raise ValueError(f"bad speed interval [{self.v_lo_kn}, {self.v_hi_kn}]")
        if self.v_hi_kn > MAX_TAXI_SPEED_KN + 1e-9:
            raise ValueError(f"speed interval upper bound {self.v_hi_kn} exceeds the taxi cap")

    def to_json_dict(self) -> dict:
        return {
            "lo": self.v_lo_kn,
            "hi": self.v_hi_kn,
            "mean": self.mean_kn,
            "std": self.stddev_kn,
            "n": self.sample_count,
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "SpeedInterval":
        return cls(
            v_lo_kn=float(doc["lo"]),
            v_hi_kn=float(doc["hi"]),
            sample_count=int(doc["n"]),
            mean_kn=float(doc["mean"]),
            stddev_kn=float(doc["std"]),
        )


def pauta_interval(
    samples: Sequence[float],
    min_samples: int = DEFAULT_MIN_SAMPLES,
    floor_kn: float = SPEED_FLOOR_KN,
    cap_kn: float = MAX_TAXI_SPEED_KN,
) -> SpeedInterval:
    """3-sigma interval [max(floor, mu-3s), min(cap, mu+3s)] over the samples.

    mu and s are the sample mean and population standard deviation. The floor
    keeps later travel-time division bounded even though stopped traffic is
    part of the population.
    """
    n = len(samples)
    if n < min_samples:
        raise InsufficientDataError(f"need at least {min_samples} samples, got {n}")
    arr = np.sort(np.asarray(samples, dtype=float))
    mu = float(arr.mean())
    sigma = float(arr.std())
    if sigma == 0.0:
        raise DegenerateDataError("all samples identical; spread is zero")
    lo = max(floor_kn, mu - 3.0 * sigma)
    hi = min(cap_kn, mu + 3.0 * sigma)
    return SpeedInterval(v_lo_kn=lo, v_hi_kn=hi, sample_count=n, mean_kn=mu, stddev_kn=sigma)


@dataclass(frozen=True)
class KsResult:
    statistic: float
    critical_value: float
    passed: bool
    sample_count: int


def _normal_cdf(x: np.ndarray, mu: float, sigma: float) -> np.ndarray:
    z = (x - mu) / (sigma * math.sqrt(2.0))
    return 0.5 * (1.0 + np.vectorize(math.erf)(z))


def ks_critical_value(alpha: float, n: int) -> float:
    """Asymptotic one-sample K-S critical value c(alpha)/sqrt(n), c(0.05)=1.358."""
    return math.sqrt(-0.5 * math.log(alpha / 2.0)) / math.sqrt(n)


def ks_gaussian_test(samples: Sequence[float], alpha: float = 0.05) -> KsResult:
    """One-sample K-S test of the samples against a Gaussian fitted to them.

    D is the max distance between the empirical CDF and the fitted normal CDF;
    the test passes when D stays under the asymptotic critical value.
    """
    n = len(samples)
    if n < KS_MIN_SAMPLES:
        raise InsufficientDataError(f"need at least {KS_MIN_SAMPLES} samples, got {n}")
    arr = np.sort(np.asarray(samples, dtype=float))
    mu = float(arr.mean())
    sigma = float(arr.std())
    if sigma == 0.0:
        raise DegenerateDataError("all samples identical; cannot fit a Gaussian")
    cdf = _normal_cdf(arr, mu, sigma)
    i = np.arange(1, n + 1, dtype=float)
    d_plus = float(np.max(i / n - cdf))
    d_minus = float(np.max(cdf - (i - 1.0) / n))
    statistic = max(d_plus, d_minus)
    critical = ks_critical_value(alpha, n)
    return KsResult(statistic=statistic, critical_value=critical, passed=statistic < critical, sample_count=n)


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Pearson correlation coefficient of two equal-length series."""
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    if len(x) < 2:
        raise ValueError("need at least two points")
    ax = np.asarray(x, dtype=float)
    ay = np.asarray(y, dtype=float)
    dx = ax - ax.mean()
    dy = ay - ay.mean()
    sx = math.sqrt(float(np.sum(dx * dx)))
    sy = math.sqrt(float(np.sum(dy * dy)))
    if sx == 0.0 or sy == 0.0:
        raise UndefinedCorrelationError("correlation undefined for a constant series")
    return float(np.sum(dx * dy)) / (sx * sy)


# --- calibration set ---


@dataclass(frozen=True)
class CalibrationConfig:
    min_samples: int = DEFAULT_MIN_SAMPLES
    floor_kn: float = SPEED_FLOOR_KN
    cap_kn: float = MAX_TAXI_SPEED_KN
    day_window: DayWindow = DEFAULT_DAY_WINDOW


@dataclass(frozen=True)
class CalibrationEntry:
    """One taxiway's intervals. `fallback_bands` lists bands that reuse the
    overall interval; `uncalibrated` means no interval could be built at all."""

    taxiway_id: str
    pauta: SpeedInterval | None
    bands: dict[TimeBand, SpeedInterval]
    fallback_bands: frozenset[TimeBand]
    uncalibrated: bool = False


@dataclass(frozen=True)
class CalibrationSet:
    entries: dict[str, CalibrationEntry]
    metadata: dict

    def interval_for(self, taxiway_id: str, band: TimeBand) -> tuple[SpeedInterval, bool]:
        """Interval to use for a taxiway in a band, plus whether it is a fallback."""
        entry = self.entries.get(taxiway_id)
        if entry is None or entry.uncalibrated or band not in entry.bands:
            raise UncalibratedSegmentError(taxiway_id)
        return entry.bands[band], band in entry.fallback_bands

    def to_json_dict(self) -> dict:
        doc: dict = {"taxiways": {}, "metadata": dict(self.metadata)}
        for taxiway_id in sorted(self.entries):
            entry = self.entries[taxiway_id]
            doc["taxiways"][taxiway_id] = {
                "uncalibrated": entry.uncalibrated,
                "pauta": entry.pauta.to_json_dict() if entry.pauta else None,
                "bands": {
                    band.value: entry.bands[band].to_json_dict() for band in BAND_ORDER if band in entry.bands
                },
                "fallback_bands": sorted(b.value for b in entry.fallback_bands),
            }
        return doc

    @classmethod
    def from_json_dict(cls, doc: dict) -> "CalibrationSet":
        entries: dict[str, CalibrationEntry] = {}
        for taxiway_id, body in doc["taxiways"].items():
            pauta = SpeedInterval.from_json_dict(body["pauta"]) if body.get("pauta") else None
            bands = {
                TimeBand(code): SpeedInterval.from_json_dict(sub)
                for code, sub in body.get("bands", {}).items()
            }
            entries[taxiway_id] = CalibrationEntry(
                taxiway_id=taxiway_id,
                pauta=pauta,
                bands=bands,
                fallback_bands=frozenset(TimeBand(code) for code in body.get("fallback_bands", [])),
                uncalibrated=bool(body.get("uncalibrated", False)),
            )
        return cls(entries=entries, metadata=dict(doc.get("metadata", {})))


def build_calibration(
    fixes: Iterable[SegmentFix],
    airport: AirportMap,
    config: CalibrationConfig = CalibrationConfig(),
) -> CalibrationSet:
    """Build per-taxiway overall and banded intervals from speed-filtered fixes.

    Deterministic and order-independent: speed populations are sorted before
    any statistic is taken. Taxiways present in the map but absent from the
    data are kept as uncalibrated entries so coverage is always explicit.
    """
    by_taxiway: dict[str, list[SegmentFix]] = {taxiway_id: [] for taxiway_id in airport.segments}
    min_ts: datetime | None = None
    max_ts: datetime | None = None
    for fix in fixes:
        if fix.taxiway_id in by_taxiway:
            by_taxiway[fix.taxiway_id].append(fix)
            min_ts = fix.timestamp if min_ts is None else min(min_ts, fix.timestamp)
            max_ts = fix.timestamp if max_ts is None else max(max_ts, fix.timestamp)

    entries: dict[str, CalibrationEntry] = {}
    for taxiway_id in sorted(by_taxiway):
        population = by_taxiway[taxiway_id]
        speeds = [fix.ground_speed_kn for fix in population]
        try:
            pauta = pauta_interval(speeds, config.min_samples, config.floor_kn, config.cap_kn)
        except (InsufficientDataError, DegenerateDataError):
            entries[taxiway_id] = CalibrationEntry(
                taxiway_id=taxiway_id,
                pauta=None,
                bands={},
                fallback_bands=frozenset(),
                uncalibrated=True,
            )
            continue

        bands: dict[TimeBand, SpeedInterval] = {}
        fallbacks: set[TimeBand] = set()
        for band in BAND_ORDER:
            band_speeds = [
                fix.ground_speed_kn
                for fix in population
                if classify_time_band(fix.timestamp, config.day_window) is band
            ]
            try:
                bands[band] = pauta_interval(band_speeds, config.min_samples, config.floor_kn, config.cap_kn)
            except (InsufficientDataError, DegenerateDataError):
                bands[band] = pauta
                fallbacks.add(band)
        entries[taxiway_id] = CalibrationEntry(
            taxiway_id=taxiway_id,
            pauta=pauta,
            bands=bands,
            fallback_bands=frozenset(fallbacks),
        )

    # Build stamp is derived from the data window, keeping rebuilds on the
    # same inputs byte-identical.
    metadata = {
        "source_window": [format_timestamp(min_ts), format_timestamp(max_ts)] if min_ts else None,
        "day_window": str(config.day_window),
        "min_samples": config.min_samples,
        "built_at": format_timestamp(max_ts) if max_ts else None,
    }
    return CalibrationSet(entries=entries, metadata=metadata)


# --- constraint analysis report ---

SEVEN_PERIODS = ((0, 6), (6, 9), (9, 12), (12, 15), (15, 18), (18, 21), (21, 24))


@dataclass
class ConstraintReport:
    """Correlation evidence behind the banding choice, recomputed per dataset."""

    length_rows: list[dict]
    length_speed_r: float | None
    type_rows: list[dict]  # per taxiway: correlations of fleet parameters vs mean speed
    type_summary: dict
    weekday_weekend_rows: list[dict]
    weekday_weekend_r: float | None
    period_labels: list[str]
    period_rows: list[dict]
    warnings: list[str] = field(default_factory=list)

    def to_markdown(self) -> str:
        lines: list[str] = ["# Taxi speed constraint report", ""]
        lines.append("## Taxiway length vs mean speed")
        lines.append("")
        lines.append("| taxiway | length_m | mean_speed_kn | n |")
        lines.append("|---|---|---|---|")
        for row in self.length_rows:
            lines.append(
                f"| {row['taxiway_id']} | {row['length_m']:.2f} | {row['mean_speed_kn']:.2f} | {row['n']} |"
            )
        lines.append("")
        lines.append(f"Pearson r (length vs mean speed): {_fmt_r(self.length_speed_r)}")
        lines.append("")
        lines.append("## Fleet parameters vs mean speed, per taxiway")
        lines.append("")
        lines.append("| taxiway | r_mtow | r_empty | r_thrust | types |")
        lines.append("|---|---|---|---|---|")
        for row in self.type_rows:
            lines.append(
                f"| {row['taxiway_id']} | {_fmt_r(row['mtow_r'])} | {_fmt_r(row['empty_r'])} "
                f"| {_fmt_r(row['thrust_r'])} | {row['n_types']} |"
            )
        lines.append(
            f"| average | {_fmt_r(self.type_summary.get('mtow_avg'))} "
            f"| {_fmt_r(self.type_summary.get('empty_avg'))} "
            f"| {_fmt_r(self.type_summary.get('thrust_avg'))} | |"
        )
        lines.append(
            f"| median | {_fmt_r(self.type_summary.get('mtow_med'))} "
            f"| {_fmt_r(self.type_summary.get('empty_med'))} "
            f"| {_fmt_r(self.type_summary.get('thrust_med'))} | |"
        )
        lines.append("")
        lines.append("## Weekday vs weekend mean speed")
        lines.append("")
        lines.append("| taxiway | weekday_kn | weekend_kn |")
        lines.append("|---|---|---|")
        for row in self.weekday_weekend_rows:
            lines.append(
                f"| {row['taxiway_id']} | {_fmt_speed(row['weekday_mean_kn'])} | {_fmt_speed(row['weekend_mean_kn'])} |"
            )
        lines.append("")
        lines.append(f"Pearson r (weekday vs weekend means): {_fmt_r(self.weekday_weekend_r)}")
        lines.append("")
        lines.append("## Mean speed by period of day")
        lines.append("")
        lines.append("| taxiway | " + " | ".join(self.period_labels) + " |")
        lines.append("|---" * (len(self.period_labels) + 1) + "|")
        for row in self.period_rows:
            cells = " | ".join(_fmt_speed(v) for v in row["means_kn"])
            lines.append(f"| {row['taxiway_id']} | {cells} |")
        if self.warnings:
            lines.append("")
            lines.append("## Warnings")
            lines.append("")
            for warning in self.warnings:
                lines.append(f"- {warning}")
        lines.append("")
        return "\n".join(lines)

    def to_csv_tables(self) -> dict[str, str]:
        tables: dict[str, str] = {}
        tables["length_speed"] = "\n".join(
            ["taxiway_id,length_m,mean_speed_kn,n"]
            + [f"{r['taxiway_id']},{r['length_m']},{r['mean_speed_kn']},{r['n']}" for r in self.length_rows]
        )
        tables["type_speed"] = "\n".join(
            ["taxiway_id,mtow_r,empty_r,thrust_r,n_types"]
            + [
                f"{r['taxiway_id']},{_csv_val(r['mtow_r'])},{_csv_val(r['empty_r'])},{_csv_val(r['thrust_r'])},{r['n_types']}"
                for r in self.type_rows
            ]
        )
        tables["weekday_weekend"] = "\n".join(
            ["taxiway_id,weekday_mean_kn,weekend_mean_kn"]
            + [
                f"{r['taxiway_id']},{_csv_val(r['weekday_mean_kn'])},{_csv_val(r['weekend_mean_kn'])}"
                for r in self.weekday_weekend_rows
            ]
        )
        tables["period_means"] = "\n".join(
            ["taxiway_id," + ",".join(self.period_labels)]
            + [f"{r['taxiway_id']}," + ",".join(_csv_val(v) for v in r["means_kn"]) for r in self.period_rows]
        )
        return tables


def _fmt_r(value: float | None) -> str:
    return "n/a" if value is None else f"{value:.2f}"


def _fmt_speed(value: float | None) -> str:
    return "n/a" if value is None else f"{value:.2f}"


def _csv_val(value: float | None) -> str:
    return "" if value is None else repr(float(value))


def _safe_pearson(x: Sequence[float], y: Sequence[float], warnings: list[str], label: str) -> float | None:
    try:
        return pearson(x, y)
    except (UndefinedCorrelationError, ValueError) as exc:
        warnings.append(f"{label}: {exc}")
        return None


def constraint_report(
    fixes: Iterable[SegmentFix],
    airport: AirportMap,
    aircraft_table: Iterable[AircraftInfo],
    fleet_params: dict[str, dict] | None = None,
    day_window: DayWindow = DEFAULT_DAY_WINDOW,
) -> ConstraintReport:
    """Compute the correlation tables that justify (or would falsify) banding."""
    if fleet_params is None:
        fleet_params = load_fleet_params()
    warnings: list[str] = []
    type_by_icao = {info.icao24: info.aircraft_type for info in aircraft_table}

    by_taxiway: dict[str, list[SegmentFix]] = {}
    for fix in fixes:
        by_taxiway.setdefault(fix.taxiway_id, []).append(fix)

    # (a) taxiway length vs mean speed
    length_rows = []
    for taxiway_id in sorted(by_taxiway):
        if taxiway_id not in airport.segments:
            continue
        speeds = [f.ground_speed_kn for f in by_taxiway[taxiway_id]]
        length_rows.append(
            {
                "taxiway_id": taxiway_id,
                "length_m": airport.segment(taxiway_id).length_m,
                "mean_speed_kn": float(np.mean(speeds)),
                "n": len(speeds),
            }
        )
    length_r = (
        _safe_pearson(
            [r["length_m"] for r in length_rows],
            [r["mean_speed_kn"] for r in length_rows],
            warnings,
            "length vs speed",
        )
        if len(length_rows) >= 2
        else None
    )

    # (b) fleet parameters vs mean speed, per taxiway across types
    type_rows = []
    for taxiway_id in sorted(by_taxiway):
        speed_by_type: dict[str, list[float]] = {}
        for fix in by_taxiway[taxiway_id]:
            aircraft_type = type_by_icao.get(fix.icao24)
            if aircraft_type and aircraft_type in fleet_params:
                speed_by_type.setdefault(aircraft_type, []).append(fix.ground_speed_kn)
            elif aircraft_type and aircraft_type not in fleet_params:
                pass  # counted below per taxiway
        skipped = {
            type_by_icao.get(f.icao24)
            for f in by_taxiway[taxiway_id]
            if type_by_icao.get(f.icao24) not in fleet_params
        }
        for missing in sorted(t for t in skipped if t):
            warnings.append(f"{taxiway_id}: no fleet parameters for type {missing}; rows skipped")
        if len(speed_by_type) < 2:
            type_rows.append(
                {"taxiway_id": taxiway_id, "mtow_r": None, "empty_r": None, "thrust_r": None, "n_types": len(speed_by_type)}
            )
            continue
        types = sorted(speed_by_type)
        mean_speeds = [float(np.mean(speed_by_type[t])) for t in types]
        row = {"taxiway_id": taxiway_id, "n_types": len(types)}
        for key, param in (("mtow_r", "mtow_kg"), ("empty_r", "empty_kg"), ("thrust_r", "max_thrust_kn")):
            row[key] = _safe_pearson(
                [float(fleet_params[t][param]) for t in types], mean_speeds, warnings, f"{taxiway_id} {param}"
            )
        type_rows.append(row)

    type_summary = {}
    for key, prefix in (("mtow_r", "mtow"), ("empty_r", "empty"), ("thrust_r", "thrust")):
        values = [r[key] for r in type_rows if r[key] is not None]
        type_summary[f"{prefix}_avg"] = float(np.mean(values)) if values else None
        type_summary[f"{prefix}_med"] = float(median(values)) if values else None

    # (c) weekday vs weekend mean speed per taxiway
    ww_rows = []
    for taxiway_id in sorted(by_taxiway):
        weekday = [f.ground_speed_kn for f in by_taxiway[taxiway_id] if to_utc(f.timestamp).weekday() < 5]
        weekend = [f.ground_speed_kn for f in by_taxiway[taxiway_id] if to_utc(f.timestamp).weekday() >= 5]
        ww_rows.append(
            {
                "taxiway_id": taxiway_id,
                "weekday_mean_kn": float(np.mean(weekday)) if weekday else None,
                "weekend_mean_kn": float(np.mean(weekend)) if weekend else None,
            }
        )
    paired = [(r["weekday_mean_kn"], r["weekend_mean_kn"]) for r in ww_rows if r["weekday_mean_kn"] is not None and r["weekend_mean_kn"] is not None]
    ww_r = (
        _safe_pearson([p[0] for p in paired], [p[1] for p in paired], warnings, "weekday vs weekend")
        if len(paired) >= 2
        else None
    )

    # (d) seven-period mean speeds
    period_labels = [f"{start:02d}:00-{end:02d}:00" for start, end in SEVEN_PERIODS]
    period_rows = []
    for taxiway_id in sorted(by_taxiway):
        means: list[float | None] = []
        for start, end in SEVEN_PERIODS:
            bucket = [
                f.ground_speed_kn
                for f in by_taxiway[taxiway_id]
                if start <= to_utc(f.timestamp).hour < end
            ]
            means.append(float(np.mean(bucket)) if bucket else None)
        period_rows.append({"taxiway_id": taxiway_id, "means_kn": means})

    return ConstraintReport(
        length_rows=length_rows,
        length_speed_r=length_r,
        type_rows=type_rows,
        type_summary=type_summary,
        weekday_weekend_rows=ww_rows,
        weekday_weekend_r=ww_r,
        period_labels=period_labels,
        period_rows=period_rows,
        warnings=warnings,
    )


def load_fleet_params(source: str | None = None) -> dict[str, dict]:
    """Bundled fleet parameter table (MTOW, empty weight, max thrust) keyed by type."""
    import json
    from importlib import resources

    if source is not None:
        with open(source, encoding="utf-8") as fh:
            return json.load(fh)
    with resources.files("taxiwarn.data").joinpath("fleet.json").open(encoding="utf-8") as fh:
        return json.load(fh)
