"""Pairwise taxi-conflict detection and fuzzy warning levels.

Two cleared aircraft can meet at a shared node (crossing) or on a shared
segment (head-on or in trail). For each such feature the arrival windows
give an interval of possible arrival-time differences; how that gap interval
sits against a minimum safe time threshold yields a conflict probability:

    gap entirely above the threshold  -> 0
    gap entirely below the threshold  -> 1
    otherwise                          -> (t_no - t_min) / (t_max - t_min)

The safe threshold is composed from operating rules, never hardcoded:
closing speed bounds the conflict window (head-on traffic closes at twice
the cap, so its window is half), plus brake-coordination and pilot-reaction
allowances. Probabilities map to four warning levels by maximum fuzzy
membership, with the danger level reserved for certainty.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from datetime import timedelta
from enum import Enum
from typing import Iterable, Sequence

from .airportmodel import AirportMap, Relation, SharedFeature, TaxiCommand, shared_features
from .calibration import DEFAULT_DAY_WINDOW, CalibrationSet, DayWindow
from .deduction import DeducedTimeline, TimeInterval, deduce_timeline

# --- safety thresholds (derived, not pinned) ---


@dataclass(frozen=True)
class SafetyThresholds:
    """Minimum safe time separation, from the surface operating rules."""

    v_max_kmh: float
    l_min_m: float
    t_r_s: float
    t_bc_s: float
    t_c1_s: float
    t_c2_s: float
    t_no1_s: float
    t_no2_s: float

    @classmethod
    def from_rules(
        cls,
        v_max_kmh: float = 50.0,
        l_min_m: float = 50.0,
        t_r_s: float = 2.0,
        t_bc_s: float = 1.2,
    ) -> "SafetyThresholds":
        """Compose thresholds from speed cap, separation floor, and reaction times.

        Head-on traffic closes at up to 2*v_max, so its conflict window is
        l_min / (2 v_max); other geometries use l_min / v_max. Adding brake
        coordination and pilot reaction gives the no-conflict thresholds.
        """
        v_max_mps = v_max_kmh / 3.6
        t_c1 = l_min_m / (2.0 * v_max_mps)
        t_c2 = l_min_m / v_max_mps
        return cls(
            v_max_kmh=v_max_kmh,
            l_min_m=l_min_m,
            t_r_s=t_r_s,
            t_bc_s=t_bc_s,
            t_c1_s=t_c1,
            t_c2_s=t_c2,
            t_no1_s=t_c1 + t_bc_s + t_r_s,
            t_no2_s=t_c2 + t_bc_s + t_r_s,
        )


DEFAULT_THRESHOLDS = SafetyThresholds.from_rules()


def threshold_for(relation: Relation, thresholds: SafetyThresholds = DEFAULT_THRESHOLDS) -> float:
    """Safe-time threshold for a conflict geometry: head-on uses the tighter one."""
    if relation is Relation.CONFRONTATION:
        return thresholds.t_no1_s
    return thresholds.t_no2_s


# --- gap interval and probability ---


@dataclass(frozen=True)
class TimeGapInterval:
    """Non-negative interval of possible arrival-time differences at a feature."""

    t_min_s: float
    t_max_s: float
    feature_id: str
    kind: str
    relation: Relation

    def __post_init__(self):
        if not 0.0 <= self.t_min_s <= self.t_max_s:
            raise ValueError(f"bad gap interval [{self.t_min_s}, {self.t_max_s}]")


def gap_interval(a_arrival: TimeInterval, b_arrival: TimeInterval) -> TimeInterval:
    """Absolute-difference interval of two arrival windows.

    The signed difference is [a.lo - b.hi, a.hi - b.lo]; conflict risk cares
    about temporal proximity, not order, so the result is its absolute-value
    interval: [0, max(|lo|, hi)] when it straddles zero, else the magnitudes.
    """
    lo = a_arrival.lo_s - b_arrival.hi_s
    hi = a_arrival.hi_s - b_arrival.lo_s
    if lo <= 0.0 <= hi:
        return TimeInterval(0.0, max(-lo, hi))
    return TimeInterval(min(abs(lo), abs(hi)), max(abs(lo), abs(hi)))


def conflict_probability(gap: TimeInterval | TimeGapInterval, t_no_s: float) -> float:
    """Probability in [0, 1] that the gap falls under the safe threshold.

    Degenerate (point) gaps collapse to certainty one way or the other, the
    limit of the interpolating branch.
    """
    t_min = gap.t_min_s if isinstance(gap, TimeGapInterval) else gap.lo_s
    t_max = gap.t_max_s if isinstance(gap, TimeGapInterval) else gap.hi_s
    if t_no_s < t_min:
        return 0.0
    if t_no_s > t_max:
        return 1.0
    if t_max == t_min:
        return 1.0  # point gap at or under the threshold
    return (t_no_s - t_min) / (t_max - t_min)


# --- fuzzy warning levels ---


@dataclass(frozen=True)
class WarningConfig:
    """Membership breakpoints between low/intermediate and intermediate/high.

    Defaults follow operational tuning; they are configuration because the
    right values depend on each airport's operating parameters.
    """

    a: float = 0.32
    b: float = 0.61

    def __post_init__(self):
        if not 0.0 < self.a < self.b < 1.0:
            raise ValueError(f"need 0 < a < b < 1, got a={self.a}, b={self.b}")


DEFAULT_WARNING_CONFIG = WarningConfig()


class WarningLevel(str, Enum):
    LOW = "low"
    INTERMEDIATE = "intermediate"
    HIGH = "high"
    DANGER = "danger"

    @property
    def severity(self) -> int:
        return _SEVERITY[self]


_SEVERITY = {
    WarningLevel.LOW: 0,
    WarningLevel.INTERMEDIATE: 1,
    WarningLevel.HIGH: 2,
    WarningLevel.DANGER: 3,
}


def memberships(p: float, config: WarningConfig = DEFAULT_WARNING_CONFIG) -> dict[str, float]:
    """Fuzzy memberships of a probability in the low/intermediate/high sets.

    Each function is continuous on [0, 1], quadratic on its shoulder, and the
    breakpoints a and b belong fully (membership 1) to both adjacent sets.
    """
    a, b = config.a, config.b
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability {p} outside [0, 1]")

    if p <= a:
        low = 1.0
    elif p < b:
        low = ((b - p) / (b - a)) ** 2
    else:
        low = 0.0

    if p < a:
        intermediate = (p / a) ** 2
    elif p <= b:
        intermediate = 1.0
    else:
        intermediate = ((1.0 - p) / (1.0 - b)) ** 2

    if p < a:
        high = 0.0
    elif p < b:
        high = ((p - a) / (b - a)) ** 2
    else:
        high = 1.0

    return {"low": low, "intermediate": intermediate, "high": high}


_LEVEL_BY_NAME = {
    "low": WarningLevel.LOW,
    "intermediate": WarningLevel.INTERMEDIATE,
    "high": WarningLevel.HIGH,
}


def classify(p: float, config: WarningConfig = DEFAULT_WARNING_CONFIG) -> WarningLevel:
    """Warning level by maximum membership; ties go to the more severe level.

    Certainty (p = 1) is the danger level outright, bypassing memberships.
    """
    if p >= 1.0:
        return WarningLevel.DANGER
    grades = memberships(p, config)
    return max(_LEVEL_BY_NAME.values(), key=lambda lvl: (grades[lvl.value], lvl.severity))


@dataclass(frozen=True)
class RecommendedAction:
    text: str
    must_modify: bool
    immediate: bool


_ACTIONS = {
    WarningLevel.LOW: RecommendedAction(
        text="No change to the issued clearance required.", must_modify=False, immediate=False
    ),
    WarningLevel.INTERMEDIATE: RecommendedAction(
        text="Follow up the taxi progress; modify the issued clearance route if necessary.",
        must_modify=False,
        immediate=False,
    ),
    WarningLevel.HIGH: RecommendedAction(
        text="Modify the issued clearance before taxi proceeds.", must_modify=True, immediate=False
    ),
    WarningLevel.DANGER: RecommendedAction(
        text="Immediately modify the issued clearance.", must_modify=True, immediate=True
    ),
}


def response_action(level: WarningLevel) -> RecommendedAction:
    """Controller response for a warning level, per the escalation ladder."""
    return _ACTIONS[level]


# --- pairwise detection ---


@dataclass(frozen=True)
class FeatureAssessment:
    gap: TimeGapInterval
    t_no_s: float
    probability: float


@dataclass(frozen=True)
class ConflictReport:
    pair: tuple[str, str]
    features: tuple[FeatureAssessment, ...]
    probability: float
    level: WarningLevel
    memberships: dict[str, float]
    action: RecommendedAction

    def to_json_dict(self) -> dict:
        return {
            "pair": list(self.pair),
            "features": [
                {
                    "feature": fa.gap.feature_id,
                    "kind": fa.gap.kind,
                    "relation": fa.gap.relation.value,
                    "gap": [fa.gap.t_min_s, fa.gap.t_max_s],
                    "t_no": fa.t_no_s,
                    "p": fa.probability,
                }
                for fa in self.features
            ],
            "overall": {
                "p": self.probability,
                "level": self.level.value,
                "memberships": dict(self.memberships),
                "action": {
                    "text": self.action.text,
                    "must_modify": self.action.must_modify,
                    "immediate": self.action.immediate,
                },
            },
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "ConflictReport":
        overall = doc["overall"]
        action = overall["action"]
        return cls(
            pair=(str(doc["pair"][0]), str(doc["pair"][1])),
            features=tuple(
                FeatureAssessment(
                    gap=TimeGapInterval(
                        t_min_s=float(body["gap"][0]),
                        t_max_s=float(body["gap"][1]),
                        feature_id=str(body["feature"]),
                        kind=str(body["kind"]),
                        relation=Relation(body["relation"]),
                    ),
                    t_no_s=float(body["t_no"]),
                    probability=float(body["p"]),
                )
                for body in doc["features"]
            ),
            probability=float(overall["p"]),
            level=WarningLevel(overall["level"]),
            memberships={k: float(v) for k, v in overall["memberships"].items()},
            action=RecommendedAction(
                text=str(action["text"]),
                must_modify=bool(action["must_modify"]),
                immediate=bool(action["immediate"]),
            ),
        )


def detect(
    a: DeducedTimeline,
    b: DeducedTimeline,
    features: Sequence[SharedFeature],
    thresholds: SafetyThresholds = DEFAULT_THRESHOLDS,
    config: WarningConfig = DEFAULT_WARNING_CONFIG,
) -> ConflictReport:
    """Assess every shared feature and roll up to the riskiest one.

    Disjoint routes (no features) report probability zero at the low level.
    Both timelines must come from the same map and calibration epoch.
    """
    assessments: list[FeatureAssessment] = []
    for feature in features:
        if feature.kind == "segment":
            arrival_a = a.arrival_at_segment(feature.feature_id)
            arrival_b = b.arrival_at_segment(feature.feature_id)
        else:
            arrival_a = a.arrival_at_node(feature.feature_id)
            arrival_b = b.arrival_at_node(feature.feature_id)
        if arrival_a is None or arrival_b is None:
            raise ValueError(f"feature {feature.feature_id!r} not on both timelines")
        gap = gap_interval(arrival_a, arrival_b)
        t_no = threshold_for(feature.relation, thresholds)
        assessments.append(
            FeatureAssessment(
                gap=TimeGapInterval(
                    t_min_s=gap.lo_s,
                    t_max_s=gap.hi_s,
                    feature_id=feature.feature_id,
                    kind=feature.kind,
                    relation=feature.relation,
                ),
                t_no_s=t_no,
                probability=conflict_probability(gap, t_no),
            )
        )

    overall_p = max((fa.probability for fa in assessments), default=0.0)
    level = classify(overall_p, config)
    return ConflictReport(
        pair=(a.command_id, b.command_id),
        features=tuple(assessments),
        probability=overall_p,
        level=level,
        memberships=memberships(overall_p, config),
        action=response_action(level),
    )


def evaluate_pair(
    cmd_a: TaxiCommand,
    cmd_b: TaxiCommand,
    calibration: CalibrationSet,
    airport: AirportMap,
    thresholds: SafetyThresholds = DEFAULT_THRESHOLDS,
    config: WarningConfig = DEFAULT_WARNING_CONFIG,
    day_window: DayWindow = DEFAULT_DAY_WINDOW,
) -> ConflictReport:
    """Deduce both commands and run detection over their shared features."""
    timeline_a = deduce_timeline(cmd_a, calibration, airport, day_window)
    timeline_b = deduce_timeline(cmd_b, calibration, airport, day_window)
    features = shared_features(cmd_a, cmd_b, airport)
    return detect(timeline_a, timeline_b, features, thresholds, config)


# --- start-time offset sweep ---


@dataclass(frozen=True)
class SweepRow:
    offset_s: float
    probability: float
    level: WarningLevel


DEFAULT_SWEEP_OFFSETS = tuple(float(v) for v in range(0, 101, 5))


def offset_sweep(
    cmd_a: TaxiCommand,
    cmd_b: TaxiCommand,
    calibration: CalibrationSet,
    airport: AirportMap,
    offsets_s: Iterable[float] = DEFAULT_SWEEP_OFFSETS,
    thresholds: SafetyThresholds = DEFAULT_THRESHOLDS,
    config: WarningConfig = DEFAULT_WARNING_CONFIG,
    day_window: DayWindow = DEFAULT_DAY_WINDOW,
) -> list[SweepRow]:
    """Shift the second command's start time and record probability and level.

    The default grid (0..100 s in 5 s steps) mirrors how controllers space
    successive clearances; offset 0 is plain detection of the pair as given.
    A shift can carry the start time across a day-window or weekend boundary;
    the shifted command is then deduced under its own band like any other.
    """
    rows: list[SweepRow] = []
    for offset in offsets_s:
        shifted = replace(cmd_b, start_time=cmd_b.start_time + timedelta(seconds=float(offset)))
        report = evaluate_pair(cmd_a, shifted, calibration, airport, thresholds, config, day_window)
        rows.append(SweepRow(offset_s=float(offset), probability=report.probability, level=report.level))
    return rows


def sweep_to_csv(rows: Sequence[SweepRow]) -> str:
    lines = ["offset_s,probability,level"]
    for row in rows:
        lines.append(f"{row.offset_s:g},{row.probability!r},{row.level.value}")
    return "\n".join(lines) + "\n"
