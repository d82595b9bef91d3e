"""taxiwarn: taxi-clearance deduction and surface-conflict early warning.

Calibrates per-taxiway, time-banded speed intervals from historical surface
tracks, deduces arrival-time windows along commanded taxi routes before any
aircraft moves, and classifies pairwise conflicts into graded warnings.
"""

from .airportmodel import (
    AirportMap,
    Relation,
    SharedFeature,
    TaxiCommand,
    TaxiSegment,
    load_map,
    shared_features,
    validate_command,
    walk_nodes,
)
from .calibration import (
    CalibrationConfig,
    CalibrationSet,
    DayWindow,
    SpeedInterval,
    TimeBand,
    build_calibration,
    classify_time_band,
    constraint_report,
    ks_gaussian_test,
    pauta_interval,
    pearson,
)
from .conflict import (
    ConflictReport,
    SafetyThresholds,
    TimeGapInterval,
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
    threshold_for,
)
from .deduction import (
    DeducedTimeline,
    TimeInterval,
    deduce_timeline,
    interval_contains,
    segment_duration,
    timeline_midpoint_deviation,
)
from .geo import (
    WGS84,
    EcefPosition,
    EllipsoidParams,
    GeodeticPosition,
    geodetic_to_ecef,
    prime_vertical_radius,
    surface_distance,
)
from .trackdata import (
    AircraftInfo,
    SegmentFix,
    TrackRecord,
    assign_to_segments,
    build_aircraft_table,
    filter_speed_outliers,
    load_registry,
    parse_track_file,
)

__version__ = "0.1.0"
