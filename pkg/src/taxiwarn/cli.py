"""Command-line entry points.

Subcommands cover the batch workflow end to end: generate synthetic tracks,
calibrate speed intervals from track CSVs, deduce a clearance's timeline,
detect conflicts between two clearances, sweep start-time offsets, and run
the HTTP service.

Exit codes: 0 success, 1 validation problem, 2 I/O problem, 3 computation
problem (e.g. an uncalibrated taxiway on a route).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import synth
from .airportmodel import AirportMap, TaxiCommand, load_map, validate_command
from .bundled import bundled_map_path, bundled_registry_path
from .calibration import (
    CalibrationConfig,
    CalibrationSet,
    DayWindow,
    build_calibration,
    constraint_report,
    ks_gaussian_test,
)
from .conflict import WarningConfig, evaluate_pair, offset_sweep, sweep_to_csv
from .deduction import deduce_timeline, timeline_midpoint_deviation
from .errors import (
    CommandValidationError,
    DegenerateDataError,
    InsufficientDataError,
    InvalidCalibrationError,
    MapValidationError,
    TaxiwarnError,
    UncalibratedSegmentError,
)
from .timeutil import format_timestamp, parse_timestamp
from .trackdata import build_aircraft_table, filter_speed_outliers, load_registry, parse_track_file, assign_to_segments, serialize_track_records

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2
EXIT_COMPUTE = 3


def command_from_dict(doc: dict) -> TaxiCommand:
    return TaxiCommand.make(
        command_id=str(doc["command_id"]),
        icao24=str(doc["icao24"]).lower(),
        route=[str(seg) for seg in doc["route"]],
        start_time=parse_timestamp(str(doc["start_time"])),
    )


def _load_command_file(path: str) -> TaxiCommand:
    with open(path, encoding="utf-8") as fh:
        return command_from_dict(json.load(fh))


def _load_calibration(path: str) -> CalibrationSet:
    with open(path, encoding="utf-8") as fh:
        return CalibrationSet.from_json_dict(json.load(fh))


def _require_valid(cmd: TaxiCommand, airport: AirportMap) -> None:
    violations = validate_command(cmd, airport)
    if violations:
        raise CommandValidationError(violations)


# --- subcommands ---


def _cmd_calibrate(args: argparse.Namespace) -> int:
    airport = load_map(args.map)
    records = []
    rejected_total = 0
    reject_lines: list[str] = []
    for tracks_path in args.tracks:
        with open(tracks_path, encoding="utf-8") as fh:
            recs, rejected = parse_track_file(fh)
        records.extend(recs)
        rejected_total += len(rejected)
        for rej in rejected:
            print(f"warning: {tracks_path}:{rej.line_no}: {rej.reason}", file=sys.stderr)
            reject_lines.append(json.dumps({"file": tracks_path, "line_no": rej.line_no, "reason": rej.reason}))
    if args.rejects:
        Path(args.rejects).write_text("\n".join(reject_lines) + ("\n" if reject_lines else ""), encoding="utf-8")

    kept = filter_speed_outliers(records)
    fixes, outside = assign_to_segments(kept, airport)
    config = CalibrationConfig(
        min_samples=args.min_samples, day_window=DayWindow.parse(args.day_window)
    )
    calibration = build_calibration(fixes, airport, config)

    out_path = Path(args.out)
    out_path.write_text(json.dumps(calibration.to_json_dict(), indent=2) + "\n", encoding="utf-8")

    print(f"parsed {len(records)} fixes ({rejected_total} rejected lines)")
    print(f"speed filter kept {len(kept)}; {outside} fixes outside all geofences")
    print(f"calibration written to {out_path}")
    print()
    print("taxiway   band  lo_kn  hi_kn      n  note")
    for taxiway_id in sorted(calibration.entries):
        entry = calibration.entries[taxiway_id]
        if entry.uncalibrated:
            print(f"{taxiway_id:<9} -     uncalibrated (no usable samples)")
            continue
        for band, interval in entry.bands.items():
            note = "fallback" if band in entry.fallback_bands else ""
            print(
                f"{taxiway_id:<9} {band.value}  {interval.v_lo_kn:6.2f} {interval.v_hi_kn:6.2f} {interval.sample_count:6d}  {note}"
            )
        speeds = sorted(
            fix.ground_speed_kn for fix in fixes if fix.taxiway_id == taxiway_id
        )
        if len(speeds) >= 8:
            try:
                ks = ks_gaussian_test(speeds)
            except DegenerateDataError:
                print(f"{taxiway_id:<9} K-S n/a (degenerate sample)")
            else:
                verdict = "pass" if ks.passed else "FAIL"
                print(
                    f"{taxiway_id:<9} K-S D={ks.statistic:.4f} critical={ks.critical_value:.4f} -> {verdict}"
                )

    uncalibrated = [t for t, e in calibration.entries.items() if e.uncalibrated]
    if uncalibrated:
        print(f"warning: uncalibrated taxiways: {', '.join(sorted(uncalibrated))}", file=sys.stderr)

    if args.report_dir:
        registry = load_registry(args.registry or bundled_registry_path())
        table = build_aircraft_table(kept, registry)
        report = constraint_report(fixes, airport, table, day_window=config.day_window)
        report_dir = Path(args.report_dir)
        report_dir.mkdir(parents=True, exist_ok=True)
        (report_dir / "constraints.md").write_text(report.to_markdown(), encoding="utf-8")
        for name, csv_text in report.to_csv_tables().items():
            (report_dir / f"{name}.csv").write_text(csv_text + "\n", encoding="utf-8")
        print(f"constraint report written to {report_dir}")
    return EXIT_OK


def _cmd_deduce(args: argparse.Namespace) -> int:
    airport = load_map(args.map)
    calibration = _load_calibration(args.cal)
    cmd = TaxiCommand.make(
        command_id=args.id,
        icao24=args.icao24,
        route=args.route.split(","),
        start_time=parse_timestamp(args.start),
    )
    _require_valid(cmd, airport)
    timeline = deduce_timeline(cmd, calibration, airport, DayWindow.parse(args.day_window))

    start = timeline.start_epoch_s
    print(f"command {cmd.command_id}: band {timeline.band.value}, start {format_timestamp(cmd.start_time)}")
    print("taxiway   node   lo_s     hi_s     (elapsed since start)")
    for entry in timeline.entries:
        note = " fallback" if entry.fallback else ""
        print(
            f"{entry.taxiway_id:<9} {entry.node_id:<6} {entry.arrival.lo_s - start:8.2f} {entry.arrival.hi_s - start:8.2f}{note}"
        )

    if args.observed:
        observed_by_node: dict[str, float] = {}
        with open(args.observed, encoding="utf-8") as fh:
            for line in fh:
                text = line.strip()
                if not text or text.lower().startswith("node"):
                    continue
                node_id, elapsed = text.split(",")
                observed_by_node[node_id.strip()] = float(elapsed)
        try:
            observed = [observed_by_node[e.node_id] for e in timeline.entries]
        except KeyError as exc:
            print(f"error: observation missing for node {exc}", file=sys.stderr)
            return EXIT_VALIDATION
        report = timeline_midpoint_deviation(timeline, observed)
        contained = sum(report.contained)
        label = "all" if contained == len(report.contained) else f"{contained}/{len(report.contained)}"
        print(f"contained: {label}")
        print(f"average deviation: {report.avg_deviation_pct:.2f}%")
        print(f"correlation: {report.correlation:.4f}")

    if args.json_out:
        Path(args.json_out).write_text(
            json.dumps(timeline.to_json_dict(), indent=2) + "\n", encoding="utf-8"
        )
    return EXIT_OK


def _cmd_detect(args: argparse.Namespace) -> int:
    airport = load_map(args.map)
    calibration = _load_calibration(args.cal)
    cmd_a = _load_command_file(args.cmd_a)
    cmd_b = _load_command_file(args.cmd_b)
    _require_valid(cmd_a, airport)
    _require_valid(cmd_b, airport)
    config = WarningConfig(a=args.threshold_a, b=args.threshold_b)
    report = evaluate_pair(cmd_a, cmd_b, calibration, airport, config=config)

    print(json.dumps(report.to_json_dict(), indent=2))
    print(file=sys.stderr)
    print(
        f"{cmd_a.command_id} vs {cmd_b.command_id}: p={report.probability:.4f} level={report.level.value}",
        file=sys.stderr,
    )
    for fa in report.features:
        print(
            f"  {fa.gap.kind} {fa.gap.feature_id} ({fa.gap.relation.value}): gap=[{fa.gap.t_min_s:.2f}, {fa.gap.t_max_s:.2f}] t_no={fa.t_no_s} p={fa.probability:.4f}",
            file=sys.stderr,
        )
    print(f"  action: {report.action.text}", file=sys.stderr)
    return EXIT_OK


def _parse_offsets(spec: str) -> list[float]:
    start_raw, stop_raw, step_raw = spec.split(":")
    start, stop, step = float(start_raw), float(stop_raw), float(step_raw)
    if step <= 0 or stop < start:
        raise ValueError(f"bad offsets spec {spec!r}")
    offsets = []
    value = start
    while value <= stop + 1e-9:
        offsets.append(round(value, 9))
        value += step
    return offsets


def _cmd_sweep(args: argparse.Namespace) -> int:
    airport = load_map(args.map)
    calibration = _load_calibration(args.cal)
    cmd_a = _load_command_file(args.cmd_a)
    cmd_b = _load_command_file(args.cmd_b)
    _require_valid(cmd_a, airport)
    _require_valid(cmd_b, airport)
    offsets = _parse_offsets(args.offsets)
    config = WarningConfig(a=args.threshold_a, b=args.threshold_b)
    rows = offset_sweep(cmd_a, cmd_b, calibration, airport, offsets, config=config)

    csv_text = sweep_to_csv(rows)
    Path(args.out).write_text(csv_text, encoding="utf-8")
    print(f"{len(rows)} rows written to {args.out}")
    for row in rows:
        print(f"  +{row.offset_s:5.1f}s  p={row.probability:.4f}  {row.level.value}")
    return EXIT_OK


def _cmd_synth(args: argparse.Namespace) -> int:
    airport = load_map(args.map)
    profile = synth.load_profile(args.profile) if args.profile else synth.default_profile()
    records = synth.generate_tracks(airport, profile, seed=args.seed, fixes_per_band=args.fixes_per_band)
    out_path = Path(args.out)
    out_path.write_text("\n".join(serialize_track_records(records)) + "\n", encoding="utf-8")
    print(f"{len(records)} fixes written to {out_path}")
    return EXIT_OK


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import ServiceConfig, create_app

    config = ServiceConfig.load(args.config) if args.config else ServiceConfig(map_path=str(bundled_map_path()))
    if args.map:
        config = config.with_overrides(map_path=args.map)
    if args.cal:
        config = config.with_overrides(calibration_path=args.cal)
    if args.host:
        config = config.with_overrides(host=args.host)
    if args.port:
        config = config.with_overrides(port=args.port)
    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
    return EXIT_OK


# --- parser wiring ---


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="taxiwarn", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("calibrate", help="build speed intervals from track CSVs")
    p.add_argument("--tracks", nargs="+", required=True, help="track CSV files")
    p.add_argument("--map", required=True, help="airport map JSON")
    p.add_argument("--out", required=True, help="output calibration JSON")
    p.add_argument("--min-samples", type=int, default=30)
    p.add_argument("--day-window", default="06:00-18:00")
    p.add_argument("--registry", help="icao24 registry JSON (for the constraint report)")
    p.add_argument("--report-dir", help="also write the constraint analysis report here")
    p.add_argument("--rejects", help="write rejected input lines as JSON lines here")
    p.set_defaults(func=_cmd_calibrate)

    p = sub.add_parser("deduce", help="deduce per-node arrival intervals for a route")
    p.add_argument("--cal", required=True)
    p.add_argument("--map", required=True)
    p.add_argument("--route", required=True, help="comma-separated taxiway ids, e.g. P,C,C6,B-8")
    p.add_argument("--start", required=True, help="start of taxi, ISO-8601")
    p.add_argument("--observed", help="CSV of node,elapsed_s to compare against")
    p.add_argument("--id", default="CMD-1")
    p.add_argument("--icao24", default="780201")
    p.add_argument("--day-window", default="06:00-18:00")
    p.add_argument("--json-out", help="write the timeline JSON here")
    p.set_defaults(func=_cmd_deduce)

    p = sub.add_parser("detect", help="conflict-check two clearances")
    p.add_argument("--cal", required=True)
    p.add_argument("--map", required=True)
    p.add_argument("--cmd-a", required=True, help="command JSON file")
    p.add_argument("--cmd-b", required=True, help="command JSON file")
    p.add_argument("--threshold-a", type=float, default=0.32)
    p.add_argument("--threshold-b", type=float, default=0.61)
    p.set_defaults(func=_cmd_detect)

    p = sub.add_parser("sweep", help="offset-sweep the second clearance's start time")
    p.add_argument("--cal", required=True)
    p.add_argument("--map", required=True)
    p.add_argument("--cmd-a", required=True)
    p.add_argument("--cmd-b", required=True)
    p.add_argument("--offsets", default="0:100:5", help="start:stop:step seconds")
    p.add_argument("--out", required=True, help="output CSV")
    p.add_argument("--threshold-a", type=float, default=0.32)
    p.add_argument("--threshold-b", type=float, default=0.61)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("synth", help="generate synthetic surface tracks")
    p.add_argument("--map", required=True)
    p.add_argument("--profile", help="speed profile JSON (defaults to a bundled profile)")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True, help="output CSV")
    p.add_argument("--fixes-per-band", type=int, default=60)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--config", help="service config JSON")
    p.add_argument("--map", help="override map path")
    p.add_argument("--cal", help="override calibration path")
    p.add_argument("--host", help="override bind address")
    p.add_argument("--port", type=int, help="override port")
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (MapValidationError, CommandValidationError) as exc:
        for problem in getattr(exc, "problems", None) or getattr(exc, "violations", []):
            print(f"error: {problem}", file=sys.stderr)
        return EXIT_VALIDATION
    except (
        UncalibratedSegmentError,
        InsufficientDataError,
        DegenerateDataError,
        InvalidCalibrationError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except TaxiwarnError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
