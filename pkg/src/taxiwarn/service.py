"""HTTP service holding one airport scenario: map + calibration + active clearances.

The service is a thin shell over the library: every number it returns is the
serialized result of the same library calls a batch user would make. State
mutations (register/complete/import) are serialized behind one lock, readers
see immutable snapshots, and every mutation is pushed to subscribers over
server-sent events in mutation order.

State survives restarts through a JSON snapshot written after each mutation.
"""

from __future__ import annotations

import asyncio
import hashlib
import json
import os
from dataclasses import dataclass, replace as dc_replace
from pathlib import Path

from fastapi import Depends, FastAPI, HTTPException, Request
from fastapi.responses import StreamingResponse
from pydantic import BaseModel

from .airportmodel import AirportMap, TaxiCommand, load_map, shared_features, validate_command
from .calibration import CalibrationSet, DayWindow
from .conflict import (
    ConflictReport,
    SafetyThresholds,
    WarningConfig,
    WarningLevel,
    detect,
    offset_sweep,
    response_action,
)
from .deduction import DeducedTimeline, deduce_timeline
from .errors import TaxiwarnError
from .timeutil import format_timestamp, parse_timestamp

KEEPALIVE_SECONDS = 15.0
EVENT_QUEUE_SIZE = 256


def canonical_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def _epoch_id(doc) -> str:
    return hashlib.sha256(canonical_json(doc).encode()).hexdigest()[:12]


@dataclass(frozen=True)
class ServiceConfig:
    map_path: str
    calibration_path: str | None = None
    snapshot_path: str | None = None
    host: str = "127.0.0.1"
    port: int = 8000
    warning_a: float = 0.32
    warning_b: float = 0.61
    day_window: str = "06:00-18:00"
    token: str | None = None
    console_dist: str | None = None

    @classmethod
    def load(cls, path: str | Path) -> "ServiceConfig":
        """Config file plus TAXIWARN_* environment overrides."""
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
        config = cls(**doc)
        return config.with_env_overrides()

    def with_env_overrides(self) -> "ServiceConfig":
        updates = {}
        for env, attr, cast in (
            ("TAXIWARN_MAP", "map_path", str),
            ("TAXIWARN_CALIBRATION", "calibration_path", str),
            ("TAXIWARN_SNAPSHOT", "snapshot_path", str),
            ("TAXIWARN_HOST", "host", str),
            ("TAXIWARN_PORT", "port", int),
            ("TAXIWARN_WARNING_A", "warning_a", float),
            ("TAXIWARN_WARNING_B", "warning_b", float),
            ("TAXIWARN_DAY_WINDOW", "day_window", str),
            ("TAXIWARN_TOKEN", "token", str),
            ("TAXIWARN_CONSOLE_DIST", "console_dist", str),
        ):
            value = os.environ.get(env)
            if value is not None:
                updates[attr] = cast(value)
        return dc_replace(self, **updates) if updates else self

    def with_overrides(self, **updates) -> "ServiceConfig":
        return dc_replace(self, **updates)


class EventBroker:
    """Fan-out of state events to SSE subscribers with bounded buffers."""

    def __init__(self, maxsize: int = EVENT_QUEUE_SIZE):
        self._maxsize = maxsize
        self._queues: list[asyncio.Queue] = []

    def subscribe(self) -> asyncio.Queue:
        queue: asyncio.Queue = asyncio.Queue(maxsize=self._maxsize)
        self._queues.append(queue)
        return queue

    def unsubscribe(self, queue: asyncio.Queue) -> None:
        if queue in self._queues:
            self._queues.remove(queue)

    def publish(self, event_type: str, payload: dict) -> None:
        event = {"type": event_type, "payload": payload}
        for queue in list(self._queues):
            try:
                queue.put_nowait(event)
            except asyncio.QueueFull:
                # Slow consumer: stop serving it, but tell it why if possible.
                self.unsubscribe(queue)
                try:
                    queue.get_nowait()
                    queue.put_nowait({"type": "dropped", "payload": {"reason": "slow-consumer"}})
                except (asyncio.QueueEmpty, asyncio.QueueFull):
                    pass


class CommandIn(BaseModel):
    command_id: str
    icao24: str
    route: list[str]
    start_time: str


class SweepSpec(BaseModel):
    versus: str
    offsets: str = "0:100:5"


class WhatIfIn(BaseModel):
    command: CommandIn
    sweep: SweepSpec | None = None


def _command_from_model(model: CommandIn) -> TaxiCommand:
    try:
        start = parse_timestamp(model.start_time)
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=[f"bad start_time: {exc}"]) from exc
    return TaxiCommand.make(
        command_id=model.command_id,
        icao24=model.icao24.lower(),
        route=model.route,
        start_time=start,
    )


class ScenarioState:
    """One airport's live picture; mutated only under the service lock."""

    def __init__(self, airport: AirportMap, map_doc: dict, calibration: CalibrationSet | None):
        self.airport = airport
        self.map_doc = map_doc
        self.map_epoch = _epoch_id(map_doc)
        self.calibration = calibration
        self.calibration_epoch = _epoch_id(calibration.to_json_dict()) if calibration else None
        self.commands: dict[str, TaxiCommand] = {}
        self.timelines: dict[str, DeducedTimeline] = {}
        self.conflicts: dict[tuple[str, str], ConflictReport] = {}

    def state_doc(self) -> dict:
        return {
            "map_epoch": self.map_epoch,
            "calibration_epoch": self.calibration_epoch,
            "commands": {
                command_id: self.timelines[command_id].to_json_dict()
                for command_id in sorted(self.timelines)
            },
            "conflicts": [
                self.conflicts[pair].to_json_dict() for pair in sorted(self.conflicts)
            ],
        }

    def state_hash(self) -> str:
        return hashlib.sha256(canonical_json(self.state_doc()).encode()).hexdigest()

    def snapshot_doc(self) -> dict:
        return {
            "map_epoch": self.map_epoch,
            "calibration": self.calibration.to_json_dict() if self.calibration else None,
            "commands": [
                {
                    "command_id": cmd.command_id,
                    "icao24": cmd.icao24,
                    "route": list(cmd.route),
                    "start_time": format_timestamp(cmd.start_time),
                }
                for _, cmd in sorted(self.commands.items())
            ],
        }


def create_app(config: ServiceConfig) -> FastAPI:
    airport = load_map(config.map_path)
    with open(config.map_path, encoding="utf-8") as fh:
        map_doc = json.load(fh)

    calibration: CalibrationSet | None = None
    if config.calibration_path:
        with open(config.calibration_path, encoding="utf-8") as fh:
            calibration = CalibrationSet.from_json_dict(json.load(fh))

    state = ScenarioState(airport, map_doc, calibration)
    broker = EventBroker()
    lock = asyncio.Lock()
    day_window = DayWindow.parse(config.day_window)
    warning_config = WarningConfig(a=config.warning_a, b=config.warning_b)
    thresholds = SafetyThresholds.from_rules()

    app = FastAPI(title="taxiwarn", version="0.1.0")
    app.state.scenario = state
    app.state.broker = broker

    def _check_token(request: Request) -> None:
        if config.token and request.headers.get("x-auth-token") != config.token:
            raise HTTPException(status_code=401, detail="missing or bad token")

    auth = Depends(_check_token)

    def _deduce(cmd: TaxiCommand) -> DeducedTimeline:
        if state.calibration is None:
            raise HTTPException(status_code=422, detail=["no calibration loaded"])
        violations = validate_command(cmd, state.airport)
        if violations:
            raise HTTPException(status_code=422, detail=violations)
        try:
            return deduce_timeline(cmd, state.calibration, state.airport, day_window)
        except TaxiwarnError as exc:
            raise HTTPException(status_code=422, detail=[str(exc)]) from exc

    def _conflicts_against_active(cmd: TaxiCommand, timeline: DeducedTimeline) -> list[ConflictReport]:
        reports = []
        for other_id in sorted(state.commands):
            other_cmd = state.commands[other_id]
            features = shared_features(cmd, other_cmd, state.airport)
            reports.append(
                detect(timeline, state.timelines[other_id], features, thresholds, warning_config)
            )
        return reports

    def _highest_level(reports: list[ConflictReport]) -> WarningLevel:
        level = WarningLevel.LOW
        for report in reports:
            if report.level.severity > level.severity:
                level = report.level
        return level

    def _persist() -> None:
        if not config.snapshot_path:
            return
        tmp_path = config.snapshot_path + ".tmp"
        with open(tmp_path, "w", encoding="utf-8") as fh:
            json.dump(state.snapshot_doc(), fh, indent=2)
        os.replace(tmp_path, config.snapshot_path)

    def _restore() -> None:
        if not config.snapshot_path or not os.path.exists(config.snapshot_path):
            return
        with open(config.snapshot_path, encoding="utf-8") as fh:
            doc = json.load(fh)
        if doc.get("map_epoch") != state.map_epoch:
            print("warning: snapshot was taken against a different map; ignoring it")
            return
        if doc.get("calibration"):
            state.calibration = CalibrationSet.from_json_dict(doc["calibration"])
            state.calibration_epoch = _epoch_id(doc["calibration"])
        for body in doc.get("commands", []):
            cmd = TaxiCommand.make(
                command_id=body["command_id"],
                icao24=body["icao24"],
                route=body["route"],
                start_time=parse_timestamp(body["start_time"]),
            )
            if state.calibration is None or validate_command(cmd, state.airport):
                continue
            timeline = deduce_timeline(cmd, state.calibration, state.airport, day_window)
            for other_id in sorted(state.commands):
                features = shared_features(cmd, state.commands[other_id], state.airport)
                report = detect(timeline, state.timelines[other_id], features, thresholds, warning_config)
                state.conflicts[_pair_key(cmd.command_id, other_id)] = report
            state.commands[cmd.command_id] = cmd
            state.timelines[cmd.command_id] = timeline

    _restore()

    @app.post("/api/commands", status_code=201)
    async def register_command(body: CommandIn, _=auth):
        cmd = _command_from_model(body)
        async with lock:
            if cmd.command_id in state.commands:
                raise HTTPException(status_code=409, detail=f"command {cmd.command_id!r} already active")
            timeline = _deduce(cmd)
            reports = _conflicts_against_active(cmd, timeline)
            state.commands[cmd.command_id] = cmd
            state.timelines[cmd.command_id] = timeline
            for report in reports:
                state.conflicts[_pair_key(*report.pair)] = report
            _persist()
            broker.publish("command-added", {"command_id": cmd.command_id, "timeline": timeline.to_json_dict()})
            broker.publish(
                "conflict-updated",
                {"conflicts": [r.to_json_dict() for r in reports], "state_hash": state.state_hash()},
            )
            highest = _highest_level(reports)
            return {
                "command_id": cmd.command_id,
                "timeline": timeline.to_json_dict(),
                "conflicts": [r.to_json_dict() for r in reports],
                "highest_level": highest.value,
                "action": {
                    "text": response_action(highest).text,
                    "must_modify": response_action(highest).must_modify,
                    "immediate": response_action(highest).immediate,
                },
            }

    @app.delete("/api/commands/{command_id}")
    async def complete_command(command_id: str, _=auth):
        async with lock:
            if command_id not in state.commands:
                raise HTTPException(status_code=404, detail=f"command {command_id!r} not active")
            del state.commands[command_id]
            del state.timelines[command_id]
            state.conflicts = {
                pair: report for pair, report in state.conflicts.items() if command_id not in pair
            }
            _persist()
            broker.publish("command-removed", {"command_id": command_id})
            broker.publish(
                "conflict-updated",
                {
                    "conflicts": [state.conflicts[p].to_json_dict() for p in sorted(state.conflicts)],
                    "state_hash": state.state_hash(),
                },
            )
            return {"removed": command_id, "remaining": sorted(state.commands)}

    @app.post("/api/whatif")
    async def what_if(body: WhatIfIn, _=auth):
        cmd = _command_from_model(body.command)
        async with lock:
            timeline = _deduce(cmd)
            reports = _conflicts_against_active(cmd, timeline)
            sweep_rows = None
            if body.sweep is not None:
                versus = state.commands.get(body.sweep.versus)
                if versus is None:
                    raise HTTPException(status_code=422, detail=[f"unknown command {body.sweep.versus!r}"])
                offsets = _parse_offsets_spec(body.sweep.offsets)
                rows = offset_sweep(
                    versus, cmd, state.calibration, state.airport, offsets, thresholds, warning_config, day_window
                )
                sweep_rows = [
                    {"offset_s": row.offset_s, "probability": row.probability, "level": row.level.value}
                    for row in rows
                ]
            highest = _highest_level(reports)
            return {
                "command_id": cmd.command_id,
                "timeline": timeline.to_json_dict(),
                "conflicts": [r.to_json_dict() for r in reports],
                "highest_level": highest.value,
                "action": {
                    "text": response_action(highest).text,
                    "must_modify": response_action(highest).must_modify,
                    "immediate": response_action(highest).immediate,
                },
                "sweep": sweep_rows,
            }

    @app.get("/api/state")
    async def get_state(_=auth):
        doc = state.state_doc()
        doc["state_hash"] = state.state_hash()
        return doc

    @app.get("/api/map")
    async def get_map(_=auth):
        return {"epoch": state.map_epoch, "map": state.airport.to_json_dict()}

    @app.get("/api/calibration")
    async def get_calibration(_=auth):
        return {
            "epoch": state.calibration_epoch,
            "calibration": state.calibration.to_json_dict() if state.calibration else None,
        }

    @app.post("/api/calibration")
    async def import_calibration(body: dict, _=auth):
        async with lock:
            try:
                new_calibration = CalibrationSet.from_json_dict(body)
            except (KeyError, TypeError, ValueError) as exc:
                raise HTTPException(status_code=422, detail=[f"malformed calibration: {exc}"]) from exc
            # Re-deduce everything first; only then swap, so a bad import
            # cannot leave a half-updated scenario.
            new_timelines: dict[str, DeducedTimeline] = {}
            try:
                for command_id in sorted(state.commands):
                    new_timelines[command_id] = deduce_timeline(
                        state.commands[command_id], new_calibration, state.airport, day_window
                    )
            except TaxiwarnError as exc:
                raise HTTPException(status_code=422, detail=[str(exc)]) from exc
            new_conflicts: dict[tuple[str, str], ConflictReport] = {}
            ids = sorted(state.commands)
            for i, id_a in enumerate(ids):
                for id_b in ids[i + 1 :]:
                    features = shared_features(state.commands[id_a], state.commands[id_b], state.airport)
                    new_conflicts[_pair_key(id_a, id_b)] = detect(
                        new_timelines[id_a], new_timelines[id_b], features, thresholds, warning_config
                    )
            state.calibration = new_calibration
            state.calibration_epoch = _epoch_id(new_calibration.to_json_dict())
            state.timelines = new_timelines
            state.conflicts = new_conflicts
            _persist()
            broker.publish("calibration-swapped", {"epoch": state.calibration_epoch})
            broker.publish(
                "conflict-updated",
                {
                    "conflicts": [state.conflicts[p].to_json_dict() for p in sorted(state.conflicts)],
                    "state_hash": state.state_hash(),
                },
            )
            return {"epoch": state.calibration_epoch, "commands": sorted(state.commands)}

    @app.get("/api/events")
    async def events(request: Request, _=auth):
        queue = broker.subscribe()

        async def stream():
            try:
                yield ": connected\n\n"
                while True:
                    if await request.is_disconnected():
                        return
                    try:
                        event = await asyncio.wait_for(queue.get(), timeout=KEEPALIVE_SECONDS)
                    except asyncio.TimeoutError:
                        yield ": keepalive\n\n"
                        continue
                    yield f"event: {event['type']}\ndata: {json.dumps(event['payload'], sort_keys=True)}\n\n"
                    if event["type"] == "dropped":
                        return
            finally:
                broker.unsubscribe(queue)

        return StreamingResponse(
            stream(),
            media_type="text/event-stream",
            headers={"Cache-Control": "no-cache", "X-Accel-Buffering": "no"},
        )

    if config.console_dist and Path(config.console_dist).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=config.console_dist, html=True), name="console")

    return app


def _pair_key(id_a: str, id_b: str) -> tuple[str, str]:
    return (id_a, id_b) if id_a <= id_b else (id_b, id_a)


def _parse_offsets_spec(spec: str) -> list[float]:
    try:
        start_raw, stop_raw, step_raw = spec.split(":")
        start, stop, step = float(start_raw), float(stop_raw), float(step_raw)
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=[f"bad offsets spec {spec!r}"]) from exc
    if step <= 0 or stop < start:
        raise HTTPException(status_code=422, detail=[f"bad offsets spec {spec!r}"])
    offsets = []
    value = start
    while value <= stop + 1e-9:
        offsets.append(round(value, 9))
        value += step
    return offsets
