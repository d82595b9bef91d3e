#!/usr/bin/env python3
"""Record real service responses as console test fixtures.

Each scenario spins up the service with a known calibration, plays a short
session through the HTTP API, and captures the exact JSON payloads the
console would receive. The API-echo tests then compare rendered DOM values
against these fixtures, so the console can never drift from the service.

Run from the repo root:  python3 frontend/scripts/record_fixtures.py
"""

from __future__ import annotations

import json
from pathlib import Path

from fastapi.testclient import TestClient

from taxiwarn.airportmodel import load_map
from taxiwarn.bundled import bundled_map_path
from taxiwarn.calibration import BAND_ORDER, CalibrationEntry, CalibrationSet, SpeedInterval
from taxiwarn.service import ServiceConfig, create_app

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "tests" / "fixtures"


def flat_calibration(lo_kn: float, hi_kn: float) -> dict:
    airport = load_map(bundled_map_path())
    entries = {}
    for taxiway_id in airport.segments:
        interval = SpeedInterval(lo_kn, hi_kn, 100, (lo_kn + hi_kn) / 2, max((hi_kn - lo_kn) / 6, 0.01))
        entries[taxiway_id] = CalibrationEntry(
            taxiway_id=taxiway_id,
            pauta=interval,
            bands={band: interval for band in BAND_ORDER},
            fallback_bands=frozenset(),
        )
    return CalibrationSet(entries, {"day_window": "06:00-18:00", "min_samples": 30}).to_json_dict()


def fallback_calibration() -> dict:
    """Weekend bands flagged as fallbacks, to exercise the fallback markers."""
    doc = flat_calibration(9.0, 15.0)
    for body in doc["taxiways"].values():
        body["fallback_bands"] = ["wed", "wen"]
    return doc


def make_client(tmp_dir: Path, calibration: dict, events_log: list) -> TestClient:
    cal_path = tmp_dir / "cal.json"
    cal_path.write_text(json.dumps(calibration))
    app = create_app(ServiceConfig(map_path=str(bundled_map_path()), calibration_path=str(cal_path)))
    broker = app.state.broker
    original = broker.publish

    def tee(event_type: str, payload: dict) -> None:
        events_log.append({"type": event_type, "payload": payload})
        original(event_type, payload)

    broker.publish = tee
    return TestClient(app)


def cmd(command_id: str, route: list[str], start: str, icao: str = "780201") -> dict:
    return {"command_id": command_id, "icao24": icao, "route": route, "start_time": start}


T0 = "2024-03-09T10:00:00Z"


def record(tmp_dir: Path) -> None:
    FIXTURE_DIR.mkdir(parents=True, exist_ok=True)
    scenarios = []

    def run(name: str, calibration: dict, steps):
        events: list = []
        client = make_client(tmp_dir, calibration, events)
        registers = []
        whatif = None
        for kind, payload in steps:
            if kind == "register":
                response = client.post("/api/commands", json=payload)
                registers.append({"request": payload, "status": response.status_code, "response": response.json()})
            elif kind == "whatif":
                response = client.post("/api/whatif", json=payload)
                whatif = {"request": payload, "status": response.status_code, "response": response.json()}
            elif kind == "remove":
                client.delete(f"/api/commands/{payload}")
        doc = {
            "name": name,
            "register": registers,
            "whatif": whatif,
            "state": client.get("/api/state").json(),
            "events": events,
        }
        path = FIXTURE_DIR / f"scenario_{len(scenarios):02d}_{name}.json"
        path.write_text(json.dumps(doc, indent=2) + "\n")
        scenarios.append(path.name)
        return doc

    wide = flat_calibration(7.776, 15.552)
    narrow = flat_calibration(11.5, 12.5)
    point = flat_calibration(12.0, 12.0)

    run("single-low", wide, [("register", cmd("A1", ["P", "C"], T0))])
    run(
        "cross-pair",
        wide,
        [
            ("register", cmd("A1", ["P", "C"], T0)),
            ("register", cmd("B1", ["C1", "B-4"], "2024-03-09T10:00:20Z", "780202")),
        ],
    )
    doc = run(
        "cross-high",
        narrow,
        [
            ("register", cmd("A1", ["P", "C"], T0)),
            ("register", cmd("B1", ["C1", "B-4"], "2024-03-09T10:00:33Z", "780202")),
        ],
    )
    assert doc["register"][1]["response"]["highest_level"] == "high", doc["register"][1]["response"]["highest_level"]
    doc = run(
        "head-on-danger",
        point,
        [
            ("register", cmd("A1", ["B-2", "B-4", "B-6"], T0)),
            ("register", cmd("B1", ["B-8", "B-6", "B-4"], "2024-03-09T10:00:08Z", "780202")),
        ],
    )
    assert doc["register"][1]["response"]["highest_level"] == "danger", doc["register"][1]["response"]["highest_level"]
    run(
        "rear-end-pair",
        narrow,
        [
            ("register", cmd("A1", ["B-2", "B-4"], T0)),
            ("register", cmd("B1", ["B-2", "B-4"], "2024-03-09T10:00:10Z", "780202")),
        ],
    )
    run(
        "disjoint-pair",
        wide,
        [
            ("register", cmd("A1", ["B-1"], T0)),
            ("register", cmd("B1", ["N"], T0, "780202")),
        ],
    )
    run(
        "sweep-ladder",
        narrow,
        [
            ("register", cmd("A1", ["P", "C"], T0)),
            (
                "whatif",
                {
                    "command": cmd("W1", ["C1", "B-4"], "2024-03-09T09:59:20Z", "780203"),
                    "sweep": {"versus": "A1", "offsets": "0:100:5"},
                },
            ),
        ],
    )
    run(
        "three-commands",
        wide,
        [
            ("register", cmd("A1", ["P", "C"], T0)),
            ("register", cmd("B1", ["C1", "B-4"], "2024-03-09T10:00:30Z", "780202")),
            ("register", cmd("C1", ["B-1", "B-2"], "2024-03-09T10:01:00Z", "780203")),
        ],
    )
    doc = run(
        "intermediate-pair",
        narrow,
        [
            ("register", cmd("A1", ["P", "C"], T0)),
            ("register", cmd("B1", ["C1", "B-4"], "2024-03-09T10:00:22Z", "780202")),
        ],
    )
    assert doc["register"][1]["response"]["highest_level"] == "intermediate", doc["register"][1]["response"]["highest_level"]
    run(
        "fallback-weekend",
        fallback_calibration(),
        [("register", cmd("A1", ["P", "C", "C6"], T0))],  # Saturday start: weekend band, flagged
    )

    # shared one-off payloads
    events: list = []
    client = make_client(tmp_dir, wide, events)
    (FIXTURE_DIR / "map.json").write_text(json.dumps(client.get("/api/map").json(), indent=2) + "\n")
    (FIXTURE_DIR / "index.json").write_text(json.dumps({"scenarios": scenarios}, indent=2) + "\n")
    print(f"recorded {len(scenarios)} scenarios into {FIXTURE_DIR}")


if __name__ == "__main__":
    import tempfile

    with tempfile.TemporaryDirectory() as tmp:
        record(Path(tmp))
