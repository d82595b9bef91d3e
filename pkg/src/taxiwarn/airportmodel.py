"""Taxiway network model: segments, nodes, geofences, routes and taxi commands.

The map is a small undirected graph. Segments are the edges (one per named
taxiway section, with a surveyed length in meters); nodes are junctions,
apron entries and runway exits. A segment may carry a geofence polygon in
(lat, lon) used to attribute track fixes to it; geofences must be convex and
pairwise non-overlapping so every fix lands on at most one taxiway.

A taxi command is an ordered list of taxiway ids plus a start time. Direction
of travel on each segment is implied by route order, which is what lets two
commands be compared structurally (same segment opposite ways = head-on).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from pathlib import Path

from .errors import CommandValidationError, MapValidationError
from .geo import GeodeticPosition

LatLon = tuple[float, float]


# --- polygon helpers (convex geofences in the lat/lon plane) ---


def point_in_polygon(lat: float, lon: float, polygon: list[LatLon]) -> bool:
    """Winding-number test; boundary points count as inside."""
    winding = 0
    n = len(polygon)
    for i in range(n):
        y1, x1 = polygon[i]
        y2, x2 = polygon[(i + 1) % n]
        cross = (x2 - x1) * (lat - y1) - (y2 - y1) * (lon - x1)
        if min(x1, x2) <= lon <= max(x1, x2) and min(y1, y2) <= lat <= max(y1, y2):
            if abs(cross) < 1e-15:
                return True  # on an edge
        if y1 <= lat:
            if y2 > lat and cross > 0:
                winding += 1
        elif y2 <= lat and cross < 0:
            winding -= 1
    return winding != 0


def convex_polygons_overlap(a: list[LatLon], b: list[LatLon]) -> bool:
    """Separating-axis test for two convex polygons; shared edges do not count."""

    def axes(poly: list[LatLon]):
        for i in range(len(poly)):
            y1, x1 = poly[i]
            y2, x2 = poly[(i + 1) % len(poly)]
            yield (-(y2 - y1), x2 - x1)  # normal of the edge in (x, y) = (lon, lat)

    def project(poly: list[LatLon], ax: tuple[float, float]) -> tuple[float, float]:
        vals = [ax[0] * lon + ax[1] * lat for lat, lon in poly]
        return min(vals), max(vals)

    for ax in list(axes(a)) + list(axes(b)):
        lo_a, hi_a = project(a, ax)
        lo_b, hi_b = project(b, ax)
        if hi_a <= lo_b + 1e-15 or hi_b <= lo_a + 1e-15:
            return False
    return True


# --- map model ---


@dataclass(frozen=True)
class TaxiSegment:
    """One taxiway section: an undirected edge with a length and optional geofence."""

    taxiway_id: str
    length_m: float
    endpoints: tuple[str, str]
    geofence: tuple[LatLon, ...] | None = None

    def __post_init__(self):
        if self.length_m <= 0:
            raise ValueError(f"segment {self.taxiway_id}: length must be positive")
        if self.endpoints[0] == self.endpoints[1]:
            raise ValueError(f"segment {self.taxiway_id}: endpoints must be distinct")

    def other_end(self, node_id: str) -> str:
        a, b = self.endpoints
        return b if node_id == a else a


@dataclass
class AirportMap:
    """Validated taxiway network with node positions and derived adjacency."""

    segments: dict[str, TaxiSegment]
    nodes: dict[str, GeodeticPosition]
    adjacency: dict[str, list[str]] = field(default_factory=dict)  # node -> segment ids

    @classmethod
    def build(cls, segments: list[TaxiSegment], nodes: dict[str, GeodeticPosition]) -> "AirportMap":
        """Construct and validate; raises MapValidationError listing every problem."""
        problems: list[str] = []
        seg_map: dict[str, TaxiSegment] = {}
        for seg in segments:
            if seg.taxiway_id in seg_map:
                problems.append(f"duplicate segment id {seg.taxiway_id!r}")
            seg_map[seg.taxiway_id] = seg
            for node_id in seg.endpoints:
                if node_id not in nodes:
                    problems.append(f"segment {seg.taxiway_id!r} references unknown node {node_id!r}")

        adjacency: dict[str, list[str]] = {node_id: [] for node_id in nodes}
        for seg in seg_map.values():
            for node_id in seg.endpoints:
                if node_id in adjacency:
                    adjacency[node_id].append(seg.taxiway_id)

        # Connectivity over the nodes actually touched by segments.
        touched = {n for seg in seg_map.values() for n in seg.endpoints if n in nodes}
        if touched:
            seen = set()
            stack = [next(iter(sorted(touched)))]
            while stack:
                node_id = stack.pop()
                if node_id in seen:
                    continue
                seen.add(node_id)
                for seg_id in adjacency.get(node_id, []):
                    stack.append(seg_map[seg_id].other_end(node_id))
            unreachable = sorted(touched - seen)
            if unreachable:
                problems.append(f"graph is disconnected; unreachable nodes: {', '.join(unreachable)}")

        fenced = [seg for seg in seg_map.values() if seg.geofence]
        for i, seg_a in enumerate(fenced):
            for seg_b in fenced[i + 1 :]:
                if convex_polygons_overlap(list(seg_a.geofence), list(seg_b.geofence)):
                    problems.append(
                        f"geofences of {seg_a.taxiway_id!r} and {seg_b.taxiway_id!r} overlap"
                    )

        if problems:
            raise MapValidationError(problems)
        return cls(segments=seg_map, nodes=dict(nodes), adjacency=adjacency)

    def segment(self, taxiway_id: str) -> TaxiSegment:
        return self.segments[taxiway_id]

    def to_json_dict(self) -> dict:
        return {
            "nodes": [
                {"id": node_id, "lat": pos.latitude_deg, "lon": pos.longitude_deg}
                for node_id, pos in sorted(self.nodes.items())
            ],
            "segments": [
                {
                    "id": seg.taxiway_id,
                    "length_m": seg.length_m,
                    "from": seg.endpoints[0],
                    "to": seg.endpoints[1],
                    **({"geofence": [list(v) for v in seg.geofence]} if seg.geofence else {}),
                }
                for seg in sorted(self.segments.values(), key=lambda s: s.taxiway_id)
            ],
        }


def load_map(source: str | Path | dict) -> AirportMap:
    """Load and validate a map from a JSON file or an already-parsed dict.

    Schema: {nodes: [{id, lat, lon}], segments: [{id, length_m, from, to,
    geofence: [[lat, lon], ...]?}]}.
    """
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as fh:
            doc = json.load(fh)
    else:
        doc = source

    try:
        nodes = {
            str(item["id"]): GeodeticPosition(float(item["lat"]), float(item["lon"]))
            for item in doc["nodes"]
        }
        segments = [
            TaxiSegment(
                taxiway_id=str(item["id"]),
                length_m=float(item["length_m"]),
                endpoints=(str(item["from"]), str(item["to"])),
                geofence=tuple((float(v[0]), float(v[1])) for v in item["geofence"])
                if item.get("geofence")
                else None,
            )
            for item in doc["segments"]
        ]
    except (KeyError, TypeError, ValueError) as exc:
        raise MapValidationError([f"malformed map document: {exc}"]) from exc
    return AirportMap.build(segments, nodes)


# --- taxi commands ---


@dataclass(frozen=True)
class TaxiCommand:
    """A clearance: aircraft, ordered taxiway route, and start-of-taxi time."""

    command_id: str
    icao24: str
    route: tuple[str, ...]
    start_time: datetime

    @classmethod
    def make(cls, command_id: str, icao24: str, route: list[str] | tuple[str, ...], start_time: datetime) -> "TaxiCommand":
        return cls(command_id=command_id, icao24=icao24, route=tuple(route), start_time=start_time)


def validate_command(cmd: TaxiCommand, airport: AirportMap) -> list[str]:
    """Return the list of routing violations (empty list means the command is valid).

    Checks: non-empty route, every segment exists, no segment repeated,
    consecutive segments share a node, and the walk never revisits a node.
    """
    violations: list[str] = []
    if not cmd.route:
        violations.append("route is empty")
        return violations

    missing = [seg_id for seg_id in cmd.route if seg_id not in airport.segments]
    for seg_id in missing:
        violations.append(f"route references unknown taxiway {seg_id!r}")
    if missing:
        return violations

    seen: set[str] = set()
    for seg_id in cmd.route:
        if seg_id in seen:
            violations.append(f"taxiway {seg_id!r} repeated in route")
        seen.add(seg_id)

    for first, second in zip(cmd.route, cmd.route[1:]):
        ends_a = set(airport.segment(first).endpoints)
        ends_b = set(airport.segment(second).endpoints)
        if not ends_a & ends_b:
            violations.append(f"taxiways {first!r} and {second!r} are not adjacent")

    if not violations:
        try:
            nodes = walk_nodes(cmd, airport)
        except CommandValidationError as exc:
            violations.extend(exc.violations)
        else:
            revisited = sorted({n for n in nodes if nodes.count(n) > 1})
            for node_id in revisited:
                violations.append(f"route revisits node {node_id!r}")
    return violations


def walk_nodes(cmd: TaxiCommand, airport: AirportMap) -> list[str]:
    """Node sequence [n0, n1, ..., nk] implied by route order.

    Segment i runs n_(i-1) -> n_i. A single-segment route has no orientation
    cue, so it is taken in the map's declared from->to direction.
    """
    route = cmd.route
    if len(route) == 1:
        seg = airport.segment(route[0])
        return [seg.endpoints[0], seg.endpoints[1]]

    first, second = airport.segment(route[0]), airport.segment(route[1])
    shared = set(first.endpoints) & set(second.endpoints)
    if not shared:
        raise CommandValidationError([f"taxiways {route[0]!r} and {route[1]!r} are not adjacent"])
    exit_node = sorted(shared)[0]
    nodes = [first.other_end(exit_node), exit_node]
    for seg_id in route[1:]:
        seg = airport.segment(seg_id)
        if nodes[-1] not in seg.endpoints:
            raise CommandValidationError([f"taxiway {seg_id!r} does not continue from node {nodes[-1]!r}"])
        nodes.append(seg.other_end(nodes[-1]))
    return nodes


# --- structural relations between two routes ---


class Relation(str, Enum):
    CROSS = "cross"
    CONFRONTATION = "confrontation"
    REAR_END = "rear_end"


@dataclass(frozen=True)
class SharedFeature:
    """A place two routes can meet: a shared segment or a shared node."""

    kind: str  # "segment" | "node"
    feature_id: str
    relation: Relation


def shared_features(a: TaxiCommand, b: TaxiCommand, airport: AirportMap) -> list[SharedFeature]:
    """Shared segments and nodes of two commands, with the conflict relation.

    Same segment traversed in opposite directions is a confrontation, in the
    same direction a rear-end; a node reached by both routes (that is not an
    endpoint of a shared segment) is a crossing. Symmetric in its arguments.
    """
    nodes_a = walk_nodes(a, airport)
    nodes_b = walk_nodes(b, airport)
    dir_a = {seg: (nodes_a[i], nodes_a[i + 1]) for i, seg in enumerate(a.route)}
    dir_b = {seg: (nodes_b[i], nodes_b[i + 1]) for i, seg in enumerate(b.route)}

    features: list[SharedFeature] = []
    shared_segments = sorted(set(a.route) & set(b.route))
    for seg_id in shared_segments:
        relation = Relation.REAR_END if dir_a[seg_id] == dir_b[seg_id] else Relation.CONFRONTATION
        features.append(SharedFeature(kind="segment", feature_id=seg_id, relation=relation))

    covered = {node for seg_id in shared_segments for node in airport.segment(seg_id).endpoints}
    for node_id in sorted(set(nodes_a) & set(nodes_b) - covered):
        features.append(SharedFeature(kind="node", feature_id=node_id, relation=Relation.CROSS))
    return features
