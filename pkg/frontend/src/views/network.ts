import { svgEl } from "../dom.js";
import { LEVEL_COLORS } from "../severity.js";
import type { ConflictPayload, MapPayload, WarningLevel } from "../types.js";

export interface RouteHighlight {
  commandId: string;
  route: string[];
  color: string;
}

interface XY {
  x: number;
  y: number;
}

/** Purely visual: project node lat/lon to a local planar frame and fit it. */
function project(map: MapPayload["map"], width: number, height: number): Map<string, XY> {
  const lats = map.nodes.map((n) => n.lat);
  const lons = map.nodes.map((n) => n.lon);
  const minLat = Math.min(...lats);
  const maxLat = Math.max(...lats);
  const minLon = Math.min(...lons);
  const maxLon = Math.max(...lons);
  const midLat = ((minLat + maxLat) / 2) * (Math.PI / 180);
  const spanX = Math.max((maxLon - minLon) * Math.cos(midLat), 1e-9);
  const spanY = Math.max(maxLat - minLat, 1e-9);
  const scale = Math.min((width - 60) / spanX, (height - 60) / spanY);
  const points = new Map<string, XY>();
  for (const node of map.nodes) {
    points.set(node.id, {
      x: 30 + (node.lon - minLon) * Math.cos(midLat) * scale,
      y: height - 30 - (node.lat - minLat) * scale,
    });
  }
  return points;
}

/**
 * Taxiway graph with per-command route highlights and conflict markers:
 * a ring on a node for crossings, a thick overlay along a segment for
 * confrontations and rear-ends, both colored by warning level.
 */
export function renderNetwork(
  mapPayload: MapPayload,
  routes: RouteHighlight[] = [],
  conflicts: ConflictPayload[] = [],
  width = 900,
  height = 600,
): SVGSVGElement {
  const map = mapPayload.map;
  const points = project(map, width, height);
  const svg = svgEl("svg", {
    viewBox: `0 0 ${width} ${height}`,
    class: "network-view",
    "data-role": "network",
    "data-epoch": mapPayload.epoch,
  });

  for (const segment of map.segments) {
    const a = points.get(segment.from);
    const b = points.get(segment.to);
    if (!a || !b) continue;
    svg.append(
      svgEl("line", {
        x1: a.x,
        y1: a.y,
        x2: b.x,
        y2: b.y,
        class: "segment",
        "data-segment": segment.id,
        stroke: "#8a8f98",
        "stroke-width": 4,
      }),
    );
  }

  for (const route of routes) {
    for (const segmentId of route.route) {
      const segment = map.segments.find((s) => s.id === segmentId);
      if (!segment) continue;
      const a = points.get(segment.from);
      const b = points.get(segment.to);
      if (!a || !b) continue;
      svg.append(
        svgEl("line", {
          x1: a.x,
          y1: a.y,
          x2: b.x,
          y2: b.y,
          class: "route-highlight",
          "data-route-of": route.commandId,
          "data-segment": segmentId,
          stroke: route.color,
          "stroke-width": 7,
          "stroke-opacity": 0.55,
        }),
      );
    }
  }

  for (const conflict of conflicts) {
    for (const feature of conflict.features) {
      const level: WarningLevel = conflict.overall.level;
      const color = LEVEL_COLORS[level];
      if (feature.kind === "node") {
        const at = points.get(feature.feature);
        if (!at) continue;
        svg.append(
          svgEl("circle", {
            cx: at.x,
            cy: at.y,
            r: 14,
            class: "conflict-marker",
            "data-feature": feature.feature,
            "data-kind": "node",
            "data-relation": feature.relation,
            "data-level": level,
            fill: "none",
            stroke: color,
            "stroke-width": 4,
          }),
        );
      } else {
        const segment = map.segments.find((s) => s.id === feature.feature);
        if (!segment) continue;
        const a = points.get(segment.from);
        const b = points.get(segment.to);
        if (!a || !b) continue;
        svg.append(
          svgEl("line", {
            x1: a.x,
            y1: a.y,
            x2: b.x,
            y2: b.y,
            class: "conflict-marker",
            "data-feature": feature.feature,
            "data-kind": "segment",
            "data-relation": feature.relation,
            "data-level": level,
            stroke: color,
            "stroke-width": 10,
            "stroke-opacity": 0.8,
            "stroke-dasharray": "14 8",
          }),
        );
      }
    }
  }

  for (const node of map.nodes) {
    const at = points.get(node.id);
    if (!at) continue;
    svg.append(
      svgEl("circle", { cx: at.x, cy: at.y, r: 5, class: "node", "data-node": node.id, fill: "#3b4252" }),
    );
    svg.append(
      svgEl("text", { x: at.x + 8, y: at.y - 8, class: "node-label", "font-size": 12 }, node.id),
    );
  }

  return svg;
}
