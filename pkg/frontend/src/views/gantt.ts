import { h } from "../dom.js";
import { epochSeconds, formatWindow } from "../format.js";
import type { TimelinePayload } from "../types.js";

/**
 * One row per command, one bar per segment spanning its arrival window
 * [lo, hi]. Bar geometry is pure layout; the exact payload seconds ride on
 * data attributes. A what-if timeline renders as a dashed overlay row.
 */
export function renderGantt(timelines: TimelinePayload[], overlay?: TimelinePayload): HTMLElement {
  const all = overlay ? [...timelines, overlay] : timelines;
  const starts = all.map((t) => epochSeconds(t.start_time));
  const ends = all.flatMap((t) => t.entries.map((e) => e.hi_s));
  const t0 = Math.min(...starts, ...(ends.length ? [Math.min(...ends)] : []));
  const t1 = Math.max(...ends, t0 + 1);
  const span = t1 - t0;

  const rowFor = (timeline: TimelinePayload, isOverlay: boolean): HTMLElement => {
    const row = h("div", {
      class: isOverlay ? "gantt-row overlay" : "gantt-row",
      "data-role": "gantt-row",
      "data-command": timeline.command_id,
      "data-overlay": String(isOverlay),
    });
    row.append(h("span", { class: "gantt-label" }, timeline.command_id));
    const lane = h("div", { class: "gantt-lane" });
    const start = epochSeconds(timeline.start_time);
    for (const entry of timeline.entries) {
      const left = ((entry.lo_s - t0) / span) * 100;
      const widthPct = Math.max(((entry.hi_s - entry.lo_s) / span) * 100, 0.2);
      lane.append(
        h(
          "div",
          {
            class: isOverlay ? "gantt-bar dashed" : "gantt-bar",
            style: `left:${left}%;width:${widthPct}%`,
            title: `${entry.taxiway_id} -> ${entry.node}: ${formatWindow(entry.lo_s, entry.hi_s, start)}`,
            "data-role": "gantt-bar",
            "data-command": timeline.command_id,
            "data-taxiway": entry.taxiway_id,
            "data-node": entry.node,
            "data-lo-s": String(entry.lo_s),
            "data-hi-s": String(entry.hi_s),
          },
          entry.taxiway_id,
        ),
      );
    }
    row.append(lane);
    return row;
  };

  const view = h("div", { class: "gantt", "data-role": "gantt", "data-t0": String(t0), "data-t1": String(t1) });
  for (const timeline of timelines) view.append(rowFor(timeline, false));
  if (overlay) view.append(rowFor(overlay, true));
  return view;
}
