import { clear, h } from "../dom.js";
import { LEVEL_COLORS, severityRank } from "../severity.js";
import type { ConflictPayload, FeedEvent, WarningLevel } from "../types.js";

function levelsIn(event: FeedEvent): WarningLevel[] {
  const conflicts = (event.payload as { conflicts?: ConflictPayload[] }).conflicts;
  if (!Array.isArray(conflicts)) return [];
  return conflicts.map((c) => c.overall.level);
}

/**
 * Live warning feed: a log in exact server order plus a toast strip sorted
 * most-severe-first. Feeding two views the same events renders identically.
 */
export class FeedView {
  readonly element: HTMLElement;
  private readonly log: HTMLElement;
  private readonly toasts: HTMLElement;
  private readonly events: FeedEvent[] = [];

  constructor() {
    this.log = h("ol", { class: "feed-log", "data-role": "feed-log" });
    this.toasts = h("div", { class: "toasts", "data-role": "toasts" });
    this.element = h(
      "section",
      { class: "feed", "data-role": "feed" },
      h("h3", {}, "Events"),
      this.toasts,
      this.log,
    );
  }

  append(event: FeedEvent): void {
    this.events.push(event);
    const index = this.events.length;
    const levels = levelsIn(event);
    const summary =
      event.type === "conflict-updated"
        ? `${event.type}: ${levels.length} conflict(s)${levels.length ? " [" + levels.join(", ") + "]" : ""}`
        : `${event.type}: ${String((event.payload as { command_id?: string }).command_id ?? "")}`;
    this.log.append(
      h(
        "li",
        { "data-role": "feed-entry", "data-index": String(index), "data-type": event.type },
        summary,
      ),
    );
    this.renderToasts();
  }

  private renderToasts(): void {
    clear(this.toasts);
    const warnings = this.events
      .flatMap((event, i) => levelsIn(event).map((level) => ({ level, order: i })))
      .filter(({ level }) => severityRank(level) > 0)
      .sort((a, b) => severityRank(b.level) - severityRank(a.level) || a.order - b.order)
      .slice(0, 5);
    for (const { level } of warnings) {
      this.toasts.append(
        h(
          "div",
          { class: "toast", "data-role": "toast", "data-level": level, style: `border-color:${LEVEL_COLORS[level]}` },
          `${level} warning`,
        ),
      );
    }
  }

  get orderedTypes(): string[] {
    return this.events.map((event) => event.type);
  }
}
