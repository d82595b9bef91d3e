import { h } from "../dom.js";
import { epochSeconds, formatProbability, formatWindow } from "../format.js";
import { LEVEL_COLORS } from "../severity.js";
import type { CommandRequest, ConflictPayload, RegisterResponse, TimelinePayload } from "../types.js";

export interface ClearanceFormHandlers {
  onWhatIf: (command: CommandRequest) => void;
  onIssue: (command: CommandRequest) => void;
}

function readCommand(form: HTMLFormElement): CommandRequest {
  const data = new FormData(form);
  return {
    command_id: String(data.get("command_id") ?? "").trim(),
    icao24: String(data.get("icao24") ?? "").trim(),
    route: String(data.get("route") ?? "")
      .split(",")
      .map((part) => part.trim())
      .filter((part) => part.length > 0),
    start_time: String(data.get("start_time") ?? "").trim(),
  };
}

/**
 * Clearance entry form. "Check" runs a what-if (never mutates); issuing asks
 * for a second, explicit confirmation click before anything is sent.
 */
export function renderClearanceForm(handlers: ClearanceFormHandlers): HTMLFormElement {
  const form = h("form", { class: "clearance-form", novalidate: true });
  form.append(
    labelled("Command id", h("input", { name: "command_id", required: true, placeholder: "A1" })),
    labelled("Aircraft (icao24)", h("input", { name: "icao24", required: true, placeholder: "780201" })),
    labelled("Route (comma separated)", h("input", { name: "route", required: true, placeholder: "P,C,C6,B-8" })),
    labelled("Start of taxi (UTC)", h("input", { name: "start_time", required: true, placeholder: "2024-03-09T10:00:00Z" })),
    h("div", { class: "field-errors", "data-role": "field-errors" }),
  );

  const checkButton = h("button", { type: "button", class: "check" }, "Check (what-if)");
  checkButton.addEventListener("click", () => handlers.onWhatIf(readCommand(form)));

  const issueButton = h("button", { type: "button", class: "issue", "data-armed": "false" }, "Issue clearance");
  issueButton.addEventListener("click", () => {
    if (issueButton.dataset.armed !== "true") {
      issueButton.dataset.armed = "true";
      issueButton.textContent = "Confirm issue?";
      return;
    }
    issueButton.dataset.armed = "false";
    issueButton.textContent = "Issue clearance";
    handlers.onIssue(readCommand(form));
  });
  form.addEventListener("input", () => {
    issueButton.dataset.armed = "false";
    issueButton.textContent = "Issue clearance";
  });

  form.append(h("div", { class: "buttons" }, checkButton, issueButton));
  return form;
}

function labelled(text: string, input: HTMLElement): HTMLElement {
  return h("label", {}, h("span", {}, text), input);
}

export function showFieldErrors(form: HTMLFormElement, details: string[]): void {
  const box = form.querySelector('[data-role="field-errors"]');
  if (!box) return;
  box.textContent = "";
  for (const detail of details) {
    box.append(h("p", { class: "field-error" }, detail));
  }
}

function timelineTable(timeline: TimelinePayload): HTMLElement {
  const start = epochSeconds(timeline.start_time);
  const rows = timeline.entries.map((entry) =>
    h(
      "tr",
      {
        "data-role": "timeline-entry",
        "data-taxiway": entry.taxiway_id,
        "data-node": entry.node,
        "data-lo-s": String(entry.lo_s),
        "data-hi-s": String(entry.hi_s),
        "data-fallback": String(entry.fallback),
      },
      h("td", {}, entry.taxiway_id),
      h("td", {}, entry.node),
      h("td", {}, formatWindow(entry.lo_s, entry.hi_s, start)),
      h("td", {}, entry.fallback ? "fallback interval" : ""),
    ),
  );
  return h(
    "table",
    { class: "timeline", "data-command": timeline.command_id, "data-band": timeline.band },
    h("thead", {}, h("tr", {}, h("th", {}, "taxiway"), h("th", {}, "node"), h("th", {}, "arrival window"), h("th", {}, ""))),
    h("tbody", {}, ...rows),
  );
}

function conflictList(conflicts: ConflictPayload[]): HTMLElement {
  if (conflicts.length === 0) {
    return h("p", { class: "no-conflicts" }, "No conflicts with active clearances.");
  }
  const items = conflicts.map((conflict) => {
    const features = conflict.features.map((feature) =>
      h(
        "li",
        {
          "data-role": "feature",
          "data-feature": feature.feature,
          "data-kind": feature.kind,
          "data-relation": feature.relation,
          "data-gap-lo": String(feature.gap[0]),
          "data-gap-hi": String(feature.gap[1]),
          "data-t-no": String(feature.t_no),
          "data-p": String(feature.p),
        },
        `${feature.kind} ${feature.feature} (${feature.relation}): ` +
          `gap ${feature.gap[0].toFixed(2)}–${feature.gap[1].toFixed(2)} s, ` +
          `threshold ${feature.t_no} s, ${formatProbability(feature.p)}`,
      ),
    );
    return h(
      "li",
      {
        "data-role": "conflict",
        "data-pair": conflict.pair.join("|"),
        "data-p": String(conflict.overall.p),
        "data-level": conflict.overall.level,
      },
      h(
        "span",
        { class: "level-badge", style: `background:${LEVEL_COLORS[conflict.overall.level]}` },
        conflict.overall.level,
      ),
      ` vs ${conflict.pair.join(" / ")}: ${formatProbability(conflict.overall.p)}`,
      h("ul", {}, ...features),
    );
  });
  return h("ul", { class: "conflicts" }, ...items);
}

/** Result panel for a register or what-if response; values echo the payload. */
export function renderClearanceResult(response: RegisterResponse, title = "Result"): HTMLElement {
  return h(
    "section",
    {
      class: "clearance-result",
      "data-role": "clearance-result",
      "data-command": response.command_id,
      "data-level": response.highest_level,
    },
    h("h3", {}, title),
    h(
      "p",
      { class: "verdict" },
      h(
        "span",
        {
          class: "level-badge",
          "data-role": "highest-level",
          style: `background:${LEVEL_COLORS[response.highest_level]}`,
        },
        response.highest_level,
      ),
      " ",
      h(
        "span",
        {
          "data-role": "action",
          "data-must-modify": String(response.action.must_modify),
          "data-immediate": String(response.action.immediate),
        },
        response.action.text,
      ),
    ),
    timelineTable(response.timeline),
    conflictList(response.conflicts),
  );
}
