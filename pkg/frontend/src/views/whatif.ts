import { h } from "../dom.js";
import { formatProbability } from "../format.js";
import { LEVEL_COLORS } from "../severity.js";
import type { SweepRowPayload } from "../types.js";

export interface WhatIfHandlers {
  /** Called on slider movement; must only run a what-if, never a mutation. */
  onExplore: (offsetS: number) => void;
}

const OFFSET_MIN = 0;
const OFFSET_MAX = 100;
const OFFSET_STEP = 5;

/** Offset slider, 0–100 s in 5 s steps: exactly 21 stops. */
export function renderWhatIfPanel(handlers: WhatIfHandlers): HTMLElement {
  const stops: number[] = [];
  for (let v = OFFSET_MIN; v <= OFFSET_MAX; v += OFFSET_STEP) stops.push(v);

  const slider = h("input", {
    type: "range",
    min: String(OFFSET_MIN),
    max: String(OFFSET_MAX),
    step: String(OFFSET_STEP),
    value: "0",
    list: "whatif-stops",
    "data-role": "offset-slider",
    "data-stops": String(stops.length),
  }) as HTMLInputElement;
  const datalist = h("datalist", { id: "whatif-stops" }, ...stops.map((v) => h("option", { value: String(v) })));

  const offsetLabel = h("span", { "data-role": "offset-label" }, "+0 s");
  const readout = h("div", { class: "whatif-readout", "data-role": "whatif-readout" }, "move the slider to explore");

  slider.addEventListener("input", () => {
    offsetLabel.textContent = `+${slider.value} s`;
    handlers.onExplore(Number(slider.value));
  });

  const panel = h(
    "section",
    { class: "whatif-panel", "data-role": "whatif-panel" },
    h("h3", {}, "What-if: delay the new clearance"),
    h("div", { class: "slider-row" }, slider, offsetLabel),
    datalist,
    readout,
  );
  return panel;
}

/** Update the readout with the sweep rows returned by the service. */
export function showSweepResult(panel: HTMLElement, rows: SweepRowPayload[]): void {
  const readout = panel.querySelector('[data-role="whatif-readout"]');
  if (!readout) return;
  readout.textContent = "";
  const list = h("ul", { class: "sweep-rows" });
  for (const row of rows) {
    list.append(
      h(
        "li",
        {
          "data-role": "sweep-row",
          "data-offset-s": String(row.offset_s),
          "data-p": String(row.probability),
          "data-level": row.level,
        },
        h("span", { class: "offset" }, `+${row.offset_s} s`),
        " ",
        h("span", { class: "prob" }, formatProbability(row.probability)),
        " ",
        h("span", { class: "level-badge", style: `background:${LEVEL_COLORS[row.level]}` }, row.level),
      ),
    );
  }
  readout.append(list);
}

/** Point the readout at the row matching the slider's current offset. */
export function highlightOffset(panel: HTMLElement, offsetS: number): void {
  panel.querySelectorAll('[data-role="sweep-row"]').forEach((el) => {
    el.classList.toggle("current", Number((el as HTMLElement).dataset.offsetS) === offsetS);
  });
}
