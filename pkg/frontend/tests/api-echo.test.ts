// Every probability, level, interval bound and action string rendered by the
// console must equal the originating API payload, across ten recorded
// service sessions. Values are compared through data-* echo attributes.

import { describe, expect, it } from "vitest";

import { renderClearanceResult } from "../src/views/clearance.js";
import { renderGantt } from "../src/views/gantt.js";
import { showSweepResult, renderWhatIfPanel } from "../src/views/whatif.js";
import { loadScenarios, mount } from "./helpers.js";

const scenarios = loadScenarios();

describe("API echo over recorded scenarios", () => {
  it("covers ten recorded scenarios", () => {
    expect(scenarios.length).toBe(10);
  });

  for (const scenario of scenarios) {
    describe(scenario.name, () => {
      it("echoes every register response exactly", () => {
        const root = mount();
        for (const step of scenario.register) {
          if (step.status !== 201) continue;
          const panel = renderClearanceResult(step.response);
          root.appendChild(panel);

          // highest level and action text, verbatim
          expect(panel.dataset.level).toBe(step.response.highest_level);
          expect(panel.querySelector('[data-role="highest-level"]')?.textContent).toBe(
            step.response.highest_level,
          );
          const action = panel.querySelector('[data-role="action"]') as HTMLElement;
          expect(action.textContent).toBe(step.response.action.text);
          expect(action.dataset.mustModify).toBe(String(step.response.action.must_modify));
          expect(action.dataset.immediate).toBe(String(step.response.action.immediate));

          // every timeline entry bound equals the payload number exactly
          const rows = panel.querySelectorAll('[data-role="timeline-entry"]');
          expect(rows.length).toBe(step.response.timeline.entries.length);
          step.response.timeline.entries.forEach((entry, i) => {
            const row = rows[i] as HTMLElement;
            expect(row.dataset.taxiway).toBe(entry.taxiway_id);
            expect(row.dataset.node).toBe(entry.node);
            expect(Number(row.dataset.loS)).toBe(entry.lo_s);
            expect(Number(row.dataset.hiS)).toBe(entry.hi_s);
            expect(row.dataset.fallback).toBe(String(entry.fallback));
          });

          // per-conflict and per-feature numbers
          const conflictEls = panel.querySelectorAll('[data-role="conflict"]');
          expect(conflictEls.length).toBe(step.response.conflicts.length);
          step.response.conflicts.forEach((conflict, i) => {
            const el = conflictEls[i] as HTMLElement;
            expect(Number(el.dataset.p)).toBe(conflict.overall.p);
            expect(el.dataset.level).toBe(conflict.overall.level);
            const featureEls = el.querySelectorAll('[data-role="feature"]');
            expect(featureEls.length).toBe(conflict.features.length);
            conflict.features.forEach((feature, j) => {
              const fe = featureEls[j] as HTMLElement;
              expect(fe.dataset.feature).toBe(feature.feature);
              expect(fe.dataset.relation).toBe(feature.relation);
              expect(Number(fe.dataset.gapLo)).toBe(feature.gap[0]);
              expect(Number(fe.dataset.gapHi)).toBe(feature.gap[1]);
              expect(Number(fe.dataset.tNo)).toBe(feature.t_no);
              expect(Number(fe.dataset.p)).toBe(feature.p);
            });
          });
        }
      });

      it("echoes gantt bar endpoints exactly", () => {
        const root = mount();
        const timelines = Object.values(scenario.state.commands);
        if (timelines.length === 0) return;
        root.appendChild(renderGantt(timelines));
        for (const timeline of timelines) {
          const bars = root.querySelectorAll(
            `[data-role="gantt-bar"][data-command="${timeline.command_id}"]`,
          );
          expect(bars.length).toBe(timeline.entries.length);
          timeline.entries.forEach((entry, i) => {
            const bar = bars[i] as HTMLElement;
            expect(Number(bar.dataset.loS)).toBe(entry.lo_s);
            expect(Number(bar.dataset.hiS)).toBe(entry.hi_s);
            expect(bar.dataset.taxiway).toBe(entry.taxiway_id);
          });
        }
      });

      it("echoes what-if sweep rows exactly", () => {
        if (!scenario.whatif || !scenario.whatif.response.sweep) return;
        const root = mount();
        const panel = renderWhatIfPanel({ onExplore: () => {} });
        root.appendChild(panel);
        showSweepResult(panel, scenario.whatif.response.sweep);
        const rows = panel.querySelectorAll('[data-role="sweep-row"]');
        expect(rows.length).toBe(scenario.whatif.response.sweep.length);
        scenario.whatif.response.sweep.forEach((row, i) => {
          const el = rows[i] as HTMLElement;
          expect(Number(el.dataset.offsetS)).toBe(row.offset_s);
          expect(Number(el.dataset.p)).toBe(row.probability);
          expect(el.dataset.level).toBe(row.level);
        });
      });
    });
  }

  it("renders displayed text as pure formatting of the echoed values", () => {
    const scenario = scenarios.find((s) => s.register.length >= 2);
    expect(scenario).toBeDefined();
    const root = mount();
    const step = scenario!.register[1]!;
    root.appendChild(renderClearanceResult(step.response));
    for (const el of root.querySelectorAll<HTMLElement>('[data-role="conflict"]')) {
      const percent = ((Number(el.dataset.p) ?? 0) * 100).toFixed(2);
      expect(el.textContent).toContain(`${percent}%`);
    }
  });
});
