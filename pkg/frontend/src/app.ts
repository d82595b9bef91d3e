import { ApiClient, ApiError } from "./api.js";
import { clear, h } from "./dom.js";
import { showDangerBanner } from "./views/banner.js";
import { renderClearanceForm, renderClearanceResult, showFieldErrors } from "./views/clearance.js";
import { FeedView } from "./views/feed.js";
import { renderGantt } from "./views/gantt.js";
import { renderNetwork } from "./views/network.js";
import { highlightOffset, renderWhatIfPanel, showSweepResult } from "./views/whatif.js";
import type { CommandRequest, MapPayload, StatePayload, TimelinePayload } from "./types.js";

const ROUTE_COLORS = ["#4669b2", "#7b5fb4", "#2c8c8c", "#a85f8e", "#5f7d3c", "#b07840"];

/** Wires the console together against one service. */
export class ConsoleApp {
  private mapPayload: MapPayload | null = null;
  private state: StatePayload | null = null;
  private lastChecked: CommandRequest | null = null;
  private overlay: TimelinePayload | null = null;
  private readonly feed = new FeedView();

  constructor(
    private readonly api: ApiClient,
    private readonly root: HTMLElement,
  ) {}

  async start(): Promise<void> {
    clear(this.root);
    const formArea = h("fieldset", { class: "panel form-panel" });
    const resultArea = h("div", { class: "panel result-panel", "data-role": "result-area" });
    const networkArea = h("div", { class: "panel network-panel", "data-role": "network-area" });
    const ganttArea = h("div", { class: "panel gantt-panel", "data-role": "gantt-area" });
    const whatifArea = h("fieldset", { class: "panel whatif-area" });

    const form = renderClearanceForm({
      onWhatIf: (command) => void this.checkCommand(command, resultArea, form),
      onIssue: (command) => void this.issueCommand(command, resultArea, form),
    });
    formArea.append(h("h3", {}, "New clearance"), form);

    const whatifPanel = renderWhatIfPanel({
      onExplore: (offset) => void this.explore(offset, whatifPanel),
    });
    whatifArea.append(whatifPanel);

    this.root.append(
      h("header", {}, h("h1", {}, "taxiwarn console")),
      h("div", { class: "layout" }, formArea, resultArea, networkArea, ganttArea, whatifArea, this.feed.element),
    );

    this.mapPayload = await this.api.getMap();
    await this.refreshState();

    this.api.subscribeEvents((event) => {
      this.feed.append(event);
      if (event.type === "conflict-updated" || event.type === "calibration-swapped") {
        void this.refreshState();
      }
    });
  }

  private async refreshState(): Promise<void> {
    this.state = await this.api.getState();
    this.renderBoard();
  }

  private renderBoard(): void {
    if (!this.mapPayload || !this.state) return;
    const networkArea = this.root.querySelector('[data-role="network-area"]');
    const ganttArea = this.root.querySelector('[data-role="gantt-area"]');
    if (!networkArea || !ganttArea) return;

    const timelines = Object.values(this.state.commands);
    const routes = timelines.map((timeline, i) => ({
      commandId: timeline.command_id,
      route: timeline.entries.map((entry) => entry.taxiway_id),
      color: ROUTE_COLORS[i % ROUTE_COLORS.length] ?? "#4669b2",
    }));
    clear(networkArea as Element);
    networkArea.append(renderNetwork(this.mapPayload, routes, this.state.conflicts));
    clear(ganttArea as Element);
    ganttArea.append(renderGantt(timelines, this.overlay ?? undefined));
  }

  private async checkCommand(command: CommandRequest, resultArea: Element, form: HTMLFormElement): Promise<void> {
    showFieldErrors(form, []);
    try {
      const response = await this.api.whatIf(command);
      this.lastChecked = command;
      this.overlay = response.timeline;
      clear(resultArea);
      resultArea.append(renderClearanceResult(response, "What-if (not issued)"));
      this.renderBoard();
    } catch (error) {
      this.handleApiError(error, form);
    }
  }

  private async issueCommand(command: CommandRequest, resultArea: Element, form: HTMLFormElement): Promise<void> {
    showFieldErrors(form, []);
    try {
      const response = await this.api.registerCommand(command);
      this.overlay = null;
      clear(resultArea);
      resultArea.append(renderClearanceResult(response, `Issued ${response.command_id}`));
      if (response.highest_level === "danger") {
        showDangerBanner(this.root, response.action.text);
      }
      await this.refreshState();
    } catch (error) {
      this.handleApiError(error, form);
    }
  }

  private async explore(offsetS: number, panel: HTMLElement): Promise<void> {
    if (!this.lastChecked || !this.state) return;
    const against = Object.keys(this.state.commands).sort()[0];
    if (!against) return;
    const response = await this.api.whatIf(this.lastChecked, { versus: against });
    if (response.sweep) {
      showSweepResult(panel, response.sweep);
      highlightOffset(panel, offsetS);
    }
  }

  private handleApiError(error: unknown, form: HTMLFormElement): void {
    if (error instanceof ApiError) {
      showFieldErrors(form, error.details);
      return;
    }
    throw error;
  }
}
