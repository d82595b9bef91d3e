import { readFileSync, readdirSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type { MapPayload, RegisterResponse, StatePayload, WhatIfResponse } from "../src/types.js";

const FIXTURE_DIR = join(dirname(fileURLToPath(import.meta.url)), "fixtures");

export interface ScenarioFixture {
  name: string;
  register: { request: Record<string, unknown>; status: number; response: RegisterResponse }[];
  whatif: { request: Record<string, unknown>; status: number; response: WhatIfResponse } | null;
  state: StatePayload;
  events: { type: string; payload: Record<string, unknown> }[];
}

export function loadScenarios(): ScenarioFixture[] {
  return readdirSync(FIXTURE_DIR)
    .filter((name) => name.startsWith("scenario_"))
    .sort()
    .map((name) => JSON.parse(readFileSync(join(FIXTURE_DIR, name), "utf-8")) as ScenarioFixture);
}

export function loadMapFixture(): MapPayload {
  return JSON.parse(readFileSync(join(FIXTURE_DIR, "map.json"), "utf-8")) as MapPayload;
}

export function mount(): HTMLElement {
  document.body.innerHTML = "";
  const root = document.createElement("div");
  document.body.appendChild(root);
  return root;
}
