import type {
  CommandRequest,
  FeedEvent,
  MapPayload,
  RegisterResponse,
  StatePayload,
  WhatIfResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public details: string[],
  ) {
    super(details.join("; ") || `HTTP ${status}`);
  }
}

async function parseError(response: Response): Promise<never> {
  let details: string[] = [];
  try {
    const body = await response.json();
    details = Array.isArray(body.detail) ? body.detail.map(String) : [String(body.detail)];
  } catch {
    details = [response.statusText];
  }
  throw new ApiError(response.status, details);
}

/** Thin typed client; every number the console shows comes through here. */
export class ApiClient {
  constructor(private baseUrl: string = "") {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      method,
      headers: body !== undefined ? { "Content-Type": "application/json" } : undefined,
      body: body !== undefined ? JSON.stringify(body) : undefined,
    });
    if (!response.ok) await parseError(response);
    return (await response.json()) as T;
  }

  getMap(): Promise<MapPayload> {
    return this.request("GET", "/api/map");
  }

  getState(): Promise<StatePayload> {
    return this.request("GET", "/api/state");
  }

  registerCommand(command: CommandRequest): Promise<RegisterResponse> {
    return this.request("POST", "/api/commands", command);
  }

  removeCommand(commandId: string): Promise<{ removed: string; remaining: string[] }> {
    return this.request("DELETE", `/api/commands/${encodeURIComponent(commandId)}`);
  }

  whatIf(
    command: CommandRequest,
    sweep?: { versus: string; offsets?: string },
  ): Promise<WhatIfResponse> {
    return this.request("POST", "/api/whatif", { command, sweep: sweep ?? null });
  }

  /** Subscribe to the event stream; EventSource reconnects on its own. */
  subscribeEvents(onEvent: (event: FeedEvent) => void, onStatus?: (open: boolean) => void): () => void {
    const source = new EventSource(this.baseUrl + "/api/events");
    const types = ["command-added", "conflict-updated", "command-removed", "calibration-swapped", "dropped"];
    for (const type of types) {
      source.addEventListener(type, (raw) => {
        onEvent({ type, payload: JSON.parse((raw as MessageEvent).data) });
      });
    }
    source.onopen = () => onStatus?.(true);
    source.onerror = () => onStatus?.(false);
    return () => source.close();
  }
}
