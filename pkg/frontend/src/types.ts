// Payload shapes of the service API. The console renders these verbatim;
// it never recomputes any of the numbers.

export interface TimelineEntryPayload {
  taxiway_id: string;
  node: string;
  lo_s: number;
  hi_s: number;
  fallback: boolean;
}

export interface TimelinePayload {
  command_id: string;
  start_time: string;
  start_node: string;
  band: string;
  entries: TimelineEntryPayload[];
  fallbacks: string[];
}

export interface FeaturePayload {
  feature: string;
  kind: "node" | "segment";
  relation: "cross" | "confrontation" | "rear_end";
  gap: [number, number];
  t_no: number;
  p: number;
}

export interface ActionPayload {
  text: string;
  must_modify: boolean;
  immediate: boolean;
}

export interface ConflictPayload {
  pair: [string, string];
  features: FeaturePayload[];
  overall: {
    p: number;
    level: WarningLevel;
    memberships: Record<string, number>;
    action: ActionPayload;
  };
}

export type WarningLevel = "low" | "intermediate" | "high" | "danger";

export interface RegisterResponse {
  command_id: string;
  timeline: TimelinePayload;
  conflicts: ConflictPayload[];
  highest_level: WarningLevel;
  action: ActionPayload;
}

export interface SweepRowPayload {
  offset_s: number;
  probability: number;
  level: WarningLevel;
}

export interface WhatIfResponse extends RegisterResponse {
  sweep: SweepRowPayload[] | null;
}

export interface StatePayload {
  map_epoch: string;
  calibration_epoch: string | null;
  commands: Record<string, TimelinePayload>;
  conflicts: ConflictPayload[];
  state_hash: string;
}

export interface MapNodePayload {
  id: string;
  lat: number;
  lon: number;
}

export interface MapSegmentPayload {
  id: string;
  length_m: number;
  from: string;
  to: string;
  geofence?: number[][];
}

export interface MapPayload {
  epoch: string;
  map: {
    nodes: MapNodePayload[];
    segments: MapSegmentPayload[];
  };
}

export interface FeedEvent {
  type: string;
  payload: Record<string, unknown>;
}

export interface CommandRequest {
  command_id: string;
  icao24: string;
  route: string[];
  start_time: string;
}
