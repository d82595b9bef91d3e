import type { WarningLevel } from "./types.js";

// Fixed severity color scale: green / amber / orange / red.
export const LEVEL_COLORS: Record<WarningLevel, string> = {
  low: "#2e8b57",
  intermediate: "#d9a516",
  high: "#e06c1f",
  danger: "#c3262a",
};

const ORDER: WarningLevel[] = ["low", "intermediate", "high", "danger"];

export function severityRank(level: WarningLevel): number {
  return ORDER.indexOf(level);
}

export function maxLevel(levels: WarningLevel[]): WarningLevel {
  let top: WarningLevel = "low";
  for (const level of levels) {
    if (severityRank(level) > severityRank(top)) top = level;
  }
  return top;
}
