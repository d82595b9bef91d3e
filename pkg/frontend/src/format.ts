// Display formatting only. The exact payload values always travel alongside
// in data-* attributes; tests compare those against the originating JSON.

export function formatProbability(p: number): string {
  return `${(p * 100).toFixed(2)}%`;
}

export function formatSeconds(seconds: number): string {
  return `${seconds.toFixed(1)} s`;
}

export function formatWindow(loS: number, hiS: number, startEpochS: number): string {
  return `${formatSeconds(loS - startEpochS)} – ${formatSeconds(hiS - startEpochS)}`;
}

export function epochSeconds(isoTime: string): number {
  return Date.parse(isoTime) / 1000;
}
