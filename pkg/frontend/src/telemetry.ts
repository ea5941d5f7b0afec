/**
 * Session telemetry, client side: the event model the navigation tick loop
 * appends to, JSON-lines parsing of server-side logs, and the session
 * metrics reduction (time share per altitude preset, perspective switches,
 * pointing errors) — the same measures the engine's simulator reports.
 */

const RAD_TO_DEG = 180.0 / Math.PI;

export const EVENT_KINDS = [
  "mode_change",
  "altitude_change",
  "fly_start",
  "fly_end",
  "move_blocked",
  "command_dropped",
  "pointing_sample",
] as const;

export const LOW_PRESETS_M = [5.0, 100.0];

export interface TelemetryEvent {
  readonly t: number;
  readonly kind: string;
  readonly payload: Record<string, unknown>;
}

export class EmptyLog extends Error {}

export class DegenerateInput extends Error {}

/** One event as a sorted-key compact JSON line (the log file format). */
export function eventToJson(e: TelemetryEvent): string {
  const payload: Record<string, unknown> = {};
  for (const k of Object.keys(e.payload).sort()) {
    payload[k] = e.payload[k];
  }
  return JSON.stringify({ kind: e.kind, payload, t: e.t });
}

/** Parse a JSON-lines telemetry log. */
export function parseLog(text: string): TelemetryEvent[] {
  const events: TelemetryEvent[] = [];
  for (const raw of text.split("\n")) {
    const line = raw.trim();
    if (!line) {
      continue;
    }
    const doc = JSON.parse(line) as { t: number; kind: string; payload?: Record<string, unknown> };
    events.push({ t: doc.t, kind: doc.kind, payload: doc.payload ?? {} });
  }
  return events;
}

/** [preset_m, seconds] spans; transition time counts toward the preset in
 * effect when the transition began (altitude_change marks completion). */
export function altitudeIntervals(
  events: readonly TelemetryEvent[],
  durationS: number,
): [number, number][] {
  const changes = events.filter((e) => e.kind === "altitude_change");
  if (changes.length === 0) {
    throw new EmptyLog("log has no altitude information");
  }
  const spans: [number, number][] = [];
  for (let i = 0; i < changes.length; i++) {
    const tNext = i + 1 < changes.length ? changes[i + 1].t : durationS;
    spans.push([changes[i].payload["to_m"] as number, Math.max(0.0, tNext - changes[i].t)]);
  }
  return spans;
}

/** Fraction of session time per altitude preset; fractions sum to 1. */
export function altitudeHistogram(
  events: readonly TelemetryEvent[],
  durationS: number,
): Map<number, number> {
  const spans = altitudeIntervals(events, durationS);
  let total = 0.0;
  for (const [, s] of spans) {
    total += s;
  }
  if (total <= 0.0) {
    throw new EmptyLog("session has zero duration");
  }
  const hist = new Map<number, number>();
  for (const [preset, seconds] of spans) {
    hist.set(preset, (hist.get(preset) ?? 0.0) + seconds);
  }
  const out = new Map<number, number>();
  for (const k of [...hist.keys()].sort((a, b) => a - b)) {
    out.set(k, hist.get(k)! / total);
  }
  return out;
}

/** Crossings between the low altitude group {5, 100} and the rest. */
export function perspectiveSwitches(events: readonly TelemetryEvent[]): number {
  let count = 0;
  let prevLow: boolean | null = null;
  for (const e of events) {
    if (e.kind !== "altitude_change") {
      continue;
    }
    const low = LOW_PRESETS_M.includes(e.payload["to_m"] as number);
    if (prevLow !== null && low !== prevLow) {
      count++;
    }
    prevLow = low;
  }
  return count;
}

/** Angle in degrees between the pointed direction and the true direction. */
export function pointingErrorDeg(
  userPos: readonly [number, number, number],
  pointedDir: readonly [number, number, number],
  targetPos: readonly [number, number, number],
): number {
  const tx = targetPos[0] - userPos[0];
  const ty = targetPos[1] - userPos[1];
  const tz = targetPos[2] - userPos[2];
  const [px, py, pz] = pointedDir;
  const tn = Math.sqrt(tx * tx + ty * ty + tz * tz);
  const pn = Math.sqrt(px * px + py * py + pz * pz);
  if (tn === 0.0 || pn === 0.0) {
    throw new DegenerateInput("zero-length direction");
  }
  const c = (tx * px + ty * py + tz * pz) / (tn * pn);
  return Math.acos(Math.min(1.0, Math.max(-1.0, c))) * RAD_TO_DEG;
}

export interface Metrics {
  readonly completion_time_s: number;
  readonly altitude_share: Record<string, number>;
  readonly perspective_switches: number;
  readonly pointing_errors_deg: number[];
}

export function computeMetrics(events: readonly TelemetryEvent[], durationS: number): Metrics {
  const hist = altitudeHistogram(events, durationS);
  const share: Record<string, number> = {};
  for (const [k, v] of hist) {
    share[`${Math.trunc(k)}m`] = v;
  }
  return {
    completion_time_s: durationS,
    altitude_share: share,
    perspective_switches: perspectiveSwitches(events),
    pointing_errors_deg: events
      .filter((e) => e.kind === "pointing_sample")
      .map((e) => e.payload["error_deg"] as number),
  };
}
