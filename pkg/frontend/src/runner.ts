/**
 * Scripted navigation sessions, client side: parse the JSON-lines script
 * format the engine's simulator consumes and replay it tick-for-tick
 * through the local navigation state machine.  Given the same scene and
 * config, the event sequence matches a server-side `simulate` run.
 *
 * Script lines look like `{"t": 1.5, "cmd": "toggle_rama", "args": {}}`.
 * Three commands are runner directives: `init` (starting pose, t=0 only),
 * `pointing_sample` (record a pointing-error measurement), and
 * `end_session` (sets the session duration).
 */

import * as nav from "./nav.js";
import { buildingCentroid } from "./tiles.js";
import { computeMetrics, pointingErrorDeg, type Metrics, type TelemetryEvent } from "./telemetry.js";
import type { SceneIndex } from "./scene.js";
import { DEFAULT_CONFIG, type EngineConfig } from "./tiles.js";

export const TICK_DT = 1.0 / 90.0;

const NAV_COMMANDS = new Set([
  "toggle_rama",
  "move_forward",
  "altitude_up",
  "altitude_down",
  "fly_to",
  "pause_axis",
  "resume_axis",
  "set_head_pose",
]);
const DIRECTIVES = new Set(["init", "pointing_sample", "end_session"]);

export class ScriptError extends Error {
  readonly line: number;

  constructor(msg: string, line: number) {
    super(`line ${line}: ${msg}`);
    this.line = line;
  }
}

export interface ScriptEntry {
  readonly t: number;
  readonly cmd: string;
  readonly args: Record<string, unknown>;
  readonly lineNo: number;
}

/** Validated list of script entries, in script order. */
export function parseScript(text: string): ScriptEntry[] {
  const entries: ScriptEntry[] = [];
  let lastT = -Infinity;
  const lines = text.split("\n");
  for (let i = 0; i < lines.length; i++) {
    const lineNo = i + 1;
    const raw = lines[i].trim();
    if (!raw || raw.startsWith("#")) {
      continue;
    }
    let doc: unknown;
    try {
      doc = JSON.parse(raw);
    } catch (e) {
      throw new ScriptError(`invalid JSON: ${(e as Error).message}`, lineNo);
    }
    if (typeof doc !== "object" || doc === null || !("t" in doc) || !("cmd" in doc)) {
      throw new ScriptError('each entry needs "t" and "cmd"', lineNo);
    }
    const entry = doc as { t: unknown; cmd: unknown; args?: unknown };
    const t = entry.t;
    const cmd = entry.cmd as string;
    const args = (entry.args ?? {}) as Record<string, unknown>;
    if (typeof t !== "number" || t < 0) {
      throw new ScriptError(`bad time ${JSON.stringify(t)}`, lineNo);
    }
    if (t < lastT) {
      throw new ScriptError(`time ${t} goes backwards`, lineNo);
    }
    lastT = t;
    if (!NAV_COMMANDS.has(cmd) && !DIRECTIVES.has(cmd)) {
      throw new ScriptError(`unknown command '${cmd}'`, lineNo);
    }
    if (cmd === "init" && (entries.length > 0 || t !== 0)) {
      throw new ScriptError("init must be the first entry, at t=0", lineNo);
    }
    validateArgs(cmd, args, lineNo);
    entries.push({ t, cmd, args, lineNo });
  }
  return entries;
}

function validateArgs(cmd: string, args: Record<string, unknown>, lineNo: number): void {
  if (typeof args !== "object" || args === null || Array.isArray(args)) {
    throw new ScriptError("args must be an object", lineNo);
  }

  const need = (key: string, kind: "vec2" | "vec3" | "bool"): unknown => {
    if (!(key in args)) {
      throw new ScriptError(`${cmd} needs args.${key}`, lineNo);
    }
    const v = args[key];
    if (kind === "vec2" && !(Array.isArray(v) && v.length === 2)) {
      throw new ScriptError(`${cmd} args.${key} must be [x, y]`, lineNo);
    }
    if (kind === "vec3" && !(Array.isArray(v) && v.length === 3)) {
      throw new ScriptError(`${cmd} args.${key} must be [x, y, z]`, lineNo);
    }
    if (kind === "bool" && typeof v !== "boolean") {
      throw new ScriptError(`${cmd} args.${key} must be true/false`, lineNo);
    }
    return v;
  };

  if (cmd === "move_forward") {
    need("held", "bool");
  } else if (cmd === "set_head_pose") {
    need("dir", "vec2");
  } else if (cmd === "fly_to") {
    if ("point" in args === "building" in args) {
      throw new ScriptError("fly_to needs exactly one of args.point / args.building", lineNo);
    }
    if ("point" in args) {
      need("point", "vec2");
    }
  } else if (cmd === "pointing_sample") {
    need("pointed", "vec3");
    if ("target" in args === "building" in args) {
      throw new ScriptError("pointing_sample needs exactly one of args.target / args.building", lineNo);
    }
    if ("target" in args) {
      need("target", "vec3");
    }
  }
}

function toNavCommand(cmd: string, args: Record<string, unknown>): nav.Command {
  switch (cmd) {
    case "toggle_rama":
      return { kind: "ToggleRama" };
    case "move_forward":
      return { kind: "MoveForward", held: args["held"] as boolean };
    case "altitude_up":
      return { kind: "AltitudeUp" };
    case "altitude_down":
      return { kind: "AltitudeDown" };
    case "fly_to": {
      if ("point" in args) {
        const p = args["point"] as [number, number];
        return { kind: "FlyTo", point: [p[0], p[1]] };
      }
      return { kind: "FlyTo", building: args["building"] as string };
    }
    case "pause_axis":
      return { kind: "PauseAxis" };
    case "resume_axis":
      return { kind: "ResumeAxis" };
    case "set_head_pose": {
      const d = args["dir"] as [number, number];
      return { kind: "SetHeadPose", dir: [d[0], d[1]] };
    }
    default:
      throw new Error(`not a nav command: ${cmd}`);
  }
}

export interface RunResult {
  readonly finalState: nav.NavState;
  readonly events: TelemetryEvent[];
  readonly metrics: Metrics;
}

/** Run a parsed script through the local state machine at fixed dt. */
export function run(
  entries: readonly ScriptEntry[],
  scene: SceneIndex | null = null,
  cfg: EngineConfig = DEFAULT_CONFIG,
  dt: number = TICK_DT,
): RunResult {
  let initArgs: Record<string, unknown> = {};
  let rest = entries;
  if (entries.length > 0 && entries[0].cmd === "init") {
    initArgs = entries[0].args;
    rest = entries.slice(1);
  }
  const pos = (initArgs["pos"] as [number, number] | undefined) ?? [0.0, 0.0];
  const heading = (initArgs["heading"] as [number, number] | undefined) ?? [1.0, 0.0];
  const altitudeIx = (initArgs["altitude_ix"] as number | undefined) ?? 0;
  let state = nav.initialState([pos[0], pos[1]], [heading[0], heading[1]], altitudeIx, cfg);

  const events: TelemetryEvent[] = [
    {
      t: 0.0,
      kind: "altitude_change",
      payload: {
        from_m: cfg.presets_m[state.altitudeIx],
        to_m: cfg.presets_m[state.altitudeIx],
      },
    },
  ];

  let duration = 0.0;
  for (const e of rest) {
    duration = Math.max(duration, e.t);
  }
  const nTicks = Math.max(1, Math.ceil(duration / dt - 1e-9));
  const byTick = new Map<number, ScriptEntry[]>();
  for (const e of rest) {
    if (e.cmd === "end_session") {
      continue;
    }
    const tick = Math.min(Math.floor(e.t / dt + 1e-9), nTicks - 1);
    const bucket = byTick.get(tick);
    if (bucket) {
      bucket.push(e);
    } else {
      byTick.set(tick, [e]);
    }
  }

  for (let k = 0; k < nTicks; k++) {
    const commands: nav.Command[] = [];
    for (const e of byTick.get(k) ?? []) {
      if (e.cmd === "pointing_sample") {
        events.push(pointingEvent(state, e.args, scene));
      } else {
        commands.push(toNavCommand(e.cmd, e.args));
      }
    }
    const [next, tickEvents] = nav.update(state, commands, dt, scene, cfg);
    state = next;
    events.push(...tickEvents);
  }

  const metrics = computeMetrics(events, state.clock);
  return { finalState: state, events, metrics };
}

function pointingEvent(
  state: nav.NavState,
  args: Record<string, unknown>,
  scene: SceneIndex | null,
): TelemetryEvent {
  let target: [number, number, number];
  if ("target" in args) {
    const t = args["target"] as [number, number, number];
    target = [t[0], t[1], t[2]];
  } else {
    const b = scene !== null ? scene.building(args["building"] as string) : null;
    if (b === null) {
      throw new ScriptError(`unknown building '${args["building"]}'`, 0);
    }
    const [cx, cy] = buildingCentroid(b);
    target = [cx, cy, b.heightM / 2.0];
  }
  const p = state.cameraPos;
  const pointed = args["pointed"] as [number, number, number];
  const err = pointingErrorDeg([p.x, p.y, p.z], [pointed[0], pointed[1], pointed[2]], target);
  return {
    t: state.clock,
    kind: "pointing_sample",
    payload: { error_deg: err, target: [target[0], target[1], target[2]] },
  };
}
