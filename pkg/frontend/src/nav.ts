/**
 * Deterministic navigation state machine, client side.
 *
 * A float-for-float replica of the engine's tick loop: one owner advances
 * the state with `update(state, commands, dt, scene, cfg)`; every tick
 * returns a new immutable snapshot plus the telemetry events that tick
 * produced.  All timing comes from the injected dt — never wall time — so a
 * recorded input stream replays to the same event sequence the server-side
 * simulator writes.
 *
 * Mode graph:
 *
 *     Flat <-> EnteringRama/ExitingRama <-> RamaActive
 *     Flat | RamaActive -> Flying -> (ExitingRama if Rama was active, else Flat)
 *     Flat | RamaActive -> ChangingAltitude -> prior mode
 *
 * During EnteringRama, ExitingRama, Flying and ChangingAltitude all commands
 * except SetHeadPose are dropped (logged as command_dropped), and the
 * cylinder is frozen.  The cylinder re-centers on the user only while moving
 * forward, and re-orients only through the head-follow realignment rules.
 */

import {
  effectiveDiameter,
  frameAt,
  norm,
  sub,
  vec3,
  type CylinderSpec,
  type Vec3,
} from "./deform.js";
import type { SceneIndex } from "./scene.js";
import { DEFAULT_CONFIG, type EngineConfig } from "./tiles.js";
import type { TelemetryEvent } from "./telemetry.js";

const RAD_TO_DEG = 180.0 / Math.PI;
const DEG_TO_RAD = Math.PI / 180.0;

export type Mode =
  | "Flat"
  | "EnteringRama"
  | "RamaActive"
  | "ExitingRama"
  | "Flying"
  | "ChangingAltitude";

const TRANSITION_MODES: readonly Mode[] = [
  "EnteringRama",
  "ExitingRama",
  "Flying",
  "ChangingAltitude",
];

export class TargetUnresolvable extends Error {}

// ---- commands ----------------------------------------------------------------

export type Command =
  | { readonly kind: "ToggleRama" }
  | { readonly kind: "MoveForward"; readonly held: boolean }
  | { readonly kind: "AltitudeUp" }
  | { readonly kind: "AltitudeDown" }
  | { readonly kind: "FlyTo"; readonly point?: readonly [number, number]; readonly building?: string }
  | { readonly kind: "PauseAxis" }
  | { readonly kind: "ResumeAxis" }
  | { readonly kind: "SetHeadPose"; readonly dir: readonly [number, number] };

// ---- state -------------------------------------------------------------------

export interface FlightPath {
  readonly start: Vec3;
  readonly end: Vec3;
  readonly durationS: number;
  readonly kind: "fly_to" | "altitude_change";
}

export interface NavState {
  readonly clock: number;
  readonly mode: Mode;
  readonly cameraPos: Vec3;
  readonly heading: Vec3; // horizontal unit vector (z = 0)
  readonly prevHeading: Vec3;
  readonly altitudeIx: number;
  readonly ramaPaused: boolean;
  readonly realigning: boolean;
  readonly moveHeld: boolean;
  readonly phaseT: number;
  readonly flight: FlightPath | null;
  readonly returnMode: Mode | null;
  readonly cylinder: CylinderSpec;
}

export function initialState(
  posXy: readonly [number, number] = [0.0, 0.0],
  headingXy: readonly [number, number] = [1.0, 0.0],
  altitudeIx = 0,
  cfg: EngineConfig = DEFAULT_CONFIG,
): NavState {
  const heading = unitHorizontal(headingXy);
  const camera = vec3(posXy[0], posXy[1], cfg.presets_m[altitudeIx]);
  const frame = frameAt(camera, heading);
  return {
    clock: 0.0,
    mode: "Flat",
    cameraPos: camera,
    heading,
    prevHeading: heading,
    altitudeIx,
    ramaPaused: false,
    realigning: false,
    moveHeld: false,
    phaseT: 0.0,
    flight: null,
    returnMode: null,
    cylinder: { frame, diameterM: cfg.d_m, blend: 0.0 },
  };
}

function unitHorizontal(v: readonly [number, number]): Vec3 {
  const x = v[0];
  const y = v[1];
  const n = Math.sqrt(x * x + y * y);
  if (n < 1e-9) {
    throw new Error("horizontal direction must be nonzero");
  }
  return vec3(x / n, y / n, 0.0);
}

// ---- pure helpers --------------------------------------------------------

/** Effective diameter during an enter/exit transition (log interpolation). */
export function transitionDiameter(t: number, entering: boolean, cfg: EngineConfig = DEFAULT_CONFIG): number {
  let u = t / cfg.transition_s;
  if (!entering) {
    u = 1.0 - u;
  }
  return effectiveDiameter(cfg.d_m, u);
}

/** Eased position fraction: 0 at t=0, exactly 0.5 at t=T/2, 1 at t=T. */
export function flightProgress(t: number, T: number): number {
  const u = t / T;
  // evaluates cos(pi*u) as sin(pi*(0.5-u)): exact at u in {0, 0.5, 1}
  return 0.5 * (1.0 - Math.sin(Math.PI * (0.5 - u)));
}

/** Square-root flight time with a floor for short hops. */
export function flightDuration(distanceM: number, cfg: EngineConfig = DEFAULT_CONFIG): number {
  return Math.max(cfg.flight_floor_s, cfg.k_flight * Math.sqrt(distanceM));
}

/**
 * Flight destination at the user's current altitude.
 *
 * Ground point: the point itself.  Building: the point `standoff_m` outside
 * the footprint boundary along the horizontal ray from the building centroid
 * toward the user.
 */
export function resolveFlyTarget(
  cmd: Extract<Command, { kind: "FlyTo" }>,
  state: NavState,
  scene: SceneIndex | null,
  cfg: EngineConfig = DEFAULT_CONFIG,
): Vec3 {
  const z = state.cameraPos.z;
  if (cmd.point !== undefined) {
    return vec3(cmd.point[0], cmd.point[1], z);
  }
  if (cmd.building !== undefined) {
    if (scene === null) {
      throw new TargetUnresolvable("no scene loaded");
    }
    const xy = scene.standoffPoint(cmd.building, [state.cameraPos.x, state.cameraPos.y], cfg.standoff_m);
    if (xy === null) {
      throw new TargetUnresolvable(`unknown building '${cmd.building}'`);
    }
    return vec3(xy[0], xy[1], z);
  }
  throw new TargetUnresolvable("empty fly-to selection");
}

/** Signed rotation (radians) taking direction a to direction b about +z. */
function signedAngle(a: Vec3, b: Vec3): number {
  return Math.atan2(a.x * b.y - a.y * b.x, a.x * b.x + a.y * b.y);
}

function copysign(mag: number, sign: number): number {
  return sign < 0 || Object.is(sign, -0) ? -Math.abs(mag) : Math.abs(mag);
}

function rotateHorizontal(v: Vec3, angle: number): Vec3 {
  const c = Math.cos(angle);
  const s = Math.sin(angle);
  const x = c * v.x - s * v.y;
  const y = s * v.x + c * v.y;
  const n = Math.sqrt(x * x + y * y);
  return vec3(x / n, y / n, 0.0);
}

// ---- the tick ----------------------------------------------------------------

/**
 * Advance one tick; returns [new state, telemetry events].
 *
 * Commands are applied in order at the start of the tick, then the tick's
 * dt is integrated.  Event timestamps use the end-of-tick clock.
 */
export function update(
  state: NavState,
  commands: readonly Command[],
  dt: number,
  scene: SceneIndex | null = null,
  cfg: EngineConfig = DEFAULT_CONFIG,
): [NavState, TelemetryEvent[]] {
  if (!(0.0 < dt && dt <= 0.1)) {
    throw new Error(`dt ${dt} outside (0, 0.1]`);
  }
  const tEnd = state.clock + dt;
  const events: TelemetryEvent[] = [];
  let s = state;

  for (const cmd of commands) {
    s = applyCommand(s, cmd, tEnd, scene, cfg, events);
  }

  s = integrate(s, dt, tEnd, scene, cfg, events);
  s = { ...s, clock: tEnd, prevHeading: s.heading };
  return [s, events];
}

function emit(events: TelemetryEvent[], t: number, kind: string, payload: Record<string, unknown>): void {
  events.push({ t, kind, payload });
}

function modeChange(s: NavState, newMode: Mode, t: number, events: TelemetryEvent[]): NavState {
  emit(events, t, "mode_change", { from_mode: s.mode, to_mode: newMode });
  return { ...s, mode: newMode };
}

function applyCommand(
  s: NavState,
  cmd: Command,
  t: number,
  scene: SceneIndex | null,
  cfg: EngineConfig,
  events: TelemetryEvent[],
): NavState {
  if (cmd.kind === "SetHeadPose") {
    return { ...s, heading: unitHorizontal(cmd.dir) };
  }

  if (TRANSITION_MODES.includes(s.mode)) {
    emit(events, t, "command_dropped", { cmd: cmd.kind, reason: "transition" });
    return s;
  }

  switch (cmd.kind) {
    case "ToggleRama": {
      if (s.mode === "Flat") {
        s = modeChange(s, "EnteringRama", t, events);
      } else {
        s = modeChange(s, "ExitingRama", t, events);
      }
      return { ...s, phaseT: 0.0, realigning: false };
    }
    case "MoveForward":
      return { ...s, moveHeld: cmd.held };
    case "AltitudeUp":
    case "AltitudeDown": {
      const step = cmd.kind === "AltitudeUp" ? 1 : -1;
      const newIx = s.altitudeIx + step;
      if (!(newIx >= 0 && newIx < cfg.presets_m.length)) {
        emit(events, t, "command_dropped", { cmd: cmd.kind, reason: "clamped" });
        return s;
      }
      const start = s.cameraPos;
      const end = vec3(start.x, start.y, cfg.presets_m[newIx]);
      const path: FlightPath = {
        start,
        end,
        durationS: flightDuration(Math.abs(end.z - start.z), cfg),
        kind: "altitude_change",
      };
      const ret = stateReturnMode(s);
      s = modeChange(s, "ChangingAltitude", t, events);
      return { ...s, phaseT: 0.0, flight: path, returnMode: ret, realigning: false };
    }
    case "FlyTo": {
      let target: Vec3;
      try {
        target = resolveFlyTarget(cmd, s, scene, cfg);
      } catch (e) {
        if (e instanceof TargetUnresolvable) {
          emit(events, t, "command_dropped", { cmd: "FlyTo", reason: e.message });
          return s;
        }
        throw e;
      }
      const dist = norm(sub(target, s.cameraPos));
      const path: FlightPath = {
        start: s.cameraPos,
        end: target,
        durationS: flightDuration(dist, cfg),
        kind: "fly_to",
      };
      const ret = stateReturnMode(s);
      s = modeChange(s, "Flying", t, events);
      emit(events, t, "fly_start", {
        target: [target.x, target.y, target.z],
        duration_s: path.durationS,
      });
      return { ...s, phaseT: 0.0, flight: path, returnMode: ret, realigning: false };
    }
    case "PauseAxis":
      return { ...s, ramaPaused: true };
    case "ResumeAxis": {
      s = { ...s, ramaPaused: false };
      const offset = Math.abs(signedAngle(s.cylinder.frame.forward, s.heading) * RAD_TO_DEG);
      if (s.mode === "RamaActive" && offset > cfg.realign_deadband_deg) {
        s = { ...s, realigning: true };
      }
      return s;
    }
  }
}

export function stateReturnMode(s: NavState): Mode {
  return s.mode === "Flat" || s.mode === "RamaActive" ? s.mode : "Flat";
}

function integrate(
  s: NavState,
  dt: number,
  t: number,
  scene: SceneIndex | null,
  cfg: EngineConfig,
  events: TelemetryEvent[],
): NavState {
  if (s.mode === "EnteringRama" || s.mode === "ExitingRama") {
    return integrateRamaTransition(s, dt, t, cfg, events);
  }
  if (s.mode === "Flying" || s.mode === "ChangingAltitude") {
    return integrateFlight(s, dt, t, cfg, events);
  }
  return integrateLocomotion(s, dt, t, scene, cfg, events);
}

function integrateRamaTransition(
  s: NavState,
  dt: number,
  t: number,
  cfg: EngineConfig,
  events: TelemetryEvent[],
): NavState {
  const phase = s.phaseT + dt;
  const entering = s.mode === "EnteringRama";
  if (phase >= cfg.transition_s) {
    const blend = entering ? 1.0 : 0.0;
    const cyl: CylinderSpec = { frame: s.cylinder.frame, diameterM: cfg.d_m, blend };
    s = { ...s, phaseT: cfg.transition_s, cylinder: cyl };
    return modeChange(s, entering ? "RamaActive" : "Flat", t, events);
  }
  const u = phase / cfg.transition_s;
  const blend = entering ? u : 1.0 - u;
  return {
    ...s,
    phaseT: phase,
    cylinder: { frame: s.cylinder.frame, diameterM: cfg.d_m, blend },
  };
}

function integrateFlight(
  s: NavState,
  dt: number,
  t: number,
  cfg: EngineConfig,
  events: TelemetryEvent[],
): NavState {
  const path = s.flight!;
  const phase = s.phaseT + dt;
  if (phase >= path.durationS) {
    s = { ...s, cameraPos: path.end, phaseT: path.durationS, flight: null };
    if (path.kind === "fly_to") {
      emit(events, t, "fly_end", { position: [path.end.x, path.end.y, path.end.z] });
      if (s.returnMode === "RamaActive") {
        s = modeChange(s, "ExitingRama", t, events);
        return { ...s, phaseT: 0.0, returnMode: null };
      }
      s = modeChange(s, "Flat", t, events);
      return { ...s, returnMode: null };
    }
    // altitude change: commit the preset on completion
    const newIx = cfg.presets_m.indexOf(path.end.z);
    emit(events, t, "altitude_change", {
      from_m: cfg.presets_m[s.altitudeIx],
      to_m: cfg.presets_m[newIx],
    });
    s = { ...s, altitudeIx: newIx };
    s = modeChange(s, s.returnMode!, t, events);
    return { ...s, returnMode: null };
  }
  const frac = flightProgress(phase, path.durationS);
  const pos = vec3(
    path.start.x + (path.end.x - path.start.x) * frac,
    path.start.y + (path.end.y - path.start.y) * frac,
    path.start.z + (path.end.z - path.start.z) * frac,
  );
  return { ...s, cameraPos: pos, phaseT: phase };
}

function integrateLocomotion(
  s: NavState,
  dt: number,
  t: number,
  scene: SceneIndex | null,
  cfg: EngineConfig,
  events: TelemetryEvent[],
): NavState {
  if (s.mode === "RamaActive" && !s.ramaPaused) {
    s = headFollow(s, dt, cfg);
  }

  if (s.moveHeld) {
    const step = cfg.forward_speed_mps * dt;
    const p0 = s.cameraPos;
    const p1 = vec3(p0.x + s.heading.x * step, p0.y + s.heading.y * step, p0.z);
    const blocked =
      scene !== null && scene.blocked([p0.x, p0.y], [p1.x, p1.y], cfg.collision_radius_m, p0.z);
    if (blocked) {
      emit(events, t, "move_blocked", { position: [p0.x, p0.y, p0.z] });
    } else {
      s = { ...s, cameraPos: p1 };
      if (!(s.mode === "RamaActive" && s.ramaPaused)) {
        // cylinder center follows the user while moving forward
        const frame = frameAt(p1, s.cylinder.frame.forward);
        s = { ...s, cylinder: { frame, diameterM: cfg.d_m, blend: s.cylinder.blend } };
      }
    }
  }

  if (s.mode === "Flat") {
    // flat cylinder tracks the user so an enter transition starts in place
    const frame = frameAt(s.cameraPos, s.heading);
    s = { ...s, cylinder: { frame, diameterM: cfg.d_m, blend: 0.0 } };
  }
  return s;
}

function headFollow(s: NavState, dt: number, cfg: EngineConfig): NavState {
  const forward = s.cylinder.frame.forward;
  const offsetRad = signedAngle(forward, s.heading);
  const offsetDeg = Math.abs(offsetRad * RAD_TO_DEG);
  if (!s.realigning) {
    const velDps = Math.abs(signedAngle(s.prevHeading, s.heading) * RAD_TO_DEG) / dt;
    if (offsetDeg > cfg.realign_displacement_deg || velDps > cfg.realign_velocity_dps) {
      s = { ...s, realigning: true };
    } else {
      return s;
    }
  }
  // constant-rate rotation toward the current heading, committed at deadband
  const maxStepDeg = cfg.realign_rate_dps * dt;
  let newForward: Vec3;
  if (offsetDeg <= Math.max(cfg.realign_deadband_deg, maxStepDeg)) {
    newForward = s.heading;
    s = { ...s, realigning: false };
  } else {
    const step = copysign(maxStepDeg * DEG_TO_RAD, offsetRad);
    newForward = rotateHorizontal(forward, step);
  }
  const frame = frameAt(s.cylinder.frame.origin, newForward);
  return { ...s, cylinder: { frame, diameterM: cfg.d_m, blend: s.cylinder.blend } };
}
