/**
 * Keyboard control set (desktop stand-in for the handheld controller):
 *
 *     R          toggle the bent view
 *     W (hold)   move forward
 *     Q / E      altitude preset up / down
 *     click      select the building under the crosshair
 *     F          fly to the selection
 *     Space      pause / resume the cylinder axis
 *     mouse-look head pose (yaw feeds the engine, pitch stays in the camera)
 *
 * One command per key.  Bindings may be overridden by the `bindings` object
 * in /api/config and persist across sessions in browser local storage;
 * mapping logic is DOM-free so it is unit-testable.
 */

export type Action =
  | "toggle_rama"
  | "move_forward"
  | "altitude_up"
  | "altitude_down"
  | "fly_to_selection"
  | "pause_axis_toggle";

export const ACTIONS: readonly Action[] = [
  "toggle_rama",
  "move_forward",
  "altitude_up",
  "altitude_down",
  "fly_to_selection",
  "pause_axis_toggle",
];

export const ACTION_LABELS: Record<Action, string> = {
  toggle_rama: "toggle bent view",
  move_forward: "move forward (hold)",
  altitude_up: "altitude up",
  altitude_down: "altitude down",
  fly_to_selection: "fly to selection",
  pause_axis_toggle: "pause/resume axis",
};

export const DEFAULT_BINDINGS: Record<string, Action> = {
  KeyR: "toggle_rama",
  KeyW: "move_forward",
  KeyQ: "altitude_up",
  KeyE: "altitude_down",
  KeyF: "fly_to_selection",
  Space: "pause_axis_toggle",
};

const STORAGE_KEY = "ramacity.bindings";

export interface KeyValueStore {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
}

function isAction(v: unknown): v is Action {
  return typeof v === "string" && (ACTIONS as readonly string[]).includes(v);
}

function sanitize(raw: unknown): Record<string, Action> {
  const out: Record<string, Action> = {};
  if (typeof raw !== "object" || raw === null) {
    return out;
  }
  for (const [code, action] of Object.entries(raw)) {
    if (isAction(action)) {
      out[code] = action;
    }
  }
  return out;
}

/** Key-to-action map layered as defaults < server config < local storage. */
export class Bindings {
  private map: Record<string, Action>;
  private readonly store: KeyValueStore | null;

  constructor(store: KeyValueStore | null = null, configBindings?: Record<string, string>) {
    this.store = store;
    this.map = { ...DEFAULT_BINDINGS, ...sanitize(configBindings) };
    if (store) {
      const saved = store.getItem(STORAGE_KEY);
      if (saved) {
        try {
          this.map = { ...this.map, ...sanitize(JSON.parse(saved)) };
        } catch {
          // corrupted storage: keep config/defaults
        }
      }
    }
    this.dedupe();
  }

  /** Enforce one key per action (the most recently applied layer wins). */
  private dedupe(): void {
    const seen = new Set<Action>();
    const out: Record<string, Action> = {};
    for (const code of Object.keys(this.map).reverse()) {
      const action = this.map[code];
      if (!seen.has(action)) {
        seen.add(action);
        out[code] = action;
      }
    }
    this.map = out;
  }

  actionFor(code: string): Action | null {
    return this.map[code] ?? null;
  }

  keyFor(action: Action): string | null {
    for (const [code, a] of Object.entries(this.map)) {
      if (a === action) {
        return code;
      }
    }
    return null;
  }

  entries(): [string, Action][] {
    return Object.entries(this.map);
  }

  /** Bind `code` to `action`, releasing the action's previous key. */
  rebind(code: string, action: Action): void {
    const prev = this.keyFor(action);
    if (prev !== null) {
      delete this.map[prev];
    }
    this.map[code] = action;
    this.persist();
  }

  private persist(): void {
    this.store?.setItem(STORAGE_KEY, JSON.stringify(this.map));
  }
}

/** Mouse-look state: integrates pointer deltas into yaw + clamped pitch. */
export class MouseLook {
  yawRad: number;
  pitchRad = 0.0;
  readonly sensitivity: number;

  constructor(initialHeadingXy: readonly [number, number], sensitivity = 0.0025) {
    this.yawRad = Math.atan2(initialHeadingXy[1], initialHeadingXy[0]);
    this.sensitivity = sensitivity;
  }

  apply(dxPx: number, dyPx: number): void {
    this.yawRad -= dxPx * this.sensitivity;
    this.pitchRad -= dyPx * this.sensitivity;
    const maxPitch = (89 * Math.PI) / 180;
    this.pitchRad = Math.min(maxPitch, Math.max(-maxPitch, this.pitchRad));
  }

  headingXy(): [number, number] {
    return [Math.cos(this.yawRad), Math.sin(this.yawRad)];
  }
}
