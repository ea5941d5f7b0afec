/**
 * Frame-loop glue: owns the navigation state replica, feeds it wall-clock
 * ticks and queued commands, and derives the camera rig for the renderer.
 *
 * The camera lives in deformed local coordinates (the space the vertex
 * shader emits): the user's position is pushed through the same bend as the
 * geometry, while the view direction itself stays straight — bent streets
 * visibly curl up in front of a level camera.
 */

import {
  cameraView,
  CameraView,
  DEFAULT_FOV_Y_RAD,
  multiplyMat4,
  pickRay,
  projectionMatrix,
  Ray,
  viewMatrix,
} from "./camera.js";
import { deformLocal, specEffectiveDiameter, toLocal, toWorld, vec3 } from "./deform.js";
import { Command, initialState, NavState, update } from "./nav.js";
import { DrawParams } from "./render.js";
import { SceneIndex } from "./scene.js";
import { TelemetryEvent } from "./telemetry.js";
import { EngineConfig } from "./tiles.js";

const NEAR_M = 0.5;
const FAR_M = 60000.0;
const MAX_FRAME_DT_S = 0.1;

export interface CameraRig {
  readonly view: CameraView;
  readonly draw: DrawParams;
}

export class Client {
  state: NavState;
  selection: string | null = null;
  private queue: Command[] = [];
  private lastS: number | null = null;

  constructor(
    readonly cfg: EngineConfig,
    readonly scene: SceneIndex | null,
    posXy: readonly [number, number] = [0.0, 0.0],
    headingXy: readonly [number, number] = [1.0, 0.0],
  ) {
    this.state = initialState(posXy, headingXy, 0, cfg);
  }

  queueCommand(cmd: Command): void {
    this.queue.push(cmd);
  }

  /**
   * Advance the engine replica to wall-clock `nowS`.  The head pose is
   * prepended every frame (it is never dropped); stalls longer than the
   * engine's tick ceiling are clamped rather than split, trading a little
   * simulated time for a deterministic single update.
   */
  frame(nowS: number, headPoseXy: readonly [number, number]): TelemetryEvent[] {
    if (this.lastS === null) {
      this.lastS = nowS;
      return [];
    }
    let dt = nowS - this.lastS;
    this.lastS = nowS;
    if (dt <= 0.0) {
      return [];
    }
    dt = Math.min(dt, MAX_FRAME_DT_S);
    const cmds: Command[] = [{ kind: "SetHeadPose", dir: headPoseXy }, ...this.queue];
    this.queue = [];
    const [next, events] = update(this.state, cmds, dt, this.scene, this.cfg);
    this.state = next;
    return events;
  }

  /** Camera + draw parameters for the current state. */
  cameraRig(pitchRad: number, aspect: number, highlightId: number): CameraRig {
    const spec = this.state.cylinder;
    const dEff = specEffectiveDiameter(spec);
    const [Xu, Yu, Zu] = toLocal(spec.frame, this.state.cameraPos);
    const [ex, ey, ez] = deformLocal(Xu, Yu, Zu, dEff);
    const h = this.state.heading;
    const f = spec.frame;
    const headingLocal = vec3(
      h.x * f.forward.x + h.y * f.forward.y,
      h.x * f.left.x + h.y * f.left.y,
      0.0,
    );
    const view = cameraView(vec3(ex, ey, ez), headingLocal, pitchRad);
    const viewProj = multiplyMat4(
      projectionMatrix(DEFAULT_FOV_Y_RAD, aspect, NEAR_M, FAR_M),
      viewMatrix(view),
    );
    return {
      view,
      draw: {
        frameOrigin: [f.origin.x, f.origin.y],
        frameForward: [f.forward.x, f.forward.y],
        diameterM: dEff,
        eye: [ex, ey, ez],
        viewProj,
        highlightId,
      },
    };
  }

  /**
   * Pick ray re-expressed in deformed *world* axes, matching the space the
   * CPU pick triangles are deformed into.
   */
  pickRayWorld(view: CameraView, ndcX: number, ndcY: number, aspect: number): Ray {
    const r = pickRay(view, ndcX, ndcY, DEFAULT_FOV_Y_RAD, aspect);
    const f = this.state.cylinder.frame;
    return {
      origin: toWorld(f, r.origin.x, r.origin.y, r.origin.z),
      dir: vec3(
        r.dir.x * f.forward.x + r.dir.y * f.left.x,
        r.dir.x * f.forward.y + r.dir.y * f.left.y,
        r.dir.z,
      ),
    };
  }
}
