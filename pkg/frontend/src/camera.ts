/**
 * Desktop camera: the user's nav position plus a mouse-look pitch, with the
 * matrices and pick rays the renderer needs.  World is right-handed, z up;
 * the view matrix maps into a conventional looking-down-minus-z eye space.
 */

import { type Vec3, vec3 } from "./deform.js";

export const DEFAULT_FOV_Y_RAD = (75 * Math.PI) / 180;

export interface CameraView {
  readonly eye: Vec3;
  readonly forward: Vec3; // unit view direction (includes pitch)
  readonly right: Vec3;
  readonly up: Vec3;
}

/** View basis from a horizontal heading and a pitch angle (radians, up+). */
export function cameraView(eye: Vec3, headingXy: Vec3, pitchRad: number): CameraView {
  const cp = Math.cos(pitchRad);
  const sp = Math.sin(pitchRad);
  const forward = vec3(headingXy.x * cp, headingXy.y * cp, sp);
  // right = forward x worldUp, normalized; never degenerate while |pitch| < 90°
  const rx = forward.y;
  const ry = -forward.x;
  const rn = Math.hypot(rx, ry);
  const right = vec3(rx / rn, ry / rn, 0);
  const up = vec3(
    right.y * forward.z - right.z * forward.y,
    right.z * forward.x - right.x * forward.z,
    right.x * forward.y - right.y * forward.x,
  );
  return { eye, forward, right, up };
}

/** Column-major world-to-eye matrix for the basis. */
export function viewMatrix(v: CameraView): Float32Array {
  const { eye, forward: f, right: r, up: u } = v;
  const tx = -(r.x * eye.x + r.y * eye.y + r.z * eye.z);
  const ty = -(u.x * eye.x + u.y * eye.y + u.z * eye.z);
  const tz = f.x * eye.x + f.y * eye.y + f.z * eye.z;
  // prettier-ignore
  return new Float32Array([
    r.x, u.x, -f.x, 0,
    r.y, u.y, -f.y, 0,
    r.z, u.z, -f.z, 0,
    tx, ty, tz, 1,
  ]);
}

/** Column-major perspective projection. */
export function projectionMatrix(
  fovYRad: number,
  aspect: number,
  near: number,
  far: number,
): Float32Array {
  const t = 1 / Math.tan(fovYRad / 2);
  const nf = 1 / (near - far);
  // prettier-ignore
  return new Float32Array([
    t / aspect, 0, 0, 0,
    0, t, 0, 0,
    0, 0, (far + near) * nf, -1,
    0, 0, 2 * far * near * nf, 0,
  ]);
}

export interface Ray {
  readonly origin: Vec3;
  readonly dir: Vec3; // unit
}

/** World-space ray through normalized device coordinates (x, y in [-1, 1]). */
export function pickRay(v: CameraView, ndcX: number, ndcY: number, fovYRad: number, aspect: number): Ray {
  const tanHalf = Math.tan(fovYRad / 2);
  const dx = ndcX * tanHalf * aspect;
  const dy = ndcY * tanHalf;
  const wx = v.forward.x + v.right.x * dx + v.up.x * dy;
  const wy = v.forward.y + v.right.y * dx + v.up.y * dy;
  const wz = v.forward.z + v.right.z * dx + v.up.z * dy;
  const n = Math.sqrt(wx * wx + wy * wy + wz * wz);
  return { origin: v.eye, dir: vec3(wx / n, wy / n, wz / n) };
}

/** Column-major 4x4 product a · b (b is applied first). */
export function multiplyMat4(a: Float32Array, b: Float32Array): Float32Array {
  const out = new Float32Array(16);
  for (let col = 0; col < 4; col++) {
    for (let row = 0; row < 4; row++) {
      let sum = 0.0;
      for (let k = 0; k < 4; k++) {
        sum += a[row + 4 * k] * b[k + 4 * col];
      }
      out[row + 4 * col] = sum;
    }
  }
  return out;
}
