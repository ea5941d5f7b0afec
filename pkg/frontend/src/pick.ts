/**
 * CPU building picking: cast the cursor ray against the *deformed* building
 * triangles (the same 64-bit reference math the shader mirrors), then map
 * the hit back to world coordinates through the inverse deformation.
 */

import {
  deformPoint,
  inverseDeform,
  NotInvertible,
  vec3,
  type CylinderSpec,
  type Vec3,
} from "./deform.js";
import type { Ray } from "./camera.js";
import type { PickTriangles } from "./mesh.js";

export interface PickHit {
  readonly buildingId: string;
  /** hit point in deformed (rendered) space */
  readonly deformedPoint: Vec3;
  /** hit point mapped back to undeformed world space */
  readonly worldPoint: Vec3;
  readonly distance: number;
}

interface TriHit {
  t: number;
  u: number;
  v: number;
}

const EPS = 1e-12;

/** Möller–Trumbore ray/triangle intersection; front and back faces hit. */
function rayTriangle(ray: Ray, a: Vec3, b: Vec3, c: Vec3): TriHit | null {
  const e1x = b.x - a.x;
  const e1y = b.y - a.y;
  const e1z = b.z - a.z;
  const e2x = c.x - a.x;
  const e2y = c.y - a.y;
  const e2z = c.z - a.z;
  const px = ray.dir.y * e2z - ray.dir.z * e2y;
  const py = ray.dir.z * e2x - ray.dir.x * e2z;
  const pz = ray.dir.x * e2y - ray.dir.y * e2x;
  const det = e1x * px + e1y * py + e1z * pz;
  if (Math.abs(det) < EPS) {
    return null;
  }
  const inv = 1 / det;
  const tx = ray.origin.x - a.x;
  const ty = ray.origin.y - a.y;
  const tz = ray.origin.z - a.z;
  const u = (tx * px + ty * py + tz * pz) * inv;
  if (u < 0 || u > 1) {
    return null;
  }
  const qx = ty * e1z - tz * e1y;
  const qy = tz * e1x - tx * e1z;
  const qz = tx * e1y - ty * e1x;
  const v = (ray.dir.x * qx + ray.dir.y * qy + ray.dir.z * qz) * inv;
  if (v < 0 || u + v > 1) {
    return null;
  }
  const t = (e2x * qx + e2y * qy + e2z * qz) * inv;
  if (t <= 0) {
    return null;
  }
  return { t, u, v };
}

function lerpTri(a: Vec3, b: Vec3, c: Vec3, u: number, v: number): Vec3 {
  const w = 1 - u - v;
  return vec3(
    w * a.x + u * b.x + v * c.x,
    w * a.y + u * b.y + v * c.y,
    w * a.z + u * b.z + v * c.z,
  );
}

/**
 * Nearest building hit by the ray, or null for sky.
 *
 * The triangle list holds undeformed world geometry; each vertex is pushed
 * through the current deformation before the intersection test, so picking
 * agrees with what the vertex shader renders.  The undeformed hit point
 * comes from the inverse deformation, falling back to barycentric
 * interpolation of the source triangle for chord points the closed-form
 * inverse rejects.
 */
export function pickBuilding(
  ray: Ray,
  picks: readonly PickTriangles[],
  spec: CylinderSpec,
): PickHit | null {
  let best: PickHit | null = null;
  for (const set of picks) {
    const n = set.buildingOf.length;
    for (let i = 0; i < n; i++) {
      const o = i * 9;
      const a0 = vec3(set.tris[o], set.tris[o + 1], set.tris[o + 2]);
      const b0 = vec3(set.tris[o + 3], set.tris[o + 4], set.tris[o + 5]);
      const c0 = vec3(set.tris[o + 6], set.tris[o + 7], set.tris[o + 8]);
      const a = deformPoint(a0, spec);
      const b = deformPoint(b0, spec);
      const c = deformPoint(c0, spec);
      const hit = rayTriangle(ray, a, b, c);
      if (!hit || (best && hit.t >= best.distance)) {
        continue;
      }
      const deformed = lerpTri(a, b, c, hit.u, hit.v);
      let world: Vec3;
      try {
        world = inverseDeform(deformed, spec);
      } catch (e) {
        if (!(e instanceof NotInvertible)) {
          throw e;
        }
        world = lerpTri(a0, b0, c0, hit.u, hit.v);
      }
      best = {
        buildingId: set.buildingOf[i],
        deformedPoint: deformed,
        worldPoint: world,
        distance: hit.t,
      };
    }
  }
  return best;
}
