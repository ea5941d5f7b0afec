/**
 * User-centered cylindrical space deformation, client side.
 *
 * Mirrors the engine's reference math in 64-bit floats so CPU picking and
 * the navigation replica agree with the server, and provides a strict
 * 32-bit evaluation (`deformLocalF32`) that models the vertex shader path
 * operation for operation.  World frame is right-handed, z up, ground at
 * z = 0.
 */

export const FLAT_DIAMETER_M = 1.0e7;
export const DEFAULT_DIAMETER_M = 5000.0;

export interface Vec3 {
  readonly x: number;
  readonly y: number;
  readonly z: number;
}

export function vec3(x: number, y: number, z: number): Vec3 {
  return { x, y, z };
}

export function add(a: Vec3, b: Vec3): Vec3 {
  return { x: a.x + b.x, y: a.y + b.y, z: a.z + b.z };
}

export function sub(a: Vec3, b: Vec3): Vec3 {
  return { x: a.x - b.x, y: a.y - b.y, z: a.z - b.z };
}

export function scaled(a: Vec3, s: number): Vec3 {
  return { x: a.x * s, y: a.y * s, z: a.z * s };
}

export function norm(a: Vec3): number {
  return Math.sqrt(a.x * a.x + a.y * a.y + a.z * a.z);
}

export class GeometryError extends Error {}

export class HeightExceedsRadius extends GeometryError {}

export class NotInvertible extends GeometryError {}

/** Frame with origin at the user's ground position, +X the horizontal view
 * direction, +Y the cylinder axis direction (up x forward). */
export interface UserFrame {
  readonly origin: Vec3;
  readonly forward: Vec3;
  readonly left: Vec3;
}

export function frameAt(pos: Vec3, forward: Vec3): UserFrame {
  return {
    origin: { x: pos.x, y: pos.y, z: 0.0 },
    forward: { x: forward.x, y: forward.y, z: 0.0 },
    left: { x: -forward.y, y: forward.x, z: 0.0 },
  };
}

export function toLocal(f: UserFrame, p: Vec3): [number, number, number] {
  const rx = p.x - f.origin.x;
  const ry = p.y - f.origin.y;
  const X = rx * f.forward.x + ry * f.forward.y;
  const Y = rx * f.left.x + ry * f.left.y;
  return [X, Y, p.z];
}

export function toWorld(f: UserFrame, X: number, Y: number, Z: number): Vec3 {
  const wx = f.origin.x + X * f.forward.x + Y * f.left.x;
  const wy = f.origin.y + X * f.forward.y + Y * f.left.y;
  return { x: wx, y: wy, z: Z };
}

/** One deformation instant: user frame, cylinder diameter, blend in [0, 1]. */
export interface CylinderSpec {
  readonly frame: UserFrame;
  readonly diameterM: number;
  readonly blend: number;
}

export function effectiveDiameter(diameterM: number, blend: number): number {
  // pow keeps the endpoints exact: d**1 == d and d**0 == 1
  return Math.pow(diameterM, blend) * Math.pow(FLAT_DIAMETER_M, 1.0 - blend);
}

export function specEffectiveDiameter(spec: CylinderSpec): number {
  return effectiveDiameter(spec.diameterM, spec.blend);
}

/**
 * Scalar deformation core in frame-local coordinates (64-bit).
 *
 * Points with X <= 0 pass through unchanged (half-cylinder rule); elevated
 * points are displaced Z meters toward the axis at (0, *, d/2).
 */
export function deformLocal(X: number, Y: number, Z: number, d: number): [number, number, number] {
  if (Z >= 0.5 * d) {
    throw new HeightExceedsRadius(
      `height ${Z} m >= half diameter ${0.5 * d} m; deformation would cross the axis`,
    );
  }
  if (X <= 0.0) {
    return [X, Y, Z];
  }
  const den = d * d + X * X;
  const x = (d * d * X) / den;
  const z = (d * X * X) / den;
  const dx = -x;
  const dz = 0.5 * d - z;
  const n = Math.sqrt(dx * dx + dz * dz);
  return [x + (Z * dx) / n, Y, z + (Z * dz) / n];
}

/** Deform one world-space point under the given cylinder. */
export function deformPoint(p: Vec3, spec: CylinderSpec): Vec3 {
  const d = specEffectiveDiameter(spec);
  const [X, Y, Z] = toLocal(spec.frame, p);
  const [qx, qy, qz] = deformLocal(X, Y, Z, d);
  if (X <= 0.0) {
    return p;
  }
  return toWorld(spec.frame, qx, qy, qz);
}

/** Recover the world point whose deformation is q (front half-space image). */
export function inverseDeform(q: Vec3, spec: CylinderSpec): Vec3 {
  const d = specEffectiveDiameter(spec);
  const [xq, yq, zq] = toLocal(spec.frame, q);
  if (xq < 0.0) {
    throw new NotInvertible("point is behind the user's tangent plane");
  }
  const dzq = zq - 0.5 * d;
  const r = Math.sqrt(xq * xq + dzq * dzq);
  if (r === 0.0) {
    throw new NotInvertible("point lies on the cylinder axis");
  }
  if (r > 0.5 * d * (1.0 + 1e-9)) {
    throw new NotInvertible("point lies outside the cylinder band");
  }
  const Z = 0.5 * d - r;
  const scale = (0.5 * d) / r;
  const zs = 0.5 * d + dzq * scale; // radial extension of q back to the surface
  if (zs >= d * (1.0 - 1e-12)) {
    throw new NotInvertible("degenerate top point above the axis");
  }
  const X = Math.sqrt((Math.max(zs, 0.0) * d * d) / (d - zs));
  return toWorld(spec.frame, X, yq, Z);
}

// ---- 32-bit shader model -------------------------------------------------

const f = Math.fround;

/**
 * The vertex-shader deformation evaluated in strict IEEE float32, rounding
 * after every operation exactly as `SHADER_DEFORM_GLSL` is written.  Used by
 * the golden-vector agreement test and by the self-test page's CPU check.
 */
export function deformLocalF32(
  X: number,
  Y: number,
  Z: number,
  d: number,
): [number, number, number] {
  const px = f(X);
  const py = f(Y);
  const pz = f(Z);
  const dd = f(d);
  if (px <= 0.0) {
    return [px, py, pz];
  }
  const r = f(px / dd);
  const r2 = f(r * r);
  const den = f(1.0 + r2);
  const gx = f(px / den);
  const gz = f(dd * f(r2 / den));
  const nx = f(-gx);
  const nz = f(f(0.5 * dd) - gz);
  const nn = f(Math.sqrt(f(f(nx * nx) + f(nz * nz))));
  const ox = f(gx + f(pz * f(nx / nn)));
  const oz = f(gz + f(pz * f(nz / nn)));
  return [ox, py, oz];
}

/**
 * GLSL body shared by the renderer and the self-test page.  The ground
 * projection is written in ratio form (r = X/d) so float32 stays accurate
 * across the whole diameter range of the flat-to-bent transition.
 */
export const SHADER_DEFORM_GLSL = `
vec3 deformLocal(vec3 p, float d) {
  if (p.x <= 0.0) {
    return p;
  }
  float r = p.x / d;
  float r2 = r * r;
  float den = 1.0 + r2;
  float gx = p.x / den;
  float gz = d * (r2 / den);
  float nx = -gx;
  float nz = 0.5 * d - gz;
  float nn = sqrt(nx * nx + nz * nz);
  float ox = gx + p.z * (nx / nn);
  float oz = gz + p.z * (nz / nn);
  return vec3(ox, p.y, oz);
}
`;
