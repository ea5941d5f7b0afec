/**
 * 2-D polygon and segment helpers shared by the scene index, collision
 * checks, picking, and mesh building.
 *
 * Rings are arrays of [x, y] pairs without a repeated closing vertex.
 * Outer rings are counter-clockwise, holes clockwise (already normalized by
 * the ingest pipeline that produced the tiles).
 */

export type Pt = readonly [number, number];
export type Ring = readonly Pt[];

export class BadPolygon extends Error {}

/** Shoelace area: positive for counter-clockwise rings. */
export function signedArea(ring: Ring): number {
  let a = 0.0;
  const n = ring.length;
  for (let i = 0; i < n; i++) {
    const [x0, y0] = ring[i];
    const [x1, y1] = ring[(i + 1) % n];
    a += x0 * y1 - x1 * y0;
  }
  return 0.5 * a;
}

/** Area centroid of a simple ring (vertex mean if degenerate). */
export function ringCentroid(ring: Ring): [number, number] {
  const a = signedArea(ring);
  const n = ring.length;
  if (Math.abs(a) < 1e-12) {
    let sx = 0.0;
    let sy = 0.0;
    for (const [x, y] of ring) {
      sx += x;
      sy += y;
    }
    return [sx / n, sy / n];
  }
  let cx = 0.0;
  let cy = 0.0;
  for (let i = 0; i < n; i++) {
    const [x0, y0] = ring[i];
    const [x1, y1] = ring[(i + 1) % n];
    const w = x0 * y1 - x1 * y0;
    cx += (x0 + x1) * w;
    cy += (y0 + y1) * w;
  }
  return [cx / (6.0 * a), cy / (6.0 * a)];
}

function cross(a: Pt, b: Pt, c: Pt): number {
  return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
}

function onSegment(a: Pt, b: Pt, p: Pt): boolean {
  return (
    Math.min(a[0], b[0]) <= p[0] &&
    p[0] <= Math.max(a[0], b[0]) &&
    Math.min(a[1], b[1]) <= p[1] &&
    p[1] <= Math.max(a[1], b[1])
  );
}

function segIntersects(p1: Pt, p2: Pt, p3: Pt, p4: Pt, touchOk: boolean): boolean {
  const d1 = cross(p3, p4, p1);
  const d2 = cross(p3, p4, p2);
  const d3 = cross(p1, p2, p3);
  const d4 = cross(p1, p2, p4);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  if (touchOk) {
    return false;
  }
  if (d1 === 0 && onSegment(p3, p4, p1)) return true;
  if (d2 === 0 && onSegment(p3, p4, p2)) return true;
  if (d3 === 0 && onSegment(p1, p2, p3)) return true;
  if (d4 === 0 && onSegment(p1, p2, p4)) return true;
  return false;
}

/** Ray-cast parity test (boundary points count as inside). */
export function pointInRing(x: number, y: number, ring: Ring): boolean {
  let inside = false;
  const n = ring.length;
  for (let i = 0; i < n; i++) {
    const [x0, y0] = ring[i];
    const [x1, y1] = ring[(i + 1) % n];
    if (y0 > y !== y1 > y) {
      const t = (y - y0) / (y1 - y0);
      const xi = x0 + t * (x1 - x0);
      if (x < xi) {
        inside = !inside;
      } else if (x === xi) {
        return true;
      }
    }
  }
  return inside;
}

/** Inside the outer ring and outside every hole. */
export function pointInPolygon(x: number, y: number, rings: readonly Ring[]): boolean {
  if (rings.length === 0 || !pointInRing(x, y, rings[0])) {
    return false;
  }
  let crossings = 0;
  for (let i = 1; i < rings.length; i++) {
    if (pointInRing(x, y, rings[i])) crossings++;
  }
  return crossings % 2 === 0;
}

export function segPointDist(a: Pt, b: Pt, p: Pt): number {
  const dx = b[0] - a[0];
  const dy = b[1] - a[1];
  const L2 = dx * dx + dy * dy;
  if (L2 === 0.0) {
    return Math.hypot(p[0] - a[0], p[1] - a[1]);
  }
  let t = ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / L2;
  t = Math.min(1.0, Math.max(0.0, t));
  return Math.hypot(p[0] - (a[0] + t * dx), p[1] - (a[1] + t * dy));
}

/** Minimum distance between two 2-D segments (0 if they cross). */
export function segSegDist(a1: Pt, a2: Pt, b1: Pt, b2: Pt): number {
  if (segIntersects(a1, a2, b1, b2, false)) {
    return 0.0;
  }
  return Math.min(
    segPointDist(a1, a2, b1),
    segPointDist(a1, a2, b2),
    segPointDist(b1, b2, a1),
    segPointDist(b1, b2, a2),
  );
}

/** Distance from segment ab to a polygon (0 if either endpoint is inside). */
export function segPolygonDist(a: Pt, b: Pt, rings: readonly Ring[]): number {
  if (pointInPolygon(a[0], a[1], rings) || pointInPolygon(b[0], b[1], rings)) {
    return 0.0;
  }
  let best = Infinity;
  for (const ring of rings) {
    const n = ring.length;
    for (let i = 0; i < n; i++) {
      best = Math.min(best, segSegDist(a, b, ring[i], ring[(i + 1) % n]));
      if (best === 0.0) {
        return 0.0;
      }
    }
  }
  return best;
}

/** Largest t >= 0 with origin + t*direction on the ring boundary. */
export function rayRingExit(origin: Pt, direction: Pt, ring: Ring): number | null {
  const [ox, oy] = origin;
  const [dx, dy] = direction;
  let best: number | null = null;
  const n = ring.length;
  for (let i = 0; i < n; i++) {
    const [x0, y0] = ring[i];
    const [x1, y1] = ring[(i + 1) % n];
    const ex = x1 - x0;
    const ey = y1 - y0;
    const den = dx * ey - dy * ex;
    if (den === 0.0) {
      continue;
    }
    // solve origin + t*dir == ring[i] + s*edge
    const t = ((x0 - ox) * ey - (y0 - oy) * ex) / den;
    const s = ((x0 - ox) * dy - (y0 - oy) * dx) / den;
    if (t >= 0.0 && s >= 0.0 && s <= 1.0) {
      if (best === null || t > best) {
        best = t;
      }
    }
  }
  return best;
}

// ---- triangulation ---------------------------------------------------------

export type Tri = readonly [number, number, number];

/**
 * Ear-clip a polygon with holes into triangles.
 *
 * Returns [vertices, triangles] where triangles index into vertices; hole
 * rings are bridged into the outer ring first.  Rings must be normalized
 * (outer CCW, holes CW) and simple.
 */
export function triangulate(rings: readonly Ring[]): [Pt[], Tri[]] {
  const outer = [...rings[0]];
  const holes = rings.slice(1).map((h) => [...h]);
  if (outer.length < 3) {
    throw new BadPolygon("outer ring needs at least 3 vertices");
  }
  const verts: Pt[] = [...outer];
  let chain = outer.map((_, i) => i);
  holes.sort((a, b) => Math.max(...b.map((p) => p[0])) - Math.max(...a.map((p) => p[0])));
  for (const hole of holes) {
    chain = bridgeHole(verts, chain, hole);
  }
  const tris = earClip(verts, chain);
  return [verts, tris];
}

function bridgeHole(verts: Pt[], chain: number[], hole: Pt[]): number[] {
  // connect the hole's rightmost vertex to a visible chain vertex with a
  // double edge (classic hole elimination)
  let k = 0;
  for (let i = 1; i < hole.length; i++) {
    if (hole[i][0] > hole[k][0] || (hole[i][0] === hole[k][0] && hole[i][1] > hole[k][1])) {
      k = i;
    }
  }
  const [hx, hy] = hole[k];
  let bestI: number | null = null;
  let bestD = Infinity;
  for (let idx = 0; idx < chain.length; idx++) {
    const [vx, vy] = verts[chain[idx]];
    if (vx < hx) {
      continue;
    }
    const d = (vx - hx) ** 2 + (vy - hy) ** 2;
    if (d < bestD && bridgeClear(verts, chain, [hx, hy], [vx, vy], idx)) {
      bestD = d;
      bestI = idx;
    }
  }
  if (bestI === null) {
    // fall back to the nearest chain vertex regardless of visibility
    bestI = 0;
    let nearest = Infinity;
    for (let idx = 0; idx < chain.length; idx++) {
      const d = (verts[chain[idx]][0] - hx) ** 2 + (verts[chain[idx]][1] - hy) ** 2;
      if (d < nearest) {
        nearest = d;
        bestI = idx;
      }
    }
  }
  const base = verts.length;
  verts.push(...hole);
  const holeIdx: number[] = [];
  for (let j = 0; j <= hole.length; j++) {
    holeIdx.push(base + ((k + j) % hole.length));
  }
  // splice: ...chain[bestI], hole[k..k], chain[bestI]...
  return [...chain.slice(0, bestI + 1), ...holeIdx, ...chain.slice(bestI)];
}

function bridgeClear(verts: Pt[], chain: number[], p: Pt, q: Pt, skipIdx: number): boolean {
  const n = chain.length;
  for (let i = 0; i < n; i++) {
    const j = (i + 1) % n;
    if (i === skipIdx || j === skipIdx) {
      continue;
    }
    if (segIntersects(p, q, verts[chain[i]], verts[chain[j]], true)) {
      return false;
    }
  }
  return true;
}

function samePt(a: Pt, b: Pt): boolean {
  return a[0] === b[0] && a[1] === b[1];
}

function earClip(verts: Pt[], chain: number[]): Tri[] {
  const idx = [...chain];
  const tris: Tri[] = [];
  let guard = 0;
  const limit = 4 * idx.length * idx.length + 64;
  while (idx.length > 3) {
    guard++;
    if (guard > limit) {
      throw new BadPolygon("ear clipping failed; ring is likely self-intersecting");
    }
    const n = idx.length;
    let clipped = false;
    for (let i = 0; i < n; i++) {
      const ia = idx[(i - 1 + n) % n];
      const ib = idx[i];
      const ic = idx[(i + 1) % n];
      const a = verts[ia];
      const b = verts[ib];
      const c = verts[ic];
      const cr = cross(a, b, c);
      if (cr < 0.0) {
        continue;
      }
      if (cr === 0.0) {
        // collinear ear: drop the middle vertex, no triangle
        idx.splice(i, 1);
        clipped = true;
        break;
      }
      if (earEmpty(verts, idx, i, a, b, c)) {
        tris.push([ia, ib, ic]);
        idx.splice(i, 1);
        clipped = true;
        break;
      }
    }
    if (!clipped) {
      throw new BadPolygon("no ear found; ring is not simple");
    }
  }
  if (idx.length === 3) {
    const [a, b, c] = idx.map((k) => verts[k]);
    if (cross(a, b, c) > 0.0) {
      tris.push([idx[0], idx[1], idx[2]]);
    }
  }
  return tris;
}

function earEmpty(verts: Pt[], idx: number[], i: number, a: Pt, b: Pt, c: Pt): boolean {
  const n = idx.length;
  const prev = i === 0 ? n - 1 : i - 1;
  const next = (i + 1) % n;
  for (let j = 0; j < n; j++) {
    if (j === prev || j === i || j === next) {
      continue;
    }
    const p = verts[idx[j]];
    if (samePt(p, a) || samePt(p, b) || samePt(p, c)) {
      continue;
    }
    if (cross(a, b, p) >= 0 && cross(b, c, p) >= 0 && cross(c, a, p) >= 0) {
      return false;
    }
  }
  return true;
}
