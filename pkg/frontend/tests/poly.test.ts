import { describe, expect, it } from "vitest";

import {
  pointInPolygon,
  pointInRing,
  rayRingExit,
  Ring,
  segPolygonDist,
  segSegDist,
  signedArea,
  triangulate,
} from "../src/poly.js";

const square: Ring = [
  [0, 0],
  [10, 0],
  [10, 10],
  [0, 10],
];
// hole rings are clockwise
const hole: Ring = [
  [4, 4],
  [4, 6],
  [6, 6],
  [6, 4],
];

function triArea(verts: readonly (readonly [number, number])[], tris: readonly (readonly number[])[]): number {
  let area = 0;
  for (const [i, j, k] of tris) {
    const [ax, ay] = verts[i];
    const [bx, by] = verts[j];
    const [cx, cy] = verts[k];
    area += 0.5 * Math.abs((bx - ax) * (cy - ay) - (cx - ax) * (by - ay));
  }
  return area;
}

describe("triangulation", () => {
  it("covers a convex ring exactly", () => {
    const [verts, tris] = triangulate([square]);
    expect(tris.length).toBe(2);
    expect(triArea(verts, tris)).toBeCloseTo(100, 10);
  });

  it("subtracts holes from the covered area", () => {
    const [verts, tris] = triangulate([square, hole]);
    expect(triArea(verts, tris)).toBeCloseTo(96, 10);
  });

  it("handles a concave outline", () => {
    const lShape: Ring = [
      [0, 0],
      [10, 0],
      [10, 4],
      [4, 4],
      [4, 10],
      [0, 10],
    ];
    const [verts, tris] = triangulate([lShape]);
    expect(triArea(verts, tris)).toBeCloseTo(64, 10);
  });
});

describe("containment", () => {
  it("counts hole interiors as outside", () => {
    expect(pointInPolygon(5, 5, [square, hole])).toBe(false);
    expect(pointInPolygon(2, 2, [square, hole])).toBe(true);
    expect(pointInPolygon(11, 5, [square, hole])).toBe(false);
  });

  it("treats the boundary as inside", () => {
    expect(pointInRing(0, 5, square)).toBe(true);
    expect(pointInRing(5, 0, square)).toBe(true);
  });
});

describe("distances", () => {
  it("segment-segment distance: crossing segments touch", () => {
    expect(segSegDist([0, 0], [10, 10], [0, 10], [10, 0])).toBe(0);
  });

  it("segment-segment distance: parallel gap", () => {
    expect(segSegDist([0, 0], [10, 0], [0, 3], [10, 3])).toBeCloseTo(3, 12);
  });

  it("segment-polygon distance: inside is zero, outside is the gap", () => {
    expect(segPolygonDist([4, 5], [6, 5], [square])).toBe(0);
    expect(segPolygonDist([13, 0], [13, 10], [square])).toBeCloseTo(3, 12);
  });
});

describe("ray exit", () => {
  it("finds the exit through the far edge", () => {
    expect(rayRingExit([5, 5], [1, 0], square)).toBeCloseTo(5, 12);
    expect(rayRingExit([5, 5], [0, -1], square)).toBeCloseTo(5, 12);
  });

  it("returns null when the ray never crosses", () => {
    expect(rayRingExit([20, 20], [1, 0], square)).toBeNull();
  });
});

describe("orientation", () => {
  it("signed area is positive for counter-clockwise rings", () => {
    expect(signedArea(square)).toBe(100);
    expect(signedArea(hole)).toBe(-4);
  });
});
