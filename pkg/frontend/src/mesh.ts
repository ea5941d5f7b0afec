/**
 * Tile geometry: footprints + heights in, GPU-ready buffers out.
 *
 * Buildings are extruded client-side (roof ear-clipped at the building
 * height, one wall quad per ring edge); ground features become thin decals
 * slightly above the terrain plane.  Every vertex carries a flat color and
 * a pick id so the shader can tint the selected building.  A parallel
 * 64-bit triangle list (roofs + walls of every building) feeds CPU picking.
 */

import { triangulate, type Ring } from "./poly.js";
import { TILE_SIZE_M, type SceneTile } from "./tiles.js";

// interleaved layout: position xyz, color rgb, pick id
export const FLOATS_PER_VERTEX = 7;

export interface RenderMesh {
  readonly vertexData: Float32Array;
  readonly indices: Uint32Array;
}

export interface PickTriangles {
  /** 9 floats per triangle (world coordinates, 64-bit). */
  readonly tris: Float64Array;
  /** building id per triangle */
  readonly buildingOf: string[];
}

export interface TileMesh {
  readonly render: RenderMesh;
  readonly pick: PickTriangles;
  /** City-frame offset the render vertices were rebased around. */
  readonly anchor: [number, number];
}

const COLOR_BUILDING: [number, number, number] = [0.72, 0.7, 0.65];
const COLOR_ROOF: [number, number, number] = [0.78, 0.76, 0.71];
const COLOR_GROUND: [number, number, number] = [0.82, 0.81, 0.79];
const COLOR_WATER: [number, number, number] = [0.45, 0.62, 0.78];
const COLOR_PARK: [number, number, number] = [0.55, 0.72, 0.52];
const COLOR_ROAD: [number, number, number] = [0.32, 0.32, 0.34];

// decal lift per ground class, meters above the terrain plane
const LIFT = { water: 0.02, park: 0.04, road: 0.06 } as const;

class MeshBuilder {
  verts: number[] = [];
  indices: number[] = [];

  /** Rebase offset, subtracted in 64-bit before float32 quantization so a
   * far-from-origin city keeps millimetre vertex precision. */
  constructor(private readonly ax = 0.0, private readonly ay = 0.0) {}

  vertex(x: number, y: number, z: number, color: readonly number[], pickId: number): number {
    const i = this.verts.length / FLOATS_PER_VERTEX;
    this.verts.push(x - this.ax, y - this.ay, z, color[0], color[1], color[2], pickId);
    return i;
  }

  tri(a: number, b: number, c: number): void {
    this.indices.push(a, b, c);
  }

  build(): RenderMesh {
    return {
      vertexData: new Float32Array(this.verts),
      indices: new Uint32Array(this.indices),
    };
  }
}

function addPolygon(
  b: MeshBuilder,
  rings: readonly Ring[],
  z: number,
  color: readonly number[],
  pickId: number,
  pickOut: { tris: number[]; ids: string[]; id: string } | null,
): void {
  const [verts, tris] = triangulate(rings);
  const base: number[] = verts.map((p) => b.vertex(p[0], p[1], z, color, pickId));
  for (const [i, j, k] of tris) {
    b.tri(base[i], base[j], base[k]);
    if (pickOut) {
      pickOut.tris.push(
        verts[i][0], verts[i][1], z,
        verts[j][0], verts[j][1], z,
        verts[k][0], verts[k][1], z,
      );
      pickOut.ids.push(pickOut.id);
    }
  }
}

function addWalls(
  b: MeshBuilder,
  rings: readonly Ring[],
  height: number,
  color: readonly number[],
  pickId: number,
  pickOut: { tris: number[]; ids: string[]; id: string } | null,
): void {
  for (const ring of rings) {
    const n = ring.length;
    for (let i = 0; i < n; i++) {
      const [x0, y0] = ring[i];
      const [x1, y1] = ring[(i + 1) % n];
      const a = b.vertex(x0, y0, 0, color, pickId);
      const c = b.vertex(x1, y1, 0, color, pickId);
      const d = b.vertex(x1, y1, height, color, pickId);
      const e = b.vertex(x0, y0, height, color, pickId);
      b.tri(a, c, d);
      b.tri(a, d, e);
      if (pickOut) {
        pickOut.tris.push(x0, y0, 0, x1, y1, 0, x1, y1, height);
        pickOut.ids.push(pickOut.id);
        pickOut.tris.push(x0, y0, 0, x1, y1, height, x0, y0, height);
        pickOut.ids.push(pickOut.id);
      }
    }
  }
}

/** Ribbon quads along a polyline, `width` meters wide, no corner joins. */
function addRibbon(b: MeshBuilder, line: Ring, width: number, z: number, color: readonly number[]): void {
  const half = Math.max(width, 1.0) / 2;
  for (let i = 0; i + 1 < line.length; i++) {
    const [x0, y0] = line[i];
    const [x1, y1] = line[i + 1];
    const dx = x1 - x0;
    const dy = y1 - y0;
    const len = Math.hypot(dx, dy);
    if (len === 0) {
      continue;
    }
    const nx = (-dy / len) * half;
    const ny = (dx / len) * half;
    const a = b.vertex(x0 + nx, y0 + ny, z, color, 0);
    const c = b.vertex(x0 - nx, y0 - ny, z, color, 0);
    const d = b.vertex(x1 - nx, y1 - ny, z, color, 0);
    const e = b.vertex(x1 + nx, y1 + ny, z, color, 0);
    b.tri(a, c, d);
    b.tri(a, d, e);
  }
}

/**
 * Build the render mesh + pick triangles of one tile.
 *
 * `pickIdOf` assigns the per-vertex pick id (stable across tiles so the
 * highlight uniform can address any building in the scene).
 */
export function buildTileMesh(tile: SceneTile, pickIdOf: (buildingId: string) => number): TileMesh {
  const x0 = tile.tileIx * TILE_SIZE_M;
  const y0 = tile.tileIy * TILE_SIZE_M;
  const b = new MeshBuilder(x0, y0);
  const pick = { tris: [] as number[], ids: [] as string[], id: "" };

  // terrain plane for the tile footprint
  const x1 = x0 + TILE_SIZE_M;
  const y1 = y0 + TILE_SIZE_M;
  const g0 = b.vertex(x0, y0, 0, COLOR_GROUND, 0);
  const g1 = b.vertex(x1, y0, 0, COLOR_GROUND, 0);
  const g2 = b.vertex(x1, y1, 0, COLOR_GROUND, 0);
  const g3 = b.vertex(x0, y1, 0, COLOR_GROUND, 0);
  b.tri(g0, g1, g2);
  b.tri(g0, g2, g3);

  for (const g of tile.ground) {
    if (g.isLine) {
      addRibbon(b, g.rings[0], g.widthM, LIFT.road, COLOR_ROAD);
    } else {
      const color = g.klass === "water" ? COLOR_WATER : g.klass === "park" ? COLOR_PARK : COLOR_ROAD;
      addPolygon(b, g.rings, LIFT[g.klass], color, 0, null);
    }
  }

  for (const bl of tile.buildings) {
    const pid = pickIdOf(bl.id);
    pick.id = bl.id;
    addWalls(b, bl.footprint, bl.heightM, COLOR_BUILDING, pid, pick);
    addPolygon(b, bl.footprint, bl.heightM, COLOR_ROOF, pid, pick);
  }

  return {
    render: b.build(),
    pick: { tris: new Float64Array(pick.tris), buildingOf: pick.ids },
    anchor: [x0, y0],
  };
}
