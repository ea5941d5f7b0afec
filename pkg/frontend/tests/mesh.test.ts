import { describe, expect, it } from "vitest";

import { buildTileMesh, FLOATS_PER_VERTEX, TileMesh } from "../src/mesh.js";
import { decodeTile, SceneTile, TILE_SIZE_M } from "../src/tiles.js";
import { loadTileBytes } from "./helpers.js";

function loadTile(name: string): SceneTile {
  return decodeTile(loadTileBytes(name));
}

const PICK_IDS: Record<string, number> = { "courtyard-house": 1, "tower-east": 2 };
const pickIdOf = (id: string): number => PICK_IDS[id] ?? 99;

function build(name: string): [SceneTile, TileMesh] {
  const tile = loadTile(name);
  return [tile, buildTileMesh(tile, pickIdOf)];
}

describe("render buffer layout", () => {
  it("is interleaved in 7-float vertices with in-range indices", () => {
    const [, mesh] = build("tile_0_0.bin");
    const { vertexData, indices } = mesh.render;
    expect(vertexData.length % FLOATS_PER_VERTEX).toBe(0);
    expect(indices.length % 3).toBe(0);
    const nVerts = vertexData.length / FLOATS_PER_VERTEX;
    for (const ix of indices) {
      expect(ix).toBeLessThan(nVerts);
    }
  });

  it("rebases positions around the tile corner", () => {
    const [tile, mesh] = build("tile_-1_-1.bin");
    expect(mesh.anchor).toEqual([-TILE_SIZE_M, -TILE_SIZE_M]);
    expect(tile.tileIx).toBe(-1);
    const v = mesh.render.vertexData;
    // rebased coordinates stay near [0, tile size] even for a negative tile
    // (ribbons may overhang by half a road width)
    for (let i = 0; i < v.length; i += FLOATS_PER_VERTEX) {
      expect(v[i]).toBeGreaterThan(-50.0);
      expect(v[i]).toBeLessThan(TILE_SIZE_M + 50.0);
      expect(v[i + 1]).toBeGreaterThan(-50.0);
      expect(v[i + 1]).toBeLessThan(TILE_SIZE_M + 50.0);
    }
    // the terrain quad's first corner is the anchor itself
    expect(v[0]).toBe(0.0);
    expect(v[1]).toBe(0.0);
    expect(v[2]).toBe(0.0);
  });

  it("tags building vertices with their pick id and ground with zero", () => {
    const [, mesh] = build("tile_0_0.bin");
    const v = mesh.render.vertexData;
    const ids = new Set<number>();
    for (let i = 0; i < v.length; i += FLOATS_PER_VERTEX) {
      ids.add(v[i + 6]);
    }
    expect(ids.has(0)).toBe(true); // terrain + decals
    expect(ids.has(PICK_IDS["courtyard-house"])).toBe(true);
    expect(ids.has(PICK_IDS["tower-east"])).toBe(true);
    expect([...ids].every((x) => x === 0 || x === 1 || x === 2)).toBe(true);
  });

  it("extrudes buildings to their full height", () => {
    const [, mesh] = build("tile_0_0.bin");
    const v = mesh.render.vertexData;
    let zMax = -Infinity;
    for (let i = 0; i < v.length; i += FLOATS_PER_VERTEX) {
      zMax = Math.max(zMax, v[i + 2]);
    }
    expect(zMax).toBe(120.0); // the tallest building in this tile
  });

  it("lifts ground decals slightly above the terrain plane", () => {
    const [, mesh] = build("tile_0_0.bin"); // contains a road line
    const v = mesh.render.vertexData;
    const zs = new Set<number>();
    for (let i = 0; i < v.length; i += FLOATS_PER_VERTEX) {
      zs.add(v[i + 2]);
    }
    expect([...zs].some((z) => z > 0.0 && z < 0.5)).toBe(true);
  });
});

describe("pick triangles", () => {
  it("keeps absolute 64-bit world coordinates, buildings only", () => {
    const [, mesh] = build("tile_-1_-1.bin");
    const { tris, buildingOf } = mesh.pick;
    expect(tris.length).toBe(buildingOf.length * 9);
    expect(buildingOf.length).toBeGreaterThan(0);
    for (const id of buildingOf) {
      expect(["city-hall", "row-house-1", "row-house-2", "row-house-3", "row-house-4"]).toContain(id);
    }
    // absolute coordinates: this tile lives entirely at negative x/y
    for (let i = 0; i < tris.length; i += 3) {
      expect(tris[i]).toBeLessThanOrEqual(0.0);
      expect(tris[i + 1]).toBeLessThanOrEqual(0.0);
    }
  });

  it("covers each building's roof at its height", () => {
    const [tile, mesh] = build("tile_0_0.bin");
    const tower = tile.buildings.find((b) => b.id === "tower-east")!;
    const roofZs = new Set<number>();
    for (let i = 0; i < mesh.pick.buildingOf.length; i++) {
      if (mesh.pick.buildingOf[i] === "tower-east") {
        roofZs.add(mesh.pick.tris[i * 9 + 2]);
      }
    }
    expect(roofZs.has(tower.heightM)).toBe(true); // roof triangles
    expect(roofZs.has(0.0)).toBe(true); // wall triangles reach the ground
  });
});
