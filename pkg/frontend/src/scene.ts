/**
 * All tiles of a scene held in memory, with the collision and lookup
 * helpers the navigation state machine needs.  Matches the engine's scene
 * index math exactly so client-side prediction replays server simulations.
 */

import { type Pt } from "./poly.js";
import { rayRingExit, segPolygonDist } from "./poly.js";
import {
  buildingCentroid,
  tileIndex,
  TILE_SIZE_M,
  type Building,
  type Manifest,
  type SceneTile,
} from "./tiles.js";

export class SceneIndex {
  readonly tiles: SceneTile[];
  readonly manifest: Manifest | null;
  private readonly byId = new Map<string, Building>();
  private readonly grid = new Map<string, Building[]>();

  constructor(tiles: SceneTile[], manifest: Manifest | null = null) {
    this.tiles = tiles;
    this.manifest = manifest;
    for (const t of tiles) {
      for (const b of t.buildings) {
        this.byId.set(b.id, b);
        const [cx, cy] = buildingCentroid(b);
        const [ix, iy] = tileIndex(cx, cy);
        const key = `${ix},${iy}`;
        const cell = this.grid.get(key);
        if (cell) {
          cell.push(b);
        } else {
          this.grid.set(key, [b]);
        }
      }
    }
  }

  building(bid: string): Building | null {
    return this.byId.get(bid) ?? null;
  }

  buildingCount(): number {
    return this.byId.size;
  }

  buildingIds(): string[] {
    return [...this.byId.keys()];
  }

  private *near(x: number, y: number, reachM: number): Generator<Building> {
    const r = Math.ceil(reachM / TILE_SIZE_M) + 1;
    const [ix0, iy0] = tileIndex(x, y);
    for (let ix = ix0 - r; ix <= ix0 + r; ix++) {
      for (let iy = iy0 - r; iy <= iy0 + r; iy++) {
        const cell = this.grid.get(`${ix},${iy}`);
        if (cell) {
          yield* cell;
        }
      }
    }
  }

  /** True when the swept disc from p0 to p1 (x, y) at `altitudeM` hits a
   * building taller than the altitude. */
  blocked(p0: Pt, p1: Pt, radiusM: number, altitudeM: number): boolean {
    const reach = radiusM + Math.hypot(p1[0] - p0[0], p1[1] - p0[1]) + TILE_SIZE_M;
    for (const b of this.near(p0[0], p0[1], reach)) {
      if (b.heightM <= altitudeM) {
        continue;
      }
      if (segPolygonDist(p0, p1, b.footprint) <= radiusM) {
        return true;
      }
    }
    return false;
  }

  /** Point `standoffM` outside the footprint boundary, on the horizontal ray
   * from the building centroid toward `fromXy`. */
  standoffPoint(bid: string, fromXy: Pt, standoffM = 10.0): [number, number] | null {
    const b = this.byId.get(bid);
    if (!b) {
      return null;
    }
    const [cx, cy] = buildingCentroid(b);
    let dx = fromXy[0] - cx;
    let dy = fromXy[1] - cy;
    let n = Math.hypot(dx, dy);
    if (n < 1e-12) {
      dx = 1.0;
      dy = 0.0;
      n = 1.0;
    }
    dx = dx / n;
    dy = dy / n;
    let t = rayRingExit([cx, cy], [dx, dy], b.footprint[0]);
    if (t === null) {
      t = 0.0;
    }
    return [cx + (t + standoffM) * dx, cy + (t + standoffM) * dy];
  }
}
