/**
 * Scene-tile binary format (little-endian), as served by /api/tile/{ix}/{iy}:
 *
 *     magic     4 bytes  "RAMA"
 *     version   u16      1
 *     tile_ix   i32
 *     tile_iy   i32
 *     n_bldg    u32
 *     n_ground  u32
 *     buildings:  id_len u16, id utf-8 bytes, height f64,
 *                 ring_count u16, per ring: vertex_count u32 + count * (x f64, y f64)
 *     ground:     class u8 (0=water, 1=park, 2=road), kind u8 (0=polygon, 1=polyline),
 *                 width f64 (road ribbon width; 0 otherwise), id as above, rings as above
 */

import { ringCentroid, type Pt, type Ring } from "./poly.js";

export const TILE_MAGIC = "RAMA";
export const TILE_VERSION = 1;
export const TILE_SIZE_M = 1000.0;

export const GROUND_CLASSES = ["water", "park", "road"] as const;
export type GroundClass = (typeof GROUND_CLASSES)[number];

export class TileFormatError extends Error {}

export interface Building {
  readonly id: string;
  readonly footprint: Ring[]; // outer CCW first, then CW holes
  readonly heightM: number;
}

export interface GroundFeature {
  readonly id: string;
  readonly klass: GroundClass;
  readonly rings: Ring[]; // polygon rings, or a single polyline for roads
  readonly isLine: boolean;
  readonly widthM: number;
}

export interface SceneTile {
  readonly tileIx: number;
  readonly tileIy: number;
  readonly buildings: Building[];
  readonly ground: GroundFeature[];
}

export interface Manifest {
  readonly origin_lon: number;
  readonly origin_lat: number;
  readonly tile_size_m: number;
  readonly tiles: [number, number, number][]; // [ix, iy, byte size]
  readonly max_height_m: number;
}

/** Nav tunables served by /api/config (mirrors the engine defaults). */
export interface EngineConfig {
  readonly d_m: number;
  readonly presets_m: number[];
  readonly transition_s: number;
  readonly k_flight: number;
  readonly flight_floor_s: number;
  readonly forward_speed_mps: number;
  readonly collision_radius_m: number;
  readonly standoff_m: number;
  readonly realign_displacement_deg: number;
  readonly realign_velocity_dps: number;
  readonly realign_rate_dps: number;
  readonly realign_deadband_deg: number;
  readonly bindings?: Record<string, string>;
}

export const DEFAULT_CONFIG: EngineConfig = {
  d_m: 5000.0,
  presets_m: [5.0, 100.0, 500.0, 1000.0, 2000.0],
  transition_s: 3.0,
  k_flight: 0.15,
  flight_floor_s: 0.5,
  forward_speed_mps: 15.0,
  collision_radius_m: 1.0,
  standoff_m: 10.0,
  realign_displacement_deg: 10.0,
  realign_velocity_dps: 20.0,
  realign_rate_dps: 90.0,
  realign_deadband_deg: 0.5,
};

export function tileIndex(x: number, y: number): [number, number] {
  return [Math.floor(x / TILE_SIZE_M), Math.floor(y / TILE_SIZE_M)];
}

class Reader {
  private readonly view: DataView;
  private readonly bytes: Uint8Array;
  pos = 0;

  constructor(data: ArrayBuffer) {
    this.view = new DataView(data);
    this.bytes = new Uint8Array(data);
  }

  get length(): number {
    return this.bytes.length;
  }

  private need(n: number): void {
    if (this.pos + n > this.bytes.length) {
      throw new TileFormatError("truncated tile data");
    }
  }

  u8(): number {
    this.need(1);
    return this.view.getUint8(this.pos++);
  }

  u16(): number {
    this.need(2);
    const v = this.view.getUint16(this.pos, true);
    this.pos += 2;
    return v;
  }

  i32(): number {
    this.need(4);
    const v = this.view.getInt32(this.pos, true);
    this.pos += 4;
    return v;
  }

  u32(): number {
    this.need(4);
    const v = this.view.getUint32(this.pos, true);
    this.pos += 4;
    return v;
  }

  f64(): number {
    this.need(8);
    const v = this.view.getFloat64(this.pos, true);
    this.pos += 8;
    return v;
  }

  str(): string {
    const n = this.u16();
    this.need(n);
    const s = new TextDecoder().decode(this.bytes.subarray(this.pos, this.pos + n));
    this.pos += n;
    return s;
  }

  rings(): Ring[] {
    const nr = this.u16();
    const rings: Ring[] = [];
    for (let i = 0; i < nr; i++) {
      const nv = this.u32();
      const ring: Pt[] = [];
      for (let j = 0; j < nv; j++) {
        const x = this.f64();
        const y = this.f64();
        ring.push([x, y]);
      }
      rings.push(ring);
    }
    return rings;
  }
}

export function decodeTile(data: ArrayBuffer): SceneTile {
  const r = new Reader(data);
  const magic = new TextDecoder().decode(new Uint8Array(data, 0, Math.min(4, r.length)));
  if (magic !== TILE_MAGIC) {
    throw new TileFormatError("bad magic; not a scene tile");
  }
  r.pos = 4;
  const version = r.u16();
  if (version !== TILE_VERSION) {
    throw new TileFormatError(`unsupported tile version ${version}`);
  }
  const tileIx = r.i32();
  const tileIy = r.i32();
  const nBldg = r.u32();
  const nGround = r.u32();
  const buildings: Building[] = [];
  for (let i = 0; i < nBldg; i++) {
    const id = r.str();
    const heightM = r.f64();
    const footprint = r.rings();
    buildings.push({ id, footprint, heightM });
  }
  const ground: GroundFeature[] = [];
  for (let i = 0; i < nGround; i++) {
    const ci = r.u8();
    const kind = r.u8();
    const widthM = r.f64();
    const id = r.str();
    const rings = r.rings();
    if (ci >= GROUND_CLASSES.length) {
      throw new TileFormatError(`unknown ground class ${ci}`);
    }
    ground.push({ id, klass: GROUND_CLASSES[ci], rings, isLine: kind === 1, widthM });
  }
  if (r.pos !== r.length) {
    throw new TileFormatError("trailing bytes after tile payload");
  }
  return { tileIx, tileIy, buildings, ground };
}

export function buildingCentroid(b: Building): [number, number] {
  return ringCentroid(b.footprint[0]);
}
