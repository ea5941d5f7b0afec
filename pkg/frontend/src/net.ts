/**
 * Typed fetch helpers for the scene service API.  All endpoints are
 * immutable and cacheable; failures surface as exceptions the caller turns
 * into HUD banners (the render loop never dies on a network error).
 */

import { decodeTile, type EngineConfig, type Manifest, type SceneTile } from "./tiles.js";

export class ApiError extends Error {
  readonly status: number;

  constructor(path: string, status: number) {
    super(`${path}: HTTP ${status}`);
    this.status = status;
  }
}

async function get(path: string): Promise<Response> {
  const res = await fetch(path);
  if (!res.ok) {
    throw new ApiError(path, res.status);
  }
  return res;
}

export async function fetchManifest(base = ""): Promise<Manifest> {
  const res = await get(`${base}/api/manifest`);
  return (await res.json()) as Manifest;
}

export async function fetchConfig(base = ""): Promise<EngineConfig> {
  const res = await get(`${base}/api/config`);
  return (await res.json()) as EngineConfig;
}

export async function fetchTile(ix: number, iy: number, base = ""): Promise<SceneTile> {
  const res = await get(`${base}/api/tile/${ix}/${iy}`);
  return decodeTile(await res.arrayBuffer());
}

export async function fetchGoldensText(base = ""): Promise<string> {
  const res = await get(`${base}/api/goldens`);
  return res.text();
}

/** Fetch every tile listed in the manifest, in manifest order. */
export async function fetchAllTiles(manifest: Manifest, base = ""): Promise<SceneTile[]> {
  return Promise.all(manifest.tiles.map(([ix, iy]) => fetchTile(ix, iy, base)));
}
