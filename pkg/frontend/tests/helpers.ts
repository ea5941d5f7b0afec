/** Shared fixture loading for the node-side test suite. */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { GoldenRecord, parseGoldens } from "../src/goldens.js";
import { SceneIndex } from "../src/scene.js";
import { decodeTile, Manifest, SceneTile } from "../src/tiles.js";

export const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "..", "fixtures");

export function readFixture(name: string): string {
  return readFileSync(join(FIXTURES, name), "utf8");
}

export function loadTileBytes(name: string): ArrayBuffer {
  const buf = readFileSync(join(FIXTURES, "scene", name));
  return buf.buffer.slice(buf.byteOffset, buf.byteOffset + buf.byteLength);
}

export function loadScene(): SceneIndex {
  const manifest = JSON.parse(readFixture("scene/manifest.json")) as Manifest;
  const tiles: SceneTile[] = manifest.tiles.map(([ix, iy]) =>
    decodeTile(loadTileBytes(`tile_${ix}_${iy}.bin`)),
  );
  return new SceneIndex(tiles, manifest);
}

export function loadGoldens(): GoldenRecord[] {
  return parseGoldens(readFixture("goldens.txt"));
}

export interface LoggedEvent {
  t: number;
  kind: string;
  payload: Record<string, unknown>;
}

export function loadExpectedEvents(): LoggedEvent[] {
  return readFixture("expected_telemetry.jsonl")
    .split("\n")
    .filter((l) => l.trim().length > 0)
    .map((l) => JSON.parse(l) as LoggedEvent);
}

/** abs-or-relative closeness for replayed floating-point payloads */
export function close(a: number, b: number, tol = 1e-9): boolean {
  return Math.abs(a - b) <= tol * Math.max(1.0, Math.abs(a), Math.abs(b));
}
