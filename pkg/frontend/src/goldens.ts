/**
 * Golden deformation vectors: the line-oriented text format served at
 * /api/goldens, one record per line: `X Y Z d -> x y z` in meters with 9
 * significant digits.  The self-test and the shader-agreement test replay
 * these through the client-side deformation paths.
 */

import { deformLocal, deformLocalF32 } from "./deform.js";

export interface GoldenRecord {
  readonly X: number;
  readonly Y: number;
  readonly Z: number;
  readonly d: number;
  readonly x: number;
  readonly y: number;
  readonly z: number;
}

export class GoldenFormatError extends Error {}

export function parseGoldens(text: string): GoldenRecord[] {
  const records: GoldenRecord[] = [];
  const lines = text.split("\n");
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i].trim();
    if (!line) {
      continue;
    }
    const parts = line.split(/\s+/);
    if (parts.length !== 8 || parts[4] !== "->") {
      throw new GoldenFormatError(`line ${i + 1}: expected 'X Y Z d -> x y z'`);
    }
    const nums = [parts[0], parts[1], parts[2], parts[3], parts[5], parts[6], parts[7]].map(Number);
    if (nums.some((v) => Number.isNaN(v))) {
      throw new GoldenFormatError(`line ${i + 1}: non-numeric field`);
    }
    records.push({
      X: nums[0],
      Y: nums[1],
      Z: nums[2],
      d: nums[3],
      x: nums[4],
      y: nums[5],
      z: nums[6],
    });
  }
  return records;
}

export interface AgreementReport {
  readonly count: number;
  readonly maxErrorM: number;
  readonly worst: GoldenRecord | null;
}

/** Max absolute coordinate error of an evaluator against the golden set. */
export function checkAgreement(
  records: readonly GoldenRecord[],
  evaluate: (X: number, Y: number, Z: number, d: number) => readonly [number, number, number],
): AgreementReport {
  let maxErrorM = 0.0;
  let worst: GoldenRecord | null = null;
  for (const r of records) {
    const [x, y, z] = evaluate(r.X, r.Y, r.Z, r.d);
    const err = Math.max(Math.abs(x - r.x), Math.abs(y - r.y), Math.abs(z - r.z));
    if (err > maxErrorM) {
      maxErrorM = err;
      worst = r;
    }
  }
  return { count: records.length, maxErrorM, worst };
}

/** Agreement of the 64-bit reference path (text round-trip error only). */
export function checkReference(records: readonly GoldenRecord[]): AgreementReport {
  return checkAgreement(records, (X, Y, Z, d) => deformLocal(X, Y, Z, d));
}

/** Agreement of the strict float32 shader model. */
export function checkShaderModel(records: readonly GoldenRecord[]): AgreementReport {
  return checkAgreement(records, (X, Y, Z, d) => deformLocalF32(X, Y, Z, d));
}
