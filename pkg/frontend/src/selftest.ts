/**
 * In-browser self-test: proves this machine renders the bend correctly.
 *
 * Three checks against the engine-served golden vectors:
 *   1. 64-bit reference math (should match to print precision),
 *   2. strict float32 shader model evaluated on the CPU,
 *   3. the actual vertex shader run on the actual GPU, captured with
 *      transform feedback.
 *
 * All three must stay under the 1e-3 m agreement budget.
 */

import { SHADER_DEFORM_GLSL } from "./deform.js";
import { checkReference, checkShaderModel, GoldenRecord, parseGoldens } from "./goldens.js";
import { fetchGoldensText } from "./net.js";
import { linkProgram } from "./render.js";

const BUDGET_M = 1e-3;

const TF_VERT = `#version 300 es
precision highp float;
in vec4 a_in; // X, Y, Z, diameter
out vec3 v_out;
${SHADER_DEFORM_GLSL}
void main() {
  v_out = deformLocal(a_in.xyz, a_in.w);
  gl_Position = vec4(0.0, 0.0, 0.0, 1.0);
}
`;

const TF_FRAG = `#version 300 es
precision highp float;
out vec4 c;
void main() { c = vec4(1.0); }
`;

/** Run the deformation shader on the GPU for every golden input. */
export function gpuEvaluate(gl: WebGL2RenderingContext, records: GoldenRecord[]): Float32Array {
  const program = linkProgram(gl, TF_VERT, TF_FRAG, (p) => {
    gl.bindAttribLocation(p, 0, "a_in");
    gl.transformFeedbackVaryings(p, ["v_out"], gl.SEPARATE_ATTRIBS);
  });
  const n = records.length;
  const input = new Float32Array(n * 4);
  for (let i = 0; i < n; i++) {
    const r = records[i];
    input.set([r.X, r.Y, r.Z, r.d], i * 4);
  }

  const vao = gl.createVertexArray();
  gl.bindVertexArray(vao);
  const vbo = gl.createBuffer();
  gl.bindBuffer(gl.ARRAY_BUFFER, vbo);
  gl.bufferData(gl.ARRAY_BUFFER, input, gl.STATIC_DRAW);
  gl.enableVertexAttribArray(0);
  gl.vertexAttribPointer(0, 4, gl.FLOAT, false, 16, 0);

  const out = gl.createBuffer();
  gl.bindBuffer(gl.TRANSFORM_FEEDBACK_BUFFER, out);
  gl.bufferData(gl.TRANSFORM_FEEDBACK_BUFFER, n * 3 * 4, gl.STREAM_READ);
  gl.bindBufferBase(gl.TRANSFORM_FEEDBACK_BUFFER, 0, out);

  gl.useProgram(program);
  gl.enable(gl.RASTERIZER_DISCARD);
  gl.beginTransformFeedback(gl.POINTS);
  gl.drawArrays(gl.POINTS, 0, n);
  gl.endTransformFeedback();
  gl.disable(gl.RASTERIZER_DISCARD);
  gl.finish();

  const result = new Float32Array(n * 3);
  gl.getBufferSubData(gl.TRANSFORM_FEEDBACK_BUFFER, 0, result);
  gl.bindVertexArray(null);
  return result;
}

function gpuMaxError(records: GoldenRecord[], outputs: Float32Array): number {
  let worst = 0.0;
  for (let i = 0; i < records.length; i++) {
    const r = records[i];
    worst = Math.max(
      worst,
      Math.abs(outputs[i * 3] - r.x),
      Math.abs(outputs[i * 3 + 1] - r.y),
      Math.abs(outputs[i * 3 + 2] - r.z),
    );
  }
  return worst;
}

function row(table: HTMLTableElement, name: string, detail: string, ok: boolean): void {
  const tr = table.insertRow();
  tr.className = ok ? "pass" : "fail";
  tr.insertCell().textContent = name;
  tr.insertCell().textContent = detail;
  tr.insertCell().textContent = ok ? "PASS" : "FAIL";
}

async function run(): Promise<void> {
  const table = document.getElementById("results") as HTMLTableElement;
  const banner = document.getElementById("banner") as HTMLElement;
  let allOk = true;

  const records = parseGoldens(await fetchGoldensText());
  const fmt = (e: number): string => e.toExponential(3);

  const ref = checkReference(records);
  const refOk = ref.maxErrorM < BUDGET_M;
  allOk &&= refOk;
  row(table, "64-bit reference on CPU", `${ref.count} vectors, max ${fmt(ref.maxErrorM)} m`, refOk);

  const f32 = checkShaderModel(records);
  const f32Ok = f32.maxErrorM < BUDGET_M;
  allOk &&= f32Ok;
  row(table, "strict float32 shader model on CPU", `${f32.count} vectors, max ${fmt(f32.maxErrorM)} m`, f32Ok);

  const canvas = document.createElement("canvas");
  const gl = canvas.getContext("webgl2");
  if (!gl) {
    row(table, "vertex shader on GPU", "WebGL2 unavailable", false);
    allOk = false;
  } else {
    try {
      const err = gpuMaxError(records, gpuEvaluate(gl, records));
      const ok = err < BUDGET_M;
      allOk &&= ok;
      row(table, "vertex shader on GPU", `${records.length} vectors, max ${fmt(err)} m`, ok);
    } catch (e) {
      row(table, "vertex shader on GPU", e instanceof Error ? e.message : String(e), false);
      allOk = false;
    }
  }

  banner.textContent = allOk
    ? `all checks under ${BUDGET_M} m`
    : "FAILED — this machine does not reproduce the reference bend";
  banner.className = allOk ? "pass" : "fail";
}

run().catch((err) => {
  const banner = document.getElementById("banner");
  if (banner) {
    banner.textContent = `self-test crashed: ${err instanceof Error ? err.message : String(err)}`;
    banner.className = "fail";
  }
  console.error(err);
});
