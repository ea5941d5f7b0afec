/**
 * WebGL2 renderer.  Tile geometry is uploaded once in flat city coordinates
 * (relative to a per-tile anchor so float32 keeps millimetre precision) and
 * the vertex shader bends it live with the same projection the engine uses,
 * so toggling or re-centring the view never re-uploads a vertex.
 *
 * Shading is computed per-fragment from screen-space derivatives of the
 * deformed position — faceted flat shading that stays correct however far
 * the geometry is bent, with no normals in the vertex stream.  Face culling
 * is off: bent ground can legitimately show its back side.
 */

import { SHADER_DEFORM_GLSL } from "./deform.js";
import { RenderMesh } from "./mesh.js";

const VERT_SRC = `#version 300 es
precision highp float;

in vec3 a_position;
in vec3 a_color;
in float a_pickId;

uniform vec2 u_originRel;   // frame origin minus tile anchor, city metres
uniform vec2 u_forward;     // cylinder axis direction, unit
uniform float u_diameter;   // effective bend diameter
uniform mat4 u_viewProj;

out vec3 v_world;
out vec3 v_color;
flat out float v_pickId;
${SHADER_DEFORM_GLSL}
void main() {
  vec2 rel = a_position.xy - u_originRel;
  vec2 left = vec2(-u_forward.y, u_forward.x);
  vec3 local = vec3(dot(rel, u_forward), dot(rel, left), a_position.z);
  vec3 w = deformLocal(local, u_diameter);
  v_world = w;
  v_color = a_color;
  v_pickId = a_pickId;
  gl_Position = u_viewProj * vec4(w, 1.0);
}
`;

const FRAG_SRC = `#version 300 es
precision highp float;

in vec3 v_world;
in vec3 v_color;
flat in float v_pickId;

uniform vec3 u_eye;
uniform float u_highlightId;
uniform vec3 u_fogColor;
uniform float u_fogDensity;

out vec4 fragColor;

void main() {
  vec3 n = normalize(cross(dFdx(v_world), dFdy(v_world)));
  vec3 viewDir = normalize(u_eye - v_world);
  if (dot(n, viewDir) < 0.0) {
    n = -n;
  }
  vec3 lightDir = normalize(vec3(0.35, 0.25, 0.9));
  float diffuse = max(dot(n, lightDir), 0.0);
  float sky = 0.5 + 0.5 * n.z;
  vec3 shade = v_color * (0.38 + 0.47 * diffuse + 0.15 * sky);
  if (u_highlightId >= 0.5 && abs(v_pickId - u_highlightId) < 0.5) {
    shade = mix(shade, vec3(1.0, 0.85, 0.3), 0.45);
  }
  float dist = length(u_eye - v_world);
  float fog = 1.0 - exp(-u_fogDensity * dist);
  fragColor = vec4(mix(shade, u_fogColor, fog), 1.0);
}
`;

const SKY: [number, number, number] = [0.62, 0.72, 0.84];

export function compileShader(gl: WebGL2RenderingContext, type: number, src: string): WebGLShader {
  const shader = gl.createShader(type);
  if (!shader) {
    throw new Error("failed to allocate shader");
  }
  gl.shaderSource(shader, src);
  gl.compileShader(shader);
  if (!gl.getShaderParameter(shader, gl.COMPILE_STATUS)) {
    const log = gl.getShaderInfoLog(shader) ?? "unknown error";
    gl.deleteShader(shader);
    throw new Error(`shader compile failed: ${log}`);
  }
  return shader;
}

export function linkProgram(
  gl: WebGL2RenderingContext,
  vertSrc: string,
  fragSrc: string,
  beforeLink?: (program: WebGLProgram) => void,
): WebGLProgram {
  const program = gl.createProgram();
  if (!program) {
    throw new Error("failed to allocate program");
  }
  gl.attachShader(program, compileShader(gl, gl.VERTEX_SHADER, vertSrc));
  gl.attachShader(program, compileShader(gl, gl.FRAGMENT_SHADER, fragSrc));
  beforeLink?.(program);
  gl.linkProgram(program);
  if (!gl.getProgramParameter(program, gl.LINK_STATUS)) {
    throw new Error(`program link failed: ${gl.getProgramInfoLog(program) ?? "unknown error"}`);
  }
  return program;
}

interface TileBatch {
  vao: WebGLVertexArrayObject;
  indexCount: number;
  anchor: [number, number];
}

export interface DrawParams {
  frameOrigin: readonly [number, number];
  frameForward: readonly [number, number];
  diameterM: number;
  /** Camera eye, already in deformed local coordinates. */
  eye: readonly [number, number, number];
  viewProj: Float32Array;
  highlightId: number;
}

export class Renderer {
  private readonly gl: WebGL2RenderingContext;
  private readonly program: WebGLProgram;
  private readonly tiles = new Map<string, TileBatch>();
  private readonly uniforms: Record<string, WebGLUniformLocation | null>;

  constructor(gl: WebGL2RenderingContext) {
    this.gl = gl;
    this.program = linkProgram(gl, VERT_SRC, FRAG_SRC, (p) => {
      gl.bindAttribLocation(p, 0, "a_position");
      gl.bindAttribLocation(p, 1, "a_color");
      gl.bindAttribLocation(p, 2, "a_pickId");
    });
    this.uniforms = Object.fromEntries(
      [
        "u_originRel",
        "u_forward",
        "u_diameter",
        "u_viewProj",
        "u_eye",
        "u_highlightId",
        "u_fogColor",
        "u_fogDensity",
      ].map((name) => [name, gl.getUniformLocation(this.program, name)]),
    );
    gl.enable(gl.DEPTH_TEST);
    gl.disable(gl.CULL_FACE);
    gl.clearColor(SKY[0], SKY[1], SKY[2], 1.0);
  }

  /** Upload one tile's mesh; positions must already be anchor-relative. */
  uploadTile(key: string, mesh: RenderMesh, anchor: [number, number]): void {
    const gl = this.gl;
    const vao = gl.createVertexArray();
    if (!vao) {
      throw new Error("failed to allocate vertex array");
    }
    gl.bindVertexArray(vao);

    const vbo = gl.createBuffer();
    gl.bindBuffer(gl.ARRAY_BUFFER, vbo);
    gl.bufferData(gl.ARRAY_BUFFER, mesh.vertexData, gl.STATIC_DRAW);
    const stride = 7 * 4;
    gl.enableVertexAttribArray(0);
    gl.vertexAttribPointer(0, 3, gl.FLOAT, false, stride, 0);
    gl.enableVertexAttribArray(1);
    gl.vertexAttribPointer(1, 3, gl.FLOAT, false, stride, 12);
    gl.enableVertexAttribArray(2);
    gl.vertexAttribPointer(2, 1, gl.FLOAT, false, stride, 24);

    const ebo = gl.createBuffer();
    gl.bindBuffer(gl.ELEMENT_ARRAY_BUFFER, ebo);
    gl.bufferData(gl.ELEMENT_ARRAY_BUFFER, mesh.indices, gl.STATIC_DRAW);

    gl.bindVertexArray(null);
    this.tiles.set(key, { vao, indexCount: mesh.indices.length, anchor });
  }

  draw(params: DrawParams, width: number, height: number): void {
    const gl = this.gl;
    gl.viewport(0, 0, width, height);
    gl.clear(gl.COLOR_BUFFER_BIT | gl.DEPTH_BUFFER_BIT);
    gl.useProgram(this.program);

    const u = this.uniforms;
    gl.uniform2f(u.u_forward, params.frameForward[0], params.frameForward[1]);
    gl.uniform1f(u.u_diameter, params.diameterM);
    gl.uniformMatrix4fv(u.u_viewProj, false, params.viewProj);
    gl.uniform3f(u.u_eye, params.eye[0], params.eye[1], params.eye[2]);
    gl.uniform1f(u.u_highlightId, params.highlightId);
    gl.uniform3f(u.u_fogColor, SKY[0], SKY[1], SKY[2]);
    gl.uniform1f(u.u_fogDensity, 1.0 / 22000.0);

    for (const tile of this.tiles.values()) {
      gl.uniform2f(
        u.u_originRel,
        params.frameOrigin[0] - tile.anchor[0],
        params.frameOrigin[1] - tile.anchor[1],
      );
      gl.bindVertexArray(tile.vao);
      gl.drawElements(gl.TRIANGLES, tile.indexCount, gl.UNSIGNED_INT, 0);
    }
    gl.bindVertexArray(null);
  }
}
