/**
 * Entry point: fetch the scene from the engine service, build GPU meshes,
 * and run the interactive loop.
 *
 * Pointer lock drives mouse-look; a click while locked selects the building
 * under the center crosshair.  Key bindings come from defaults, overridden
 * by /api/config, overridden by local storage (see input.ts); the active
 * `Bindings` object is exposed as `window.ramaBindings` so keys can be
 * remapped from the console, e.g. `ramaBindings.rebind("KeyT", "toggle_rama")`.
 */

import { Client } from "./client.js";
import { Hud } from "./hud.js";
import { Action, Bindings, MouseLook } from "./input.js";
import { buildTileMesh, PickTriangles } from "./mesh.js";
import { fetchAllTiles, fetchConfig, fetchManifest } from "./net.js";
import { pickBuilding } from "./pick.js";
import { Renderer } from "./render.js";
import { SceneIndex } from "./scene.js";
import { TelemetryEvent } from "./telemetry.js";
import { TILE_SIZE_M } from "./tiles.js";

async function boot(): Promise<void> {
  const canvas = document.getElementById("view") as HTMLCanvasElement;
  const overlay = document.getElementById("overlay") as HTMLElement;
  const gl = canvas.getContext("webgl2");
  if (!gl) {
    overlay.textContent = "WebGL2 is required.";
    return;
  }

  const [config, manifest] = await Promise.all([fetchConfig(), fetchManifest()]);
  const tiles = await fetchAllTiles(manifest);
  const scene = new SceneIndex(tiles, manifest);

  // stable pick ids: 0 = unpickable ground, buildings start at 1
  const pickIdOf = new Map<string, number>();
  const idOfPick: string[] = [""];
  for (const bid of scene.buildingIds()) {
    pickIdOf.set(bid, idOfPick.length);
    idOfPick.push(bid);
  }

  const renderer = new Renderer(gl);
  const pickSets: PickTriangles[] = [];
  for (const tile of tiles) {
    const mesh = buildTileMesh(tile, (bid) => pickIdOf.get(bid) ?? 0);
    renderer.uploadTile(`${tile.tileIx},${tile.tileIy}`, mesh.render, mesh.anchor);
    pickSets.push(mesh.pick);
  }

  // start at the center of the tiled area, facing +x
  let sx = 0;
  let sy = 0;
  for (const t of tiles) {
    sx += (t.tileIx + 0.5) * TILE_SIZE_M;
    sy += (t.tileIy + 0.5) * TILE_SIZE_M;
  }
  const n = Math.max(tiles.length, 1);
  const start: [number, number] = [sx / n, sy / n];

  const bindings = new Bindings(window.localStorage, config.bindings);
  (window as unknown as Record<string, unknown>).ramaBindings = bindings;
  const client = new Client(config, scene, start, [1.0, 0.0]);
  const look = new MouseLook([1.0, 0.0]);
  const hud = new Hud(overlay, bindings);

  const aspect = (): number => canvas.width / Math.max(canvas.height, 1);

  function resize(): void {
    const dpr = window.devicePixelRatio || 1;
    canvas.width = Math.round(canvas.clientWidth * dpr);
    canvas.height = Math.round(canvas.clientHeight * dpr);
  }
  window.addEventListener("resize", resize);
  resize();

  function onAction(action: Action): void {
    switch (action) {
      case "toggle_rama":
        client.queueCommand({ kind: "ToggleRama" });
        break;
      case "move_forward":
        client.queueCommand({ kind: "MoveForward", held: true });
        break;
      case "altitude_up":
        client.queueCommand({ kind: "AltitudeUp" });
        break;
      case "altitude_down":
        client.queueCommand({ kind: "AltitudeDown" });
        break;
      case "fly_to_selection":
        if (client.selection === null) {
          hud.flash("nothing selected — click a building first", performance.now());
        } else {
          client.queueCommand({ kind: "FlyTo", building: client.selection });
        }
        break;
      case "pause_axis_toggle":
        client.queueCommand({ kind: client.state.ramaPaused ? "ResumeAxis" : "PauseAxis" });
        break;
    }
  }

  window.addEventListener("keydown", (ev) => {
    if (ev.repeat) {
      return;
    }
    const action = bindings.actionFor(ev.code);
    if (action !== null) {
      ev.preventDefault();
      onAction(action);
    }
  });
  window.addEventListener("keyup", (ev) => {
    if (bindings.actionFor(ev.code) === "move_forward") {
      client.queueCommand({ kind: "MoveForward", held: false });
    }
  });

  canvas.addEventListener("click", () => {
    if (document.pointerLockElement !== canvas) {
      canvas.requestPointerLock();
      return;
    }
    const rig = client.cameraRig(look.pitchRad, aspect(), 0);
    const ray = client.pickRayWorld(rig.view, 0, 0, aspect());
    const hit = pickBuilding(ray, pickSets, client.state.cylinder);
    client.selection = hit?.buildingId ?? null;
    if (hit) {
      hud.flash(`selected ${hit.buildingId}`, performance.now());
    }
  });
  window.addEventListener("mousemove", (ev) => {
    if (document.pointerLockElement === canvas) {
      look.apply(ev.movementX, ev.movementY);
    }
  });

  function describe(ev: TelemetryEvent): string | null {
    switch (ev.kind) {
      case "command_dropped":
        return `${ev.payload.cmd} dropped (${ev.payload.reason})`;
      case "move_blocked":
        return "path blocked";
      case "fly_start":
        return "flying…";
      default:
        return null;
    }
  }

  function loop(nowMs: number): void {
    const events = client.frame(nowMs / 1000, look.headingXy());
    for (const ev of events) {
      const msg = describe(ev);
      if (msg !== null) {
        hud.flash(msg, nowMs);
      }
    }
    const highlight = client.selection !== null ? (pickIdOf.get(client.selection) ?? 0) : 0;
    const rig = client.cameraRig(look.pitchRad, aspect(), highlight);
    renderer.draw(rig.draw, canvas.width, canvas.height);
    hud.update(client.state, client.cfg, client.selection, nowMs);
    requestAnimationFrame(loop);
  }
  requestAnimationFrame(loop);
}

boot().catch((err) => {
  const overlay = document.getElementById("overlay");
  if (overlay) {
    overlay.textContent = `failed to start: ${err instanceof Error ? err.message : String(err)}`;
  }
  console.error(err);
});
