/** DOM overlay: mode line, altitude, selection, transient banners, help. */

import { ACTION_LABELS, Bindings } from "./input.js";
import { NavState } from "./nav.js";
import { EngineConfig } from "./tiles.js";

const MODE_LABELS: Record<string, string> = {
  Flat: "flat city",
  EnteringRama: "bending up…",
  RamaActive: "bent view",
  ExitingRama: "flattening…",
  Flying: "flying",
  ChangingAltitude: "changing altitude",
};

export class Hud {
  private readonly status: HTMLDivElement;
  private readonly banner: HTMLDivElement;
  private readonly help: HTMLDivElement;
  private bannerUntil = 0;

  constructor(root: HTMLElement, bindings: Bindings) {
    this.status = document.createElement("div");
    this.status.className = "hud-status";
    this.banner = document.createElement("div");
    this.banner.className = "hud-banner";
    this.banner.style.display = "none";
    this.help = document.createElement("div");
    this.help.className = "hud-help";
    this.help.textContent = helpText(bindings);
    root.append(this.status, this.banner, this.help);
  }

  update(state: NavState, cfg: EngineConfig, selection: string | null, nowMs: number): void {
    const alt = cfg.presets_m[state.altitudeIx];
    const parts = [
      `mode: ${MODE_LABELS[state.mode] ?? state.mode}`,
      `altitude: ${alt} m`,
      `pos: ${state.cameraPos.x.toFixed(0)}, ${state.cameraPos.y.toFixed(0)}`,
    ];
    if (state.ramaPaused) {
      parts.push("axis paused");
    }
    if (selection !== null) {
      parts.push(`selected: ${selection}`);
    }
    this.status.textContent = parts.join("   ");
    if (this.bannerUntil !== 0 && nowMs >= this.bannerUntil) {
      this.banner.style.display = "none";
      this.bannerUntil = 0;
    }
  }

  flash(message: string, nowMs: number, durationMs = 2500): void {
    this.banner.textContent = message;
    this.banner.style.display = "block";
    this.bannerUntil = nowMs + durationMs;
  }
}

function helpText(bindings: Bindings): string {
  const keys = bindings
    .entries()
    .map(([code, action]) => `${code.replace(/^Key/, "")}: ${ACTION_LABELS[action]}`);
  return ["click canvas for mouse-look, click again to select", ...keys].join("  ·  ");
}
