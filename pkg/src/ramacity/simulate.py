"""Scripted navigation sessions: parse a JSON-lines script, run the fixed-dt
tick loop, write the telemetry log, metrics JSON, and a plain-text table.

Script lines look like `{"t": 1.5, "cmd": "toggle_rama", "args": {}}`.  Most
commands map one-to-one onto navigation commands; three are runner
directives: `init` (starting pose, t=0 only), `pointing_sample` (record a
pointing-error measurement), and `end_session` (sets the session duration).
"""

from __future__ import annotations

import json
import math
from pathlib import Path

from . import nav, telemetry
from .config import Config

TICK_DT = 1.0 / 90.0

NAV_COMMANDS = {
    "toggle_rama",
    "move_forward",
    "altitude_up",
    "altitude_down",
    "fly_to",
    "pause_axis",
    "resume_axis",
    "set_head_pose",
}
DIRECTIVES = {"init", "pointing_sample", "end_session"}


class ScriptError(ValueError):
    def __init__(self, msg, line: int):
        super().__init__(f"line {line}: {msg}")
        self.line = line


def parse_script(text: str):
    """Validated list of (t, cmd, args, line_no), in script order."""
    entries = []
    last_t = -math.inf
    for line_no, raw in enumerate(text.splitlines(), start=1):
        raw = raw.strip()
        if not raw or raw.startswith("#"):
            continue
        try:
            doc = json.loads(raw)
        except json.JSONDecodeError as e:
            raise ScriptError(f"invalid JSON: {e.msg}", line_no) from e
        if not isinstance(doc, dict) or "t" not in doc or "cmd" not in doc:
            raise ScriptError("each entry needs \"t\" and \"cmd\"", line_no)
        t = doc["t"]
        cmd = doc["cmd"]
        args = doc.get("args", {})
        if not isinstance(t, (int, float)) or t < 0:
            raise ScriptError(f"bad time {t!r}", line_no)
        if t < last_t:
            raise ScriptError(f"time {t} goes backwards", line_no)
        last_t = t
        if cmd not in NAV_COMMANDS | DIRECTIVES:
            raise ScriptError(f"unknown command {cmd!r}", line_no)
        if cmd == "init" and (entries or t != 0):
            raise ScriptError("init must be the first entry, at t=0", line_no)
        _validate_args(cmd, args, line_no)
        entries.append((float(t), cmd, args, line_no))
    return entries


def _validate_args(cmd, args, line_no):
    if not isinstance(args, dict):
        raise ScriptError("args must be an object", line_no)

    def need(key, kind):
        if key not in args:
            raise ScriptError(f"{cmd} needs args.{key}", line_no)
        v = args[key]
        if kind == "vec2" and not (isinstance(v, list) and len(v) == 2):
            raise ScriptError(f"{cmd} args.{key} must be [x, y]", line_no)
        if kind == "vec3" and not (isinstance(v, list) and len(v) == 3):
            raise ScriptError(f"{cmd} args.{key} must be [x, y, z]", line_no)
        if kind == "bool" and not isinstance(v, bool):
            raise ScriptError(f"{cmd} args.{key} must be true/false", line_no)
        return v

    if cmd == "move_forward":
        need("held", "bool")
    elif cmd == "set_head_pose":
        need("dir", "vec2")
    elif cmd == "fly_to":
        if ("point" in args) == ("building" in args):
            raise ScriptError("fly_to needs exactly one of args.point / args.building", line_no)
        if "point" in args:
            need("point", "vec2")
    elif cmd == "pointing_sample":
        need("pointed", "vec3")
        if ("target" in args) == ("building" in args):
            raise ScriptError(
                "pointing_sample needs exactly one of args.target / args.building", line_no
            )
        if "target" in args:
            need("target", "vec3")


def _to_nav_command(cmd, args):
    if cmd == "toggle_rama":
        return nav.ToggleRama()
    if cmd == "move_forward":
        return nav.MoveForward(held=args["held"])
    if cmd == "altitude_up":
        return nav.AltitudeUp()
    if cmd == "altitude_down":
        return nav.AltitudeDown()
    if cmd == "fly_to":
        if "point" in args:
            return nav.FlyTo(point=(args["point"][0], args["point"][1]))
        return nav.FlyTo(building=args["building"])
    if cmd == "pause_axis":
        return nav.PauseAxis()
    if cmd == "resume_axis":
        return nav.ResumeAxis()
    if cmd == "set_head_pose":
        return nav.SetHeadPose(dir=(args["dir"][0], args["dir"][1]))
    raise AssertionError(cmd)


def run(entries, scene=None, cfg: Config = Config(), dt: float = TICK_DT):
    """Run a parsed script; returns (final_state, events, metrics)."""
    init_args = {}
    if entries and entries[0][1] == "init":
        init_args = entries[0][2]
        entries = entries[1:]
    state = nav.initial_state(
        pos_xy=tuple(init_args.get("pos", (0.0, 0.0))),
        heading_xy=tuple(init_args.get("heading", (1.0, 0.0))),
        altitude_ix=int(init_args.get("altitude_ix", 0)),
        cfg=cfg,
    )
    events = [
        telemetry.TelemetryEvent(
            0.0,
            "altitude_change",
            {
                "from_m": cfg.presets_m[state.altitude_ix],
                "to_m": cfg.presets_m[state.altitude_ix],
            },
        )
    ]

    duration = max((t for t, _, _, _ in entries), default=0.0)
    n_ticks = max(1, int(math.ceil(duration / dt - 1e-9)))
    by_tick: dict[int, list] = {}
    for t, cmd, args, line_no in entries:
        if cmd == "end_session":
            continue
        tick = min(int(math.floor(t / dt + 1e-9)), n_ticks - 1)
        by_tick.setdefault(tick, []).append((cmd, args))

    for k in range(n_ticks):
        commands = []
        for cmd, args in by_tick.get(k, ()):
            if cmd == "pointing_sample":
                events.append(_pointing_event(state, args, scene))
            else:
                commands.append(_to_nav_command(cmd, args))
        state, tick_events = nav.update(state, commands, dt, scene, cfg)
        events.extend(tick_events)

    metrics = telemetry.compute_metrics(events, state.clock)
    return state, events, metrics


def _pointing_event(state, args, scene):
    if "target" in args:
        target = tuple(args["target"])
    else:
        b = scene.building(args["building"]) if scene is not None else None
        if b is None:
            raise ScriptError(f"unknown building {args['building']!r}", 0)
        cx, cy = b.centroid()
        target = (cx, cy, b.height_m / 2.0)
    p = state.camera_pos
    err = telemetry.pointing_error_deg((p.x, p.y, p.z), tuple(args["pointed"]), target)
    return telemetry.TelemetryEvent(
        state.clock, "pointing_sample", {"error_deg": err, "target": list(target)}
    )


def run_script_file(script_path, out_dir, scene=None, cfg: Config = Config(), dt: float = TICK_DT):
    """Parse + run + write artifacts; returns the metrics dict."""
    entries = parse_script(Path(script_path).read_text())
    _, events, metrics = run(entries, scene=scene, cfg=cfg, dt=dt)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    telemetry.write_log(out / "telemetry.jsonl", events)
    (out / "metrics.json").write_text(telemetry.metrics_json(metrics))
    (out / "table.txt").write_text(telemetry.metrics_table(metrics))
    return metrics
