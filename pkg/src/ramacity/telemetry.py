"""Session telemetry: event log model, JSON-lines I/O, and session metrics.

Events are appended by the navigation tick loop; metrics reduce a finished
log to the study-style measures: time share per altitude preset, perspective
switches between the low and high altitude groups, and pointing errors.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

EVENT_KINDS = (
    "mode_change",
    "altitude_change",
    "fly_start",
    "fly_end",
    "move_blocked",
    "command_dropped",
    "pointing_sample",
)

LOW_PRESETS_M = (5.0, 100.0)


class EmptyLog(ValueError):
    pass


class DegenerateInput(ValueError):
    pass


@dataclass(frozen=True)
class TelemetryEvent:
    t: float
    kind: str
    payload: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in EVENT_KINDS:
            raise ValueError(f"unknown event kind {self.kind!r}")

    def to_json(self) -> str:
        return json.dumps(
            {"t": self.t, "kind": self.kind, "payload": self.payload},
            sort_keys=True,
            separators=(",", ":"),
        )


def write_log(path, events):
    with open(path, "w") as fh:
        for e in events:
            fh.write(e.to_json() + "\n")


def read_log(path):
    events = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            doc = json.loads(line)
            events.append(TelemetryEvent(doc["t"], doc["kind"], doc.get("payload", {})))
    return events


def altitude_intervals(events, duration_s: float):
    """(preset_m, seconds) spans; transition time counts toward the preset in
    effect when the transition began (altitude_change marks completion)."""
    changes = [e for e in events if e.kind == "altitude_change"]
    if not changes:
        raise EmptyLog("log has no altitude information")
    spans = []
    for i, e in enumerate(changes):
        t_next = changes[i + 1].t if i + 1 < len(changes) else duration_s
        spans.append((float(e.payload["to_m"]), max(0.0, t_next - e.t)))
    return spans


def altitude_histogram(events, duration_s: float) -> dict:
    """Fraction of session time per altitude preset; fractions sum to 1."""
    spans = altitude_intervals(events, duration_s)
    total = sum(s for _, s in spans)
    if total <= 0.0:
        raise EmptyLog("session has zero duration")
    hist: dict[float, float] = {}
    for preset, seconds in spans:
        hist[preset] = hist.get(preset, 0.0) + seconds
    return {k: v / total for k, v in sorted(hist.items())}


def perspective_switches(events) -> int:
    """Crossings between the low altitude group {5, 100} and the rest."""
    count = 0
    prev_low = None
    for e in events:
        if e.kind != "altitude_change":
            continue
        low = float(e.payload["to_m"]) in LOW_PRESETS_M
        if prev_low is not None and low != prev_low:
            count += 1
        prev_low = low
    return count


def pointing_error_deg(user_pos, pointed_dir, target_pos) -> float:
    """Angle in degrees between the pointed direction and the true direction."""
    tx = target_pos[0] - user_pos[0]
    ty = target_pos[1] - user_pos[1]
    tz = target_pos[2] - user_pos[2]
    px, py, pz = pointed_dir
    tn = math.sqrt(tx * tx + ty * ty + tz * tz)
    pn = math.sqrt(px * px + py * py + pz * pz)
    if tn == 0.0 or pn == 0.0:
        raise DegenerateInput("zero-length direction")
    c = (tx * px + ty * py + tz * pz) / (tn * pn)
    return math.degrees(math.acos(min(1.0, max(-1.0, c))))


def compute_metrics(events, duration_s: float) -> dict:
    hist = altitude_histogram(events, duration_s)
    return {
        "completion_time_s": duration_s,
        "altitude_share": {f"{int(k)}m": v for k, v in hist.items()},
        "perspective_switches": perspective_switches(events),
        "pointing_errors_deg": [
            e.payload["error_deg"] for e in events if e.kind == "pointing_sample"
        ],
    }


def metrics_json(metrics: dict) -> str:
    return json.dumps(metrics, sort_keys=True, indent=2) + "\n"


def metrics_table(metrics: dict) -> str:
    """Plain-text table: per-preset time share, switches, pointing error."""
    lines = []
    lines.append(f"{'altitude':>10}  {'time share':>10}")
    for key, share in sorted(
        metrics["altitude_share"].items(), key=lambda kv: float(kv[0].rstrip("m"))
    ):
        lines.append(f"{key:>10}  {share * 100:>9.2f}%")
    lines.append("")
    lines.append(f"completion time: {metrics['completion_time_s']:.3f} s")
    lines.append(f"perspective switches: {metrics['perspective_switches']}")
    errs = metrics["pointing_errors_deg"]
    if errs:
        mean = sum(errs) / len(errs)
        lines.append(f"pointing error: mean {mean:.2f} deg over {len(errs)} samples")
    else:
        lines.append("pointing error: no samples")
    return "\n".join(lines) + "\n"
