"""Runtime tunables: defaults, JSON config file loading, validation.

A config file is a JSON object overriding any subset of the keys below; the
path comes from `--config` or the RAMACITY_CONFIG environment variable.
"""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Config:
    d_m: float = 5000.0
    presets_m: tuple = (5.0, 100.0, 500.0, 1000.0, 2000.0)
    transition_s: float = 3.0
    k_flight: float = 0.15  # seconds per sqrt(meter)
    flight_floor_s: float = 0.5
    forward_speed_mps: float = 15.0
    collision_radius_m: float = 1.0
    standoff_m: float = 10.0
    realign_displacement_deg: float = 10.0
    realign_velocity_dps: float = 20.0
    realign_rate_dps: float = 90.0
    realign_deadband_deg: float = 0.5
    http_port: int = 8080
    # viewer key remaps, key code -> action name; opaque to the engine
    bindings: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.d_m > 0:
            raise ConfigError("d_m must be positive")
        ps = tuple(float(p) for p in self.presets_m)
        if len(ps) == 0 or any(p <= 0 for p in ps) or list(ps) != sorted(ps):
            raise ConfigError("presets_m must be ascending positive altitudes")
        object.__setattr__(self, "presets_m", ps)
        if not isinstance(self.bindings, dict) or not all(
            isinstance(k, str) and isinstance(v, str) for k, v in self.bindings.items()
        ):
            raise ConfigError("bindings must map key names to action names")
        if not 1024 <= self.http_port <= 65535:
            raise ConfigError(f"http_port {self.http_port} outside 1024..65535")
        for key in (
            "transition_s",
            "k_flight",
            "flight_floor_s",
            "forward_speed_mps",
            "collision_radius_m",
            "standoff_m",
            "realign_rate_dps",
        ):
            if not getattr(self, key) > 0:
                raise ConfigError(f"{key} must be positive")

    def check_scene(self, max_height_m: float):
        if not self.d_m > 2.0 * max_height_m:
            raise ConfigError(
                f"d_m {self.d_m} must exceed twice the scene max height {max_height_m}"
            )

    def to_dict(self) -> dict:
        d = asdict(self)
        d["presets_m"] = list(self.presets_m)
        return d


def load_config(path=None, env=os.environ) -> Config:
    """Defaults, overridden by the JSON file at `path` or $RAMACITY_CONFIG."""
    if path is None:
        path = env.get("RAMACITY_CONFIG")
    if not path:
        return Config()
    raw = Path(path).read_text()
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as e:
        raise ConfigError(f"config {path}: invalid JSON: {e}") from e
    if not isinstance(doc, dict):
        raise ConfigError(f"config {path}: expected a JSON object")
    known = set(Config.__dataclass_fields__)
    unknown = set(doc) - known
    if unknown:
        raise ConfigError(f"config {path}: unknown keys {sorted(unknown)}")
    if "presets_m" in doc:
        doc["presets_m"] = tuple(doc["presets_m"])
    return Config(**doc)
