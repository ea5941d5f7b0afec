"""Deterministic fixed-timestep navigation state machine.

One owner advances the state with `update(state, commands, dt, scene, cfg)`;
every tick returns a new immutable snapshot plus the telemetry events that
tick produced.  All timing comes from the injected dt — never wall time — so
identical inputs replay bit-for-bit.

Mode graph:

    Flat <-> EnteringRama/ExitingRama <-> RamaActive
    Flat | RamaActive -> Flying -> (ExitingRama if Rama was active, else Flat)
    Flat | RamaActive -> ChangingAltitude -> prior mode

During EnteringRama, ExitingRama, Flying and ChangingAltitude all commands
except SetHeadPose are dropped (logged as command_dropped), and the cylinder
is frozen.  The cylinder re-centers on the user only while moving forward,
and re-orients only through the head-follow realignment rules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

from .config import Config
from .geometry import CylinderSpec, UserFrame, Vec3, effective_diameter
from .telemetry import TelemetryEvent

DEFAULT_CONFIG = Config()


class Mode(Enum):
    FLAT = "Flat"
    ENTERING_RAMA = "EnteringRama"
    RAMA_ACTIVE = "RamaActive"
    EXITING_RAMA = "ExitingRama"
    FLYING = "Flying"
    CHANGING_ALTITUDE = "ChangingAltitude"


TRANSITION_MODES = (Mode.ENTERING_RAMA, Mode.EXITING_RAMA, Mode.FLYING, Mode.CHANGING_ALTITUDE)


class TargetUnresolvable(ValueError):
    pass


# ---- commands ----------------------------------------------------------------


@dataclass(frozen=True)
class ToggleRama:
    pass


@dataclass(frozen=True)
class MoveForward:
    held: bool


@dataclass(frozen=True)
class AltitudeUp:
    pass


@dataclass(frozen=True)
class AltitudeDown:
    pass


@dataclass(frozen=True)
class FlyTo:
    # either a ground point (x, y) or a building id
    point: tuple | None = None
    building: str | None = None


@dataclass(frozen=True)
class PauseAxis:
    pass


@dataclass(frozen=True)
class ResumeAxis:
    pass


@dataclass(frozen=True)
class SetHeadPose:
    dir: tuple  # horizontal (x, y), normalized on apply


# ---- state -------------------------------------------------------------------


@dataclass(frozen=True)
class FlightPath:
    start: Vec3
    end: Vec3
    duration_s: float
    kind: str  # fly_to | altitude_change


@dataclass(frozen=True)
class NavState:
    clock: float
    mode: Mode
    camera_pos: Vec3
    heading: Vec3  # horizontal unit vector (z = 0)
    prev_heading: Vec3
    altitude_ix: int
    rama_paused: bool
    realigning: bool
    move_held: bool
    phase_t: float
    flight: FlightPath | None
    return_mode: Mode | None
    cylinder: CylinderSpec


def initial_state(
    pos_xy=(0.0, 0.0), heading_xy=(1.0, 0.0), altitude_ix: int = 0, cfg: Config = DEFAULT_CONFIG
) -> NavState:
    heading = _unit_horizontal(heading_xy)
    camera = Vec3(pos_xy[0], pos_xy[1], cfg.presets_m[altitude_ix])
    frame = _frame_at(camera, heading)
    return NavState(
        clock=0.0,
        mode=Mode.FLAT,
        camera_pos=camera,
        heading=heading,
        prev_heading=heading,
        altitude_ix=altitude_ix,
        rama_paused=False,
        realigning=False,
        move_held=False,
        phase_t=0.0,
        flight=None,
        return_mode=None,
        cylinder=CylinderSpec(frame, cfg.d_m, 0.0),
    )


def _unit_horizontal(v) -> Vec3:
    x, y = float(v[0]), float(v[1])
    n = math.sqrt(x * x + y * y)
    if n < 1e-9:
        raise ValueError("horizontal direction must be nonzero")
    return Vec3(x / n, y / n, 0.0)


# ---- pure helpers (also exercised directly by tests) --------------------------


def transition_diameter(t: float, entering: bool, cfg: Config = DEFAULT_CONFIG) -> float:
    """Effective diameter during an enter/exit transition (log interpolation)."""
    u = t / cfg.transition_s
    if not entering:
        u = 1.0 - u
    return effective_diameter(cfg.d_m, u)


def flight_progress(t: float, T: float) -> float:
    """Eased position fraction: 0 at t=0, exactly 0.5 at t=T/2, 1 at t=T."""
    u = t / T
    # evaluates cos(pi*u) as sin(pi*(0.5-u)): exact at u in {0, 0.5, 1}
    return 0.5 * (1.0 - math.sin(math.pi * (0.5 - u)))


def flight_duration(distance_m: float, cfg: Config = DEFAULT_CONFIG) -> float:
    """Square-root flight time with a floor for short hops."""
    return max(cfg.flight_floor_s, cfg.k_flight * math.sqrt(distance_m))


def resolve_fly_target(cmd: FlyTo, state: NavState, scene, cfg: Config = DEFAULT_CONFIG) -> Vec3:
    """Flight destination at the user's current altitude.

    Ground point: the point itself.  Building: the point `standoff_m` outside
    the footprint boundary along the horizontal ray from the building centroid
    toward the user.
    """
    z = state.camera_pos.z
    if cmd.point is not None:
        return Vec3(float(cmd.point[0]), float(cmd.point[1]), z)
    if cmd.building is not None:
        if scene is None:
            raise TargetUnresolvable("no scene loaded")
        xy = scene.standoff_point(
            cmd.building, (state.camera_pos.x, state.camera_pos.y), cfg.standoff_m
        )
        if xy is None:
            raise TargetUnresolvable(f"unknown building {cmd.building!r}")
        return Vec3(xy[0], xy[1], z)
    raise TargetUnresolvable("empty fly-to selection")


def _signed_angle(a: Vec3, b: Vec3) -> float:
    """Signed rotation (radians) taking direction a to direction b about +z."""
    return math.atan2(a.x * b.y - a.y * b.x, a.x * b.x + a.y * b.y)


def _rotate_horizontal(v: Vec3, angle: float) -> Vec3:
    c, s = math.cos(angle), math.sin(angle)
    x = c * v.x - s * v.y
    y = s * v.x + c * v.y
    n = math.sqrt(x * x + y * y)
    return Vec3(x / n, y / n, 0.0)


def _frame_at(pos: Vec3, forward: Vec3) -> UserFrame:
    # forward is already unit: build the frame directly so a committed heading
    # compares exactly equal to cylinder.frame.forward
    return UserFrame(
        Vec3(pos.x, pos.y, 0.0),
        Vec3(forward.x, forward.y, 0.0),
        Vec3(-forward.y, forward.x, 0.0),
    )


# ---- the tick ----------------------------------------------------------------


def update(
    state: NavState,
    commands,
    dt: float,
    scene=None,
    cfg: Config = DEFAULT_CONFIG,
):
    """Advance one tick; returns (new_state, telemetry_events).

    Commands are applied in order at the start of the tick, then the tick's
    dt is integrated.  Event timestamps use the end-of-tick clock.
    """
    if not 0.0 < dt <= 0.1:
        raise ValueError(f"dt {dt} outside (0, 0.1]")
    t_end = state.clock + dt
    events: list[TelemetryEvent] = []
    s = state

    for cmd in commands:
        s = _apply_command(s, cmd, t_end, scene, cfg, events)

    s = _integrate(s, dt, t_end, scene, cfg, events)
    s = replace(s, clock=t_end, prev_heading=s.heading)
    return s, events


def _emit(events, t, kind, **payload):
    events.append(TelemetryEvent(t, kind, payload))


def _mode_change(s: NavState, new_mode: Mode, t, events) -> NavState:
    _emit(events, t, "mode_change", from_mode=s.mode.value, to_mode=new_mode.value)
    return replace(s, mode=new_mode)


def _apply_command(s, cmd, t, scene, cfg, events) -> NavState:
    if isinstance(cmd, SetHeadPose):
        return replace(s, heading=_unit_horizontal(cmd.dir))

    if s.mode in TRANSITION_MODES:
        _emit(events, t, "command_dropped", cmd=type(cmd).__name__, reason="transition")
        return s

    if isinstance(cmd, ToggleRama):
        if s.mode is Mode.FLAT:
            s = _mode_change(s, Mode.ENTERING_RAMA, t, events)
        else:
            s = _mode_change(s, Mode.EXITING_RAMA, t, events)
        return replace(s, phase_t=0.0, realigning=False)

    if isinstance(cmd, MoveForward):
        return replace(s, move_held=cmd.held)

    if isinstance(cmd, (AltitudeUp, AltitudeDown)):
        step = 1 if isinstance(cmd, AltitudeUp) else -1
        new_ix = s.altitude_ix + step
        if not 0 <= new_ix < len(cfg.presets_m):
            _emit(events, t, "command_dropped", cmd=type(cmd).__name__, reason="clamped")
            return s
        start = s.camera_pos
        end = Vec3(start.x, start.y, cfg.presets_m[new_ix])
        path = FlightPath(start, end, flight_duration(abs(end.z - start.z), cfg), "altitude_change")
        ret = state_return_mode(s)
        s = _mode_change(s, Mode.CHANGING_ALTITUDE, t, events)
        return replace(s, phase_t=0.0, flight=path, return_mode=ret, realigning=False)

    if isinstance(cmd, FlyTo):
        try:
            target = resolve_fly_target(cmd, s, scene, cfg)
        except TargetUnresolvable as e:
            _emit(events, t, "command_dropped", cmd="FlyTo", reason=str(e))
            return s
        dist = (target - s.camera_pos).norm()
        path = FlightPath(s.camera_pos, target, flight_duration(dist, cfg), "fly_to")
        ret = state_return_mode(s)
        s = _mode_change(s, Mode.FLYING, t, events)
        _emit(
            events,
            t,
            "fly_start",
            target=[target.x, target.y, target.z],
            duration_s=path.duration_s,
        )
        return replace(s, phase_t=0.0, flight=path, return_mode=ret, realigning=False)

    if isinstance(cmd, PauseAxis):
        return replace(s, rama_paused=True)

    if isinstance(cmd, ResumeAxis):
        s = replace(s, rama_paused=False)
        offset = abs(math.degrees(_signed_angle(s.cylinder.frame.forward, s.heading)))
        if s.mode is Mode.RAMA_ACTIVE and offset > cfg.realign_deadband_deg:
            s = replace(s, realigning=True)
        return s

    raise TypeError(f"unknown command {cmd!r}")


def state_return_mode(s: NavState) -> Mode:
    return s.mode if s.mode in (Mode.FLAT, Mode.RAMA_ACTIVE) else Mode.FLAT


def _integrate(s, dt, t, scene, cfg, events) -> NavState:
    if s.mode in (Mode.ENTERING_RAMA, Mode.EXITING_RAMA):
        return _integrate_rama_transition(s, dt, t, cfg, events)
    if s.mode in (Mode.FLYING, Mode.CHANGING_ALTITUDE):
        return _integrate_flight(s, dt, t, cfg, events)
    return _integrate_locomotion(s, dt, t, scene, cfg, events)


def _integrate_rama_transition(s, dt, t, cfg, events) -> NavState:
    phase = s.phase_t + dt
    entering = s.mode is Mode.ENTERING_RAMA
    if phase >= cfg.transition_s:
        blend = 1.0 if entering else 0.0
        cyl = CylinderSpec(s.cylinder.frame, cfg.d_m, blend)
        s = replace(s, phase_t=cfg.transition_s, cylinder=cyl)
        return _mode_change(s, Mode.RAMA_ACTIVE if entering else Mode.FLAT, t, events)
    u = phase / cfg.transition_s
    blend = u if entering else 1.0 - u
    return replace(s, phase_t=phase, cylinder=CylinderSpec(s.cylinder.frame, cfg.d_m, blend))


def _integrate_flight(s, dt, t, cfg, events) -> NavState:
    path = s.flight
    phase = s.phase_t + dt
    if phase >= path.duration_s:
        s = replace(s, camera_pos=path.end, phase_t=path.duration_s, flight=None)
        if path.kind == "fly_to":
            _emit(events, t, "fly_end", position=[path.end.x, path.end.y, path.end.z])
            if s.return_mode is Mode.RAMA_ACTIVE:
                s = _mode_change(s, Mode.EXITING_RAMA, t, events)
                return replace(s, phase_t=0.0, return_mode=None)
            s = _mode_change(s, Mode.FLAT, t, events)
            return replace(s, return_mode=None)
        # altitude change: commit the preset on completion
        new_ix = cfg.presets_m.index(path.end.z)
        _emit(
            events,
            t,
            "altitude_change",
            from_m=cfg.presets_m[s.altitude_ix],
            to_m=cfg.presets_m[new_ix],
        )
        s = replace(s, altitude_ix=new_ix)
        s = _mode_change(s, s.return_mode, t, events)
        return replace(s, return_mode=None)
    frac = flight_progress(phase, path.duration_s)
    pos = path.start + (path.end - path.start).scaled(frac)
    return replace(s, camera_pos=pos, phase_t=phase)


def _integrate_locomotion(s, dt, t, scene, cfg, events) -> NavState:
    if s.mode is Mode.RAMA_ACTIVE and not s.rama_paused:
        s = _head_follow(s, dt, cfg)

    if s.move_held:
        step = cfg.forward_speed_mps * dt
        p0 = s.camera_pos
        p1 = Vec3(p0.x + s.heading.x * step, p0.y + s.heading.y * step, p0.z)
        blocked = scene is not None and scene.blocked(
            (p0.x, p0.y), (p1.x, p1.y), cfg.collision_radius_m, p0.z
        )
        if blocked:
            _emit(events, t, "move_blocked", position=[p0.x, p0.y, p0.z])
        else:
            s = replace(s, camera_pos=p1)
            if not (s.mode is Mode.RAMA_ACTIVE and s.rama_paused):
                # cylinder center follows the user while moving forward
                frame = _frame_at(p1, s.cylinder.frame.forward)
                s = replace(s, cylinder=CylinderSpec(frame, cfg.d_m, s.cylinder.blend))

    if s.mode is Mode.FLAT:
        # flat cylinder tracks the user so an enter transition starts in place
        frame = _frame_at(s.camera_pos, s.heading)
        s = replace(s, cylinder=CylinderSpec(frame, cfg.d_m, 0.0))
    return s


def _head_follow(s, dt, cfg) -> NavState:
    forward = s.cylinder.frame.forward
    offset_rad = _signed_angle(forward, s.heading)
    offset_deg = abs(math.degrees(offset_rad))
    if not s.realigning:
        vel_dps = abs(math.degrees(_signed_angle(s.prev_heading, s.heading))) / dt
        if offset_deg > cfg.realign_displacement_deg or vel_dps > cfg.realign_velocity_dps:
            s = replace(s, realigning=True)
        else:
            return s
    # constant-rate rotation toward the current heading, committed at deadband
    max_step_deg = cfg.realign_rate_dps * dt
    if offset_deg <= max(cfg.realign_deadband_deg, max_step_deg):
        new_forward = s.heading
        s = replace(s, realigning=False)
    else:
        step = math.copysign(math.radians(max_step_deg), offset_rad)
        new_forward = _rotate_horizontal(forward, step)
    frame = _frame_at(s.cylinder.frame.origin, new_forward)
    return replace(s, cylinder=CylinderSpec(frame, cfg.d_m, s.cylinder.blend))
