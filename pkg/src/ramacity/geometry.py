"""User-centered cylindrical space deformation: reference CPU implementation.

World frame is right-handed with z up and the ground plane at z=0.  The
deformation bends the ground plane onto the inside of a half-cylinder whose
axis lies at height d/2 directly above the user, orthogonal to the viewing
direction.  Elevated points are displaced toward the axis by their height,
which guarantees that disjoint geometry below d/2 stays disjoint.

All math here is 64-bit and scalar; batch paths live in `ramacity.kernels`
and must agree with this module bit-for-bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# Effective diameter used for "flat" rendering; large enough that the
# residual deformation over a city extent is below a meter.
FLAT_DIAMETER_M = 1.0e7
DEFAULT_DIAMETER_M = 5000.0


class GeometryError(ValueError):
    pass


class DegenerateView(GeometryError):
    """View direction has no horizontal component."""


class HeightExceedsRadius(GeometryError):
    """Point height >= d/2: displacement would reach or cross the axis."""

    def __init__(self, msg, index=None):
        super().__init__(msg)
        self.index = index


class NotInvertible(GeometryError):
    """Deformed point is outside the invertible image of the front half-space."""


@dataclass(frozen=True)
class Vec3:
    x: float
    y: float
    z: float

    def __add__(self, o: "Vec3") -> "Vec3":
        return Vec3(self.x + o.x, self.y + o.y, self.z + o.z)

    def __sub__(self, o: "Vec3") -> "Vec3":
        return Vec3(self.x - o.x, self.y - o.y, self.z - o.z)

    def scaled(self, s: float) -> "Vec3":
        return Vec3(self.x * s, self.y * s, self.z * s)

    def dot(self, o: "Vec3") -> float:
        return self.x * o.x + self.y * o.y + self.z * o.z

    def cross(self, o: "Vec3") -> "Vec3":
        return Vec3(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )

    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    def normalized(self) -> "Vec3":
        n = self.norm()
        if n == 0.0:
            raise GeometryError("cannot normalize zero vector")
        return Vec3(self.x / n, self.y / n, self.z / n)

    def is_finite(self) -> bool:
        return math.isfinite(self.x) and math.isfinite(self.y) and math.isfinite(self.z)


UP = Vec3(0.0, 0.0, 1.0)


@dataclass(frozen=True)
class UserFrame:
    """Frame with origin at the user's ground position, +X the horizontal view
    direction, +Y the cylinder axis direction (up x forward), z up."""

    origin: Vec3
    forward: Vec3
    left: Vec3

    def to_local(self, p: Vec3) -> tuple[float, float, float]:
        rx = p.x - self.origin.x
        ry = p.y - self.origin.y
        X = rx * self.forward.x + ry * self.forward.y
        Y = rx * self.left.x + ry * self.left.y
        return X, Y, p.z

    def to_world(self, X: float, Y: float, Z: float) -> Vec3:
        wx = self.origin.x + X * self.forward.x + Y * self.left.x
        wy = self.origin.y + X * self.forward.y + Y * self.left.y
        return Vec3(wx, wy, Z)


def make_user_frame(ground_pos: Vec3, view_dir: Vec3) -> UserFrame:
    """Build the user frame from a ground position and a view direction.

    The view direction's vertical component is discarded; a vertical gaze has
    no heading and raises DegenerateView.
    """
    hx, hy = view_dir.x, view_dir.y
    n = math.sqrt(hx * hx + hy * hy)
    if n < 1e-9:
        raise DegenerateView("view direction is vertical; no horizontal heading")
    fx, fy = hx / n, hy / n
    forward = Vec3(fx, fy, 0.0)
    # left = up x forward, exactly
    left = Vec3(-fy, fx, 0.0)
    return UserFrame(Vec3(ground_pos.x, ground_pos.y, 0.0), forward, left)


@dataclass(frozen=True)
class CylinderSpec:
    """One deformation instant: user frame, cylinder diameter, blend in [0,1].

    blend=1 is the fully deformed state; blend=0 degenerates to the "flat"
    10^7 m diameter.  Intermediate blends log-interpolate the diameter, which
    is exactly the enter/exit transition rule.
    """

    frame: UserFrame
    diameter_m: float = DEFAULT_DIAMETER_M
    blend: float = 1.0

    def __post_init__(self):
        if not self.diameter_m > 0.0:
            raise GeometryError("cylinder diameter must be positive")
        if not 0.0 <= self.blend <= 1.0:
            raise GeometryError("blend must lie in [0, 1]")

    def effective_diameter(self) -> float:
        return effective_diameter(self.diameter_m, self.blend)


def effective_diameter(diameter_m: float, blend: float) -> float:
    # pow keeps the endpoints exact: d**1 == d and d**0 == 1.
    return diameter_m**blend * FLAT_DIAMETER_M ** (1.0 - blend)


@dataclass(frozen=True)
class DeformedPoint:
    position: Vec3
    source: Vec3


def project_ground(X: float, Y: float, d: float) -> Vec3:
    """Map the ground point (X, Y, 0), frame-local, onto the cylinder.

    Returns (d^2 X / (d^2 + X^2), Y, d X^2 / (d^2 + X^2)), which lies on the
    circle x^2 + (z - d/2)^2 = (d/2)^2 in the x-z plane.
    """
    if d <= 0.0:
        raise GeometryError("diameter must be positive")
    if X < 0.0:
        raise GeometryError("behind-user points are never projected")
    den = d * d + X * X
    return Vec3(d * d * X / den, Y, d * X * X / den)


def deform_local(X: float, Y: float, Z: float, d: float) -> tuple[float, float, float]:
    """Scalar deformation core in frame-local coordinates.

    Points with X <= 0 pass through unchanged (half-cylinder rule); elevated
    points are displaced Z meters toward the axis at (0, *, d/2).
    """
    if Z >= 0.5 * d:
        raise HeightExceedsRadius(
            f"height {Z} m >= half diameter {0.5 * d} m; deformation would cross the axis"
        )
    if X <= 0.0:
        return X, Y, Z
    den = d * d + X * X
    x = d * d * X / den
    z = d * X * X / den
    dx = -x
    dz = 0.5 * d - z
    n = math.sqrt(dx * dx + dz * dz)
    return x + Z * dx / n, Y, z + Z * dz / n


def deform_point(p: Vec3, spec: CylinderSpec) -> DeformedPoint:
    """Deform one world-space point under the given cylinder."""
    if not p.is_finite():
        raise GeometryError("point must be finite")
    d = spec.effective_diameter()
    X, Y, Z = spec.frame.to_local(p)
    qx, qy, qz = deform_local(X, Y, Z, d)
    if X <= 0.0:
        return DeformedPoint(p, p)
    return DeformedPoint(spec.frame.to_world(qx, qy, qz), p)


def inverse_deform(q: Vec3, spec: CylinderSpec) -> Vec3:
    """Recover the world point whose deformation is q.

    Valid for deformed points in the image of the front half-space, strictly
    inside the cylinder band (distance from axis in (0, d/2]) and away from
    the degenerate top point directly above the axis.
    """
    d = spec.effective_diameter()
    xq, yq, zq = spec.frame.to_local(q)
    if xq < 0.0:
        raise NotInvertible("point is behind the user's tangent plane")
    dzq = zq - 0.5 * d
    r = math.sqrt(xq * xq + dzq * dzq)
    if r == 0.0:
        raise NotInvertible("point lies on the cylinder axis")
    if r > 0.5 * d * (1.0 + 1e-9):
        raise NotInvertible("point lies outside the cylinder band")
    Z = 0.5 * d - r
    scale = 0.5 * d / r
    zs = 0.5 * d + dzq * scale  # radial extension of q back to the surface
    if zs >= d * (1.0 - 1e-12):
        raise NotInvertible("degenerate top point above the axis")
    X = math.sqrt(max(zs, 0.0) * d * d / (d - zs))
    return spec.frame.to_world(X, yq, Z)


def deform_mesh(vertices: list[Vec3], spec: CylinderSpec) -> list[DeformedPoint]:
    """Element-wise deform_point over a vertex list, order preserved.

    Uses the batch kernel; results are bit-identical to scalar deform_point
    calls.  The first over-height vertex aborts with its index attached.
    """
    from . import kernels

    if not vertices:
        return []
    d = spec.effective_diameter()
    f = spec.frame
    pts = [(v.x, v.y, v.z) for v in vertices]
    out = kernels.deform_points(
        pts, f.origin.x, f.origin.y, f.forward.x, f.forward.y, d
    )
    return [
        DeformedPoint(Vec3(float(q[0]), float(q[1]), float(q[2])), v)
        for q, v in zip(out, vertices)
    ]


Segment = tuple[Vec3, Vec3]


def _param_points(seg: Segment, step_m: float) -> list[float]:
    length = (seg[1] - seg[0]).norm()
    n = max(1, math.ceil(length / step_m))
    return [i / n for i in range(n + 1)]


def _deform_param_batch(seg: Segment, params, spec: CylinderSpec):
    from . import kernels

    a, b = seg
    pts = [
        (a.x + s * (b.x - a.x), a.y + s * (b.y - a.y), a.z + s * (b.z - a.z))
        for s in params
    ]
    f = spec.frame
    return kernels.deform_points(
        pts, f.origin.x, f.origin.y, f.forward.x, f.forward.y, spec.effective_diameter()
    )


def deformed_min_distance(
    s1: Segment, s2: Segment, spec: CylinderSpec, step_m: float = 1.0
) -> float:
    """Minimum distance between the two segments after deformation.

    Straight segments deform to curves, so each is densified at `step_m`
    steps; the coarse grid minimum is then refined by adaptive subdivision in
    parameter space until the sampling window collapses.
    """
    from . import kernels

    params1 = _param_points(s1, step_m)
    params2 = _param_points(s2, step_m)
    pa = _deform_param_batch(s1, params1, spec)
    pb = _deform_param_batch(s2, params2, spec)
    d2, i, j = kernels.pairwise_min_sqdist(pa, pb)
    best = math.sqrt(d2)
    s_best, t_best = params1[i], params2[j]
    w1 = 1.0 / max(1, len(params1) - 1)
    w2 = 1.0 / max(1, len(params2) - 1)
    # Local 5x5 refinement with halving windows; 60 rounds take the window
    # far below any meaningful length scale.
    for _ in range(60):
        ss = [min(1.0, max(0.0, s_best + w1 * k / 2.0)) for k in range(-2, 3)]
        tt = [min(1.0, max(0.0, t_best + w2 * k / 2.0)) for k in range(-2, 3)]
        qa = _deform_param_batch(s1, ss, spec)
        qb = _deform_param_batch(s2, tt, spec)
        d2, i, j = kernels.pairwise_min_sqdist(qa, qb)
        dist = math.sqrt(d2)
        if dist < best:
            best = dist
        s_best, t_best = ss[i], tt[j]
        w1 *= 0.5
        w2 *= 0.5
        if best == 0.0:
            break
    return best


def segments_intersect_after_deform(
    s1: Segment,
    s2: Segment,
    spec: CylinderSpec,
    step_m: float = 1.0,
    threshold_m: float = 1e-6,
) -> bool:
    """True when the deformed images of the two segments come within
    `threshold_m` of each other."""
    return deformed_min_distance(s1, s2, spec, step_m) < threshold_m
