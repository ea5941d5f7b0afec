"""Pure NumPy fallback for the hot kernels.

Expression structure mirrors `geometry.deform_local` exactly so elementwise
results are bit-identical to the scalar reference (and to the compiled
extension, which is built without FP contraction).
"""

from __future__ import annotations

import numpy as np

from .geometry import HeightExceedsRadius

BACKEND = "python"


def deform_points(pts, ox, oy, fx, fy, d):
    """Deform (n, 3) world points under frame (origin, forward) and diameter d."""
    p = np.ascontiguousarray(pts, dtype=np.float64)
    if p.ndim != 2 or p.shape[1] != 3:
        raise ValueError("expected an (n, 3) array of points")
    rx = p[:, 0] - ox
    ry = p[:, 1] - oy
    lx, ly = -fy, fx
    X = rx * fx + ry * fy
    Y = rx * lx + ry * ly
    Z = p[:, 2]
    over = Z >= 0.5 * d
    if over.any():
        i = int(np.argmax(over))
        raise HeightExceedsRadius(
            f"vertex {i}: height {Z[i]} m >= half diameter {0.5 * d} m", index=i
        )
    den = d * d + X * X
    x = d * d * X / den
    z = d * X * X / den
    dx = -x
    dz = 0.5 * d - z
    n = np.sqrt(dx * dx + dz * dz)
    qx = x + Z * dx / n
    qz = z + Z * dz / n
    wx = ox + qx * fx + Y * lx
    wy = oy + qx * fy + Y * ly
    out = np.empty_like(p)
    front = X > 0.0
    out[:, 0] = np.where(front, wx, p[:, 0])
    out[:, 1] = np.where(front, wy, p[:, 1])
    out[:, 2] = np.where(front, qz, p[:, 2])
    return out


def pairwise_min_sqdist(a, b):
    """Minimum squared distance between two point sets; returns (d2, i, j)."""
    pa = np.ascontiguousarray(a, dtype=np.float64)
    pb = np.ascontiguousarray(b, dtype=np.float64)
    if pa.size == 0 or pb.size == 0:
        raise ValueError("point sets must be non-empty")
    best = np.inf
    bi = bj = 0
    # Block over the first set to cap the distance-matrix footprint.
    block = max(1, int(4_000_000 // max(1, pb.shape[0])))
    for s in range(0, pa.shape[0], block):
        ch = pa[s : s + block]
        diff = ch[:, None, :] - pb[None, :, :]
        d2 = np.einsum("ijk,ijk->ij", diff, diff)
        k = int(np.argmin(d2))
        i, j = divmod(k, d2.shape[1])
        if d2[i, j] < best:
            best = float(d2[i, j])
            bi, bj = s + i, j
    return best, bi, bj
