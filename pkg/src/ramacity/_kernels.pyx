# cython: language_level=3
"""Compiled hot kernels: batch deformation and pairwise minimum distance.

Arithmetic follows geometry.deform_local operation-for-operation; the build
disables FP contraction so results stay bit-identical to the pure path.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport sqrt

from .geometry import HeightExceedsRadius

cnp.import_array()

BACKEND = "cython"


def deform_points(pts, double ox, double oy, double fx, double fy, double d):
    """Deform (n, 3) world points under frame (origin, forward) and diameter d."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2] p = np.ascontiguousarray(pts, dtype=np.float64)
    if p.ndim != 2 or p.shape[1] != 3:
        raise ValueError("expected an (n, 3) array of points")
    cdef Py_ssize_t m = p.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.empty((m, 3), dtype=np.float64)
    cdef double lx = -fy
    cdef double ly = fx
    cdef double half = 0.5 * d
    cdef double rx, ry, X, Y, Z, den, x, z, dx, dz, n, qx, qz
    cdef Py_ssize_t i
    for i in range(m):
        Z = p[i, 2]
        if Z >= half:
            raise HeightExceedsRadius(
                f"vertex {i}: height {Z} m >= half diameter {half} m", index=i
            )
        rx = p[i, 0] - ox
        ry = p[i, 1] - oy
        X = rx * fx + ry * fy
        if X <= 0.0:
            out[i, 0] = p[i, 0]
            out[i, 1] = p[i, 1]
            out[i, 2] = Z
            continue
        Y = rx * lx + ry * ly
        den = d * d + X * X
        x = d * d * X / den
        z = d * X * X / den
        dx = -x
        dz = half - z
        n = sqrt(dx * dx + dz * dz)
        qx = x + Z * dx / n
        qz = z + Z * dz / n
        out[i, 0] = ox + qx * fx + Y * lx
        out[i, 1] = oy + qx * fy + Y * ly
        out[i, 2] = qz
    return out


def pairwise_min_sqdist(a, b):
    """Minimum squared distance between two point sets; returns (d2, i, j)."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2] pa = np.ascontiguousarray(a, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] pb = np.ascontiguousarray(b, dtype=np.float64)
    cdef Py_ssize_t na = pa.shape[0]
    cdef Py_ssize_t nb = pb.shape[0]
    if na == 0 or nb == 0:
        raise ValueError("point sets must be non-empty")
    cdef double best = float("inf")
    cdef Py_ssize_t bi = 0, bj = 0, i, j
    cdef double ax, ay, az, dx, dy, dz, d2
    for i in range(na):
        ax = pa[i, 0]
        ay = pa[i, 1]
        az = pa[i, 2]
        for j in range(nb):
            dx = ax - pb[j, 0]
            dy = ay - pb[j, 1]
            dz = az - pb[j, 2]
            d2 = dx * dx + dy * dy + dz * dz
            if d2 < best:
                best = d2
                bi = i
                bj = j
    return best, bi, bj
