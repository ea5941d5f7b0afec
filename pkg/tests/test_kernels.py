import math
import os
import random
import subprocess
import sys

import numpy as np
import pytest

from ramacity import _kernels_py, kernels
from ramacity.geometry import HeightExceedsRadius, deform_local

try:
    from ramacity import _kernels
except ImportError:
    _kernels = None

D = 5000.0
FRAME = dict(ox=12.0, oy=-7.0, fx=0.6, fy=0.8)


def random_points(rng, n):
    pts = []
    for _ in range(n):
        # mix of front, behind, near-seam and elevated points
        pts.append(
            (
                rng.uniform(-3 * D, 6 * D),
                rng.uniform(-3 * D, 3 * D),
                rng.uniform(0.0, 0.49 * D),
            )
        )
    return pts


def scalar_reference(pts, ox, oy, fx, fy, d):
    lx, ly = -fy, fx
    out = []
    for px, py, pz in pts:
        rx, ry = px - ox, py - oy
        X = rx * fx + ry * fy
        Y = rx * lx + ry * ly
        qx, qy, qz = deform_local(X, Y, pz, d)
        if X <= 0.0:
            out.append((px, py, pz))
        else:
            out.append((ox + qx * fx + qy * lx, oy + qx * fy + qy * ly, qz))
    return out


class TestPurePython:
    def test_matches_scalar_bit_for_bit(self):
        rng = random.Random(101)
        pts = random_points(rng, 3000)
        got = _kernels_py.deform_points(pts, d=D, **FRAME)
        want = scalar_reference(pts, d=D, **FRAME)
        for (gx, gy, gz), (wx, wy, wz) in zip(got, want):
            assert (gx, gy, gz) == (wx, wy, wz)

    def test_shape_validation(self):
        with pytest.raises(ValueError):
            _kernels_py.deform_points([(1.0, 2.0)], d=D, **FRAME)

    def test_over_height_index(self):
        pts = [(10.0, 0.0, 0.0), (20.0, 0.0, 0.5 * D), (30.0, 0.0, 0.0)]
        with pytest.raises(HeightExceedsRadius) as ei:
            _kernels_py.deform_points(pts, d=D, **FRAME)
        assert ei.value.index == 1

    def test_pairwise_matches_bruteforce(self):
        rng = random.Random(55)
        a = [(rng.uniform(0, 100), rng.uniform(0, 100), rng.uniform(0, 100)) for _ in range(80)]
        b = [(rng.uniform(0, 100), rng.uniform(0, 100), rng.uniform(0, 100)) for _ in range(70)]
        d2, i, j = _kernels_py.pairwise_min_sqdist(a, b)
        best = min(
            (ax - bx) ** 2 + (ay - by) ** 2 + (az - bz) ** 2
            for ax, ay, az in a
            for bx, by, bz in b
        )
        assert d2 == best
        pa, pb = a[i], b[j]
        assert (pa[0] - pb[0]) ** 2 + (pa[1] - pb[1]) ** 2 + (pa[2] - pb[2]) ** 2 == d2

    def test_pairwise_blocked_path(self):
        # more than the 4M-element block budget forces multiple blocks
        rng = random.Random(56)
        a = np.array([[rng.uniform(0, 10), 0.0, 0.0] for _ in range(3000)])
        b = np.array([[rng.uniform(0, 10), 5.0, 0.0] for _ in range(2000)])
        d2, i, j = _kernels_py.pairwise_min_sqdist(a, b)
        assert math.sqrt(d2) >= 5.0
        assert d2 == ((a[i] - b[j]) ** 2).sum()

    def test_pairwise_empty_rejected(self):
        with pytest.raises(ValueError):
            _kernels_py.pairwise_min_sqdist([], [(0.0, 0.0, 0.0)])


@pytest.mark.skipif(_kernels is None, reason="compiled extension not built")
class TestCompiled:
    def test_backends_agree_bit_for_bit(self):
        rng = random.Random(202)
        pts = random_points(rng, 5000)
        a = _kernels.deform_points(pts, d=D, **FRAME)
        b = _kernels_py.deform_points(pts, d=D, **FRAME)
        assert a.shape == b.shape
        assert (a == b).all()

    def test_over_height_index(self):
        pts = [(10.0, 0.0, 0.0), (20.0, 0.0, 0.0), (30.0, 0.0, 2500.0)]
        with pytest.raises(HeightExceedsRadius) as ei:
            _kernels.deform_points(pts, d=D, **FRAME)
        assert ei.value.index == 2

    def test_pairwise_agrees(self):
        rng = random.Random(57)
        a = [(rng.uniform(0, 100), rng.uniform(0, 100), rng.uniform(0, 100)) for _ in range(120)]
        b = [(rng.uniform(0, 100), rng.uniform(0, 100), rng.uniform(0, 100)) for _ in range(90)]
        assert _kernels.pairwise_min_sqdist(a, b) == _kernels_py.pairwise_min_sqdist(a, b)


class TestBackendSelection:
    def _backend_in_subprocess(self, env_extra):
        env = dict(os.environ, **env_extra)
        out = subprocess.run(
            [sys.executable, "-c", "from ramacity import kernels; print(kernels.BACKEND)"],
            capture_output=True,
            text=True,
            env=env,
            check=True,
        )
        return out.stdout.strip()

    def test_pure_env_forces_python(self):
        assert self._backend_in_subprocess({"RAMACITY_PURE": "1"}) == "python"

    def test_default_prefers_compiled(self):
        env = {k: v for k, v in os.environ.items() if k != "RAMACITY_PURE"}
        out = subprocess.run(
            [sys.executable, "-c", "from ramacity import kernels; print(kernels.BACKEND)"],
            capture_output=True,
            text=True,
            env=env,
            check=True,
        )
        expected = "python" if _kernels is None else "cython"
        assert out.stdout.strip() == expected

    def test_active_backend_exports(self):
        assert kernels.BACKEND in ("cython", "python")
        assert callable(kernels.deform_points)
        assert callable(kernels.pairwise_min_sqdist)
