"""Kernel backend selection: compiled extension when available, NumPy otherwise.

Set RAMACITY_PURE=1 to force the pure path (used by tests and the benchmark).
"""

from __future__ import annotations

import os

if os.environ.get("RAMACITY_PURE") == "1":
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

BACKEND = _impl.BACKEND
deform_points = _impl.deform_points
pairwise_min_sqdist = _impl.pairwise_min_sqdist
