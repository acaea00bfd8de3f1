"""Kernel backend selection.

The compiled ``_kernels`` extension is used when it imports; otherwise, or
when ``MCSADJ_PURE_PYTHON`` is set to a non-empty value, the numpy versions
in ``_kernels_py`` are used. Both return identical results.
"""

from __future__ import annotations

import os

from . import _kernels_py
from ._kernels_py import (  # noqa: F401  (mode constants)
    INCREASING,
    LOG_INCREASING,
    QUASI,
    SCD,
    STRICT_INCREASING,
    STRICT_LOG_INCREASING,
    STRICT_SCD,
    SUPER,
)

_impl = _kernels_py
BACKEND = "python"
if not os.environ.get("MCSADJ_PURE_PYTHON"):
    try:
        from . import _kernels as _compiled
    except ImportError:
        pass
    else:
        _impl = _compiled
        BACKEND = "cython"

pair_scan = _impl.pair_scan
scd_scan = _impl.scd_scan
bellman_max = _impl.bellman_max
value_iteration = _impl.value_iteration


def available() -> dict:
    """Every importable backend by name, for comparisons and benchmarks."""
    out = {"python": _kernels_py}
    try:
        from . import _kernels as _compiled
    except ImportError:
        return out
    out["cython"] = _compiled
    return out
