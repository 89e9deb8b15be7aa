"""Hot raster kernels with a compiled core and a numpy fallback.

The compiled Cython backend (`tcens.kernels._c`) is preferred when it was
built; otherwise the numpy implementation (`tcens.kernels._py`) is used.
Set ``TCENS_PURE_PYTHON=1`` to force the fallback. Both backends implement
the same three functions with identical semantics; `benchmarks/` compares
their throughput.
"""

from __future__ import annotations

import os

from . import _py

_impl = _py
_BACKEND = "python"

if not os.environ.get("TCENS_PURE_PYTHON"):
    try:
        from . import _c as _impl  # type: ignore[no-redef]

        _BACKEND = "compiled"
    except ImportError:
        pass


def backend() -> str:
    """Name of the active backend: 'compiled' or 'python'."""
    return _BACKEND


local_extrema_mask = _impl.local_extrema_mask
neighborhood_extreme = _impl.neighborhood_extreme
polyline_within_radius = _impl.polyline_within_radius

__all__ = [
    "backend",
    "local_extrema_mask",
    "neighborhood_extreme",
    "polyline_within_radius",
]
