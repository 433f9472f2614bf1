"""Pick the compiled search kernel when it is built, else the Python one.

``MAGIC_SOLIDS_BACKEND=python`` forces the fallback.
"""
from __future__ import annotations

import os

from . import _fallback

try:
    from . import _kernel
except ImportError:  # extension not built
    _kernel = None

KERNELS = {"python": _fallback.search}
if _kernel is not None:
    KERNELS["cython"] = _kernel.search

_requested = os.environ.get("MAGIC_SOLIDS_BACKEND", "").strip().lower()
if _requested and _requested not in ("python", "cython"):
    raise ImportError(f"unknown MAGIC_SOLIDS_BACKEND {_requested!r}")
BACKEND = "python" if _requested == "python" or _kernel is None else "cython"
COMPILED_MAX_VERTICES = _kernel.MAX_VERTICES if _kernel is not None else 0


def get_search(backend: str | None = None, num_vertices: int = 0):
    """Kernel function for ``backend`` (default: the import-time choice)."""
    name = backend or BACKEND
    if name not in KERNELS:
        raise ValueError(f"backend {name!r} unavailable; have {sorted(KERNELS)}")
    if name == "cython" and num_vertices > COMPILED_MAX_VERTICES:
        name = "python"
    return KERNELS[name]
