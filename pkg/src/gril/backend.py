"""Kernel backend selection.

The zigzag reduction kernel is written in numba-compatible numpy style.  By
default it is JIT-compiled; set ``GRIL_BACKEND=numpy`` to run the identical
source as plain python/numpy (slow, but dependency-free and bit-identical).
``GRIL_BACKEND=numba`` insists on numba and raises if it is unavailable.
"""

from __future__ import annotations

import os


def _resolve() -> str:
    choice = os.environ.get("GRIL_BACKEND", "").strip().lower()
    if choice == "numpy":
        return "numpy"
    if choice == "numba":
        import numba  # noqa: F401  (raise early if missing)
        return "numba"
    if choice not in ("", "auto"):
        raise ValueError(f"unknown GRIL_BACKEND {choice!r}; use 'numba' or 'numpy'")
    try:
        import numba  # noqa: F401
        return "numba"
    except ImportError:
        return "numpy"


BACKEND = _resolve()


def jit(func):
    """Apply numba.njit when the numba backend is active, else return as-is."""
    if BACKEND == "numba":
        from numba import njit
        return njit(cache=True)(func)
    return func
