"""Numba switch for the hot kernels.

Set ``CURVKIT_DISABLE_NUMBA=1`` before import to run every kernel as plain
Python over numpy arrays. The compiled and interpreted paths share one
source, so ``kernel.py_func`` is always the reference implementation.
"""

import os

_FALSY = {"", "0", "false", "no", "off"}

DISABLED = os.environ.get("CURVKIT_DISABLE_NUMBA", "").strip().lower() not in _FALSY

try:
    if DISABLED:
        raise ImportError
    import numba

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - depends on environment
    numba = None
    NUMBA_AVAILABLE = False


def jit(func):
    """Compile ``func`` with ``numba.njit`` when enabled, else return it unchanged.

    The returned object always exposes ``py_func`` so benchmarks can time the
    interpreted path in-process.
    """
    if NUMBA_AVAILABLE:
        return numba.njit(cache=True, nogil=True)(func)
    func.py_func = func
    return func


def backend():
    return "numba" if NUMBA_AVAILABLE else "python"
