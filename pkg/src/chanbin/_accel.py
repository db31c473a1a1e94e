"""Numba switch.

Kernels are compiled with ``numba.njit`` unless numba is missing or the
environment sets ``CHANBIN_DISABLE_NUMBA=1``, in which case the decorated
functions run as plain Python over numpy arrays.
"""
import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    numba = None

ENABLE_NUMBA = numba is not None and os.environ.get("CHANBIN_DISABLE_NUMBA", "") not in ("1", "true", "yes")
CACHE_NUMBA = True


def jit(func):
    if ENABLE_NUMBA:
        return numba.njit(cache=CACHE_NUMBA)(func)
    return func


def python_impl(func):
    """Return the uncompiled body of a kernel (itself when numba is off)."""
    return getattr(func, "py_func", func)
