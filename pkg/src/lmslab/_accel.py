"""Numba acceleration shim.

Hot kernels (min-cost flow, Rips reduction, shortest paths) are written as
plain nopython-compatible functions and passed through :func:`jit_kernel`.
With numba present they are compiled; setting the environment variable
``LMS_PURE_NUMPY=1`` (or if numba is missing) selects the uncompiled
pure numpy/Python path with identical semantics.
"""

import os

PURE_ENV = "LMS_PURE_NUMPY"


def _numba_enabled() -> bool:
    flag = os.environ.get(PURE_ENV, "").strip()
    if flag not in ("", "0"):
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


NUMBA_ENABLED = _numba_enabled()

if NUMBA_ENABLED:
    from numba import njit

    def jit_kernel(fn):
        return njit(cache=True)(fn)

else:

    def jit_kernel(fn):
        return fn
