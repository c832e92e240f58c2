"""Optional numba acceleration.

Set ``QTRANSDUCE_DISABLE_NUMBA=1`` to force the pure-numpy code paths, e.g.
when numba is unavailable or to cross-check the compiled kernels.
"""
from __future__ import annotations

import os

_DISABLED = os.environ.get("QTRANSDUCE_DISABLE_NUMBA", "").strip().lower() in {
    "1",
    "true",
    "yes",
    "on",
}

try:
    if _DISABLED:
        raise ImportError("numba disabled by environment")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]

        def decorator(func):
            return func

        return decorator


def backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"
