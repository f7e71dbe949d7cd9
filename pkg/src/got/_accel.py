"""Kernel selection switch.

Hot loops are compiled with numba by default. Setting ``GOT_PURE_NUMPY=1``
in the environment (or running without numba installed) selects the
vectorized pure-numpy twins instead. Both flavors implement the same pivot
rules, so results do not depend on the choice.
"""

import os


def _pure_numpy_requested() -> bool:
    flag = os.environ.get("GOT_PURE_NUMPY", "").strip().lower()
    return flag in {"1", "true", "yes", "on"}


try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    njit = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not _pure_numpy_requested()
