"""Kernel backend selection.

Hot numeric kernels (distance transform, assignment solver) exist in two
variants: numba @njit loops and pure-numpy vectorized code. The active
variant is chosen once at import from the POINTMATCH_BACKEND environment
variable ("numba" or "numpy"); unset means numba when importable, numpy
otherwise. Both variants produce bit-identical results, so the flag only
affects speed. Tests flip USE_NUMBA directly to exercise both paths.
"""

import os

try:
    import numba  # noqa: F401

    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False

_requested = os.environ.get("POINTMATCH_BACKEND", "").strip().lower()

if _requested == "numpy":
    USE_NUMBA = False
elif _requested == "numba":
    if not HAS_NUMBA:
        raise ImportError("POINTMATCH_BACKEND=numba but numba is not installed")
    USE_NUMBA = True
elif _requested == "":
    USE_NUMBA = HAS_NUMBA
else:
    raise ValueError(f"POINTMATCH_BACKEND must be 'numba' or 'numpy', got {_requested!r}")


def active_backend() -> str:
    return "numba" if USE_NUMBA else "numpy"
