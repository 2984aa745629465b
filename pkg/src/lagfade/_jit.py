"""Optional numba acceleration.

The hot kernels in ``_kernels`` are compiled with ``numba.njit`` by default.
Setting the environment variable ``LAGFADE_NO_NUMBA=1`` (checked once at
import) selects the pure-numpy fallback implementations instead; the same
happens automatically when numba is not installed.
"""

import os

_flag = os.environ.get("LAGFADE_NO_NUMBA", "").strip().lower()
NUMBA_DISABLED = _flag in {"1", "true", "yes", "on"}

if NUMBA_DISABLED:
    njit = None
    JIT_ENABLED = False
else:
    try:
        from numba import njit

        JIT_ENABLED = True
    except ImportError:  # pragma: no cover - exercised only without numba
        njit = None
        JIT_ENABLED = False


def jit_compile(fn):
    """Compile ``fn`` with njit(cache=True); caller must check JIT_ENABLED."""
    return njit(cache=True)(fn)
