"""Optional numba acceleration for the hot enumeration kernels.

Set ``SGFOREST_NO_NUMBA=1`` to force the pure-Python fallback (same kernel
source, not compiled).  The fallback is also selected automatically when
numba is not installed.  Everything downstream behaves identically on both
paths; only throughput differs.
"""

import os

DISABLE_ENV = "SGFOREST_NO_NUMBA"


def numba_disabled() -> bool:
    return os.environ.get(DISABLE_ENV, "").strip().lower() in ("1", "true", "yes", "on")


def _passthrough_njit(*args, **kwargs):
    # mirrors numba.njit: usable bare or with options
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]

    def wrap(func):
        return func

    return wrap


if numba_disabled():
    njit = _passthrough_njit
    USING_NUMBA = False
else:
    try:
        from numba import njit  # noqa: F401

        USING_NUMBA = True
    except ImportError:
        njit = _passthrough_njit
        USING_NUMBA = False
