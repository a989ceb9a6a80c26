"""Optional numba acceleration.

Set ``REMOTEJC_DISABLE_NUMBA=1`` before import to run every kernel on the
pure-numpy path.
"""
import os

DISABLE_ENV = "REMOTEJC_DISABLE_NUMBA"

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    HAVE_NUMBA = False


def _disabled_by_env():
    return os.environ.get(DISABLE_ENV, "").strip().lower() in ("1", "true", "yes", "on")


USE_NUMBA = HAVE_NUMBA and not _disabled_by_env()


def jit_copy(func):
    """Return an ``njit`` compiled copy of ``func``, or ``None`` without numba.

    The python original is left untouched so both paths stay callable.
    """
    if not HAVE_NUMBA:
        return None
    return numba.njit(cache=True, nogil=True)(func)


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
