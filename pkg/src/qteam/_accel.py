"""Backend selection for the hot kernels.

Set ``QTEAM_NO_NUMBA=1`` to force the pure-numpy path. When numba is not
importable the numpy path is used regardless.
"""
import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and os.environ.get("QTEAM_NO_NUMBA", "").strip().lower() not in {
    "1",
    "true",
    "yes",
}


def jit(func):
    """Compile ``func`` with ``numba.njit`` when available, else return None.

    fastmath stays off so both backends produce bit-identical floats.
    """
    if not HAVE_NUMBA:
        return None
    return numba.njit(cache=True, nogil=True, fastmath=False)(func)


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
