"""Optional numba acceleration.

Set ``KKMGAME_DISABLE_NUMBA=1`` to force the pure-numpy paths (also used
automatically when numba cannot be imported).
"""
import os

DISABLE_ENV = "KKMGAME_DISABLE_NUMBA"

try:
    import numba
except ImportError:  # pragma: no cover - numba is an optional extra
    numba = None


def _disabled_by_env():
    return os.environ.get(DISABLE_ENV, "").strip().lower() in {"1", "true", "yes", "on"}


USE_NUMBA = numba is not None and not _disabled_by_env()


def njit(func):
    """``numba.njit(cache=True)`` when numba is usable, else ``None``.

    Callers keep the plain function as their fallback, so a ``None`` here
    just means "no compiled twin".
    """
    if numba is None:
        return None
    return numba.njit(cache=True, nogil=True)(func)
