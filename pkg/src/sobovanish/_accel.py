"""Backend selection for the compiled kernels.

Every hot loop in the package exists twice: a plain numpy implementation and
a scalar-loop implementation compiled with ``numba.njit``.  Which one the
public functions dispatch to is decided once, at import time, from the
``SOBOVANISH_BACKEND`` environment variable:

``numba`` (default when numba imports)
    compiled loops.
``numpy``
    vectorised numpy only; numba is never imported.

Both paths are kept numerically equivalent (tests compare them), so the
choice only affects speed.
"""
import os

__all__ = ["BACKEND", "HAVE_NUMBA", "njit", "select"]

_requested = os.environ.get("SOBOVANISH_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ImportError(
        f"SOBOVANISH_BACKEND must be 'numba' or 'numpy', got {_requested!r}"
    )

HAVE_NUMBA = False
if _requested == "numba":
    try:
        import numba as _nb

        HAVE_NUMBA = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        pass

BACKEND = "numba" if HAVE_NUMBA else "numpy"


def njit(fn):
    """Compile ``fn`` with numba when available, else return it unchanged.

    The uncompiled function is still importable under the same name, which
    keeps the loop kernels testable on the numpy backend (slowly).
    """
    if HAVE_NUMBA:
        return _nb.njit(cache=True, nogil=True)(fn)
    return fn


def select(loop_impl, numpy_impl):
    """Pick the kernel matching the active backend."""
    return loop_impl if BACKEND == "numba" else numpy_impl
