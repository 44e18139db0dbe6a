"""Kernel backend selection.

The hot quadrature kernels are written once as plain numpy code and compiled
with ``numba.njit`` when the numba backend is active. Set the environment
variable ``DECOHIST_BACKEND`` to ``numpy`` (before importing the package) to
run the identical source as ordinary Python.
"""
import os
import warnings

_requested = os.environ.get("DECOHIST_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    warnings.warn(
        f"unknown DECOHIST_BACKEND={_requested!r}; using numba", RuntimeWarning
    )
    _requested = "numba"

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

BACKEND = "numba" if (_requested == "numba" and numba is not None) else "numpy"


def jit(fn):
    """Compile ``fn`` with numba when active, otherwise return it unchanged."""
    if BACKEND == "numba":
        return numba.njit(cache=True)(fn)
    return fn


def py(fn):
    """Return the pure-Python version of a possibly jitted function."""
    return getattr(fn, "py_func", fn)
