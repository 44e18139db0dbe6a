"""Adaptive quadrature front end.

Two entry points are offered:

* :func:`adaptive_gk` integrates an arbitrary vectorised Python callable in
  one dimension (used for user-supplied coupling and driving profiles).
* :func:`integrate_1d`, :func:`integrate_2d` and :func:`integrate_3d` drive
  the compiled nested kernels for the built-in integrand codes.

All of them use the same globally adaptive Gauss-Kronrod (7, 15) scheme with
QUADPACK error estimation and bisection of the worst interval.
"""
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from ._backend import py
from .errors import QuadratureFailure

__all__ = [
    "QuadratureSpec",
    "adaptive_gk",
    "integrate_1d",
    "integrate_2d",
    "integrate_3d",
    "tolerance_matrix",
]

_gk15_nodes = py(K.gk15_nodes)
_gk15_rule = py(K.gk15_rule)
_select = py(K._select)
_store = py(K._store)
_finish = py(K._finish)


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances for nested adaptive quadrature.

    Attributes
    ----------
    rel_tol, abs_tol : float
        Requested accuracy of the outermost integral. Nested levels run
        10x (middle) and 100x (inner) tighter.
    max_depth : int
        Maximum number of bisections applied to any one interval.
    tail_cut : float
        Gaussian windows are truncated at ``tail_cut`` half-widths, where the
        integrand is below ``exp(-tail_cut**2)`` of its peak.
    limit : int
        Interval capacity of each adaptive level.
    """

    rel_tol: float = 1e-8
    abs_tol: float = 1e-10
    max_depth: int = 40
    tail_cut: float = 8.0
    limit: int = 1000

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("quadrature tolerances must be positive")
        if self.max_depth < 4:
            raise ValueError("max_depth must be at least 4")
        if self.tail_cut <= 0 or self.limit < 2:
            raise ValueError("tail_cut must be positive and limit >= 2")

    def halved(self):
        """Same spec with both tolerances halved."""
        return QuadratureSpec(
            self.rel_tol / 2, self.abs_tol / 2, self.max_depth, self.tail_cut, self.limit
        )


def tolerance_matrix(spec, levels):
    """Per-level tolerance rows for a ``levels``-deep nested integral.

    The outermost active level gets ``spec`` itself; each deeper level is ten
    times tighter. Unused rows (for ``levels < 3``) are filled with the
    outermost values.
    """
    tol = np.empty((3, 4))
    first = 3 - levels
    for row in range(3):
        scale = 10.0 ** -max(0, row - first)
        tol[row] = (spec.abs_tol * scale, spec.rel_tol * scale, spec.max_depth, spec.limit)
    return tol


def _check(res, err, ier, what):
    if ier == 2:
        raise QuadratureFailure(f"{what}: non-finite integrand")
    if ier != 0:
        raise QuadratureFailure(
            f"{what}: tolerance not met after maximum refinement (estimate {res!r}, error {err:.3g})"
        )
    return float(res), float(err)


def adaptive_gk(func, a, b, abs_tol=1e-12, rel_tol=1e-10, max_depth=40, limit=2000):
    """Integrate a vectorised callable over ``[a, b]``.

    Parameters
    ----------
    func : callable
        Maps an ndarray of abscissae to an ndarray of values.
    a, b : float
        Limits. ``b < a`` flips the sign of the result.
    abs_tol, rel_tol : float
        Stop when the estimated error is below ``max(abs_tol, rel_tol*|I|)``.

    Returns
    -------
    (float, float)
        The integral and its error estimate.

    Raises
    ------
    QuadratureFailure
        If the tolerance is not met within ``limit`` intervals or
        ``max_depth`` bisections.
    """
    if a == b:
        return 0.0, 0.0
    if b < a:
        res, err = adaptive_gk(func, b, a, abs_tol, rel_tol, max_depth, limit)
        return -res, err
    tol = np.array([abs_tol, rel_tol, max_depth, limit], dtype=float)
    zero = np.zeros(15)

    def piece(lo, hi):
        x = _gk15_nodes(lo, hi)
        fx = np.asarray(func(x), dtype=float)
        if fx.shape != (15,):
            fx = np.broadcast_to(fx, (15,)).astype(float)
        return _gk15_rule(fx, zero, lo, hi)

    S = np.empty((limit, 6))
    _store(S, 0, a, b, *piece(a, b), 0.0)
    n = 1
    while True:
        k, status = _select(S, n, tol)
        if status != K._CONTINUE:
            break
        lo, hi, d = S[k, 0], S[k, 1], S[k, 5] + 1.0
        m = 0.5 * (lo + hi)
        _store(S, k, lo, m, *piece(lo, m), d)
        _store(S, n, m, hi, *piece(m, hi), d)
        n += 1
    return _check(*_finish(S, n, status), "adaptive_gk")


def integrate_1d(code, a, b, prm, spec):
    """One-dimensional integral of a built-in integrand over ``v``."""
    tol = tolerance_matrix(spec, 1)
    res, err, ier = K.adapt_inner(code, 0.0, 0.0, float(a), float(b), _arr(prm), tol)
    return _check(res, err, ier, f"integrand {code} (1-D)")


def integrate_2d(code, w, a, b, geom, prm, spec):
    """Two-dimensional integral: ``u`` over ``[a, b]``, ``v`` nested."""
    tol = tolerance_matrix(spec, 2)
    res, err, ier = K.adapt_mid(code, float(w), float(a), float(b), _geom(geom), _arr(prm), tol)
    return _check(res, err, ier, f"integrand {code} (2-D)")


def integrate_3d(code, a, b, geom, prm, spec):
    """Three-dimensional integral: ``w`` over ``[a, b]``, ``u`` and ``v`` nested."""
    tol = tolerance_matrix(spec, 3)
    res, err, ier = K.adapt_outer(code, float(a), float(b), _geom(geom), _arr(prm), tol)
    return _check(res, err, ier, f"integrand {code} (3-D)")


def _arr(prm):
    out = np.zeros(8)
    prm = np.asarray(prm, dtype=float).ravel()
    out[: prm.size] = prm
    return out


def _geom(geom):
    g = np.asarray(geom, dtype=float).ravel()
    if g.size == 8:
        g = np.append(g, 0.0)
    if g.size != 9:
        raise ValueError("geometry needs 8 or 9 entries")
    return g
