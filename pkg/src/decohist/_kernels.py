"""Compiled kernels: the Gauss-Kronrod rule, integrands and nested drivers.

Everything here is plain numpy/math code wrapped with :func:`_backend.jit`, so
the same source runs under numba or as ordinary Python. The drivers are kept
non-recursive (one function per nesting level) because cached numba
functions that call themselves are not reliable across processes.

Nested geometry
---------------
Three variables ``w`` (outer), ``u`` (middle) and ``v`` (inner). For a given
``w`` the middle range is ``[w + p1, w + p2]`` and the inner range is
``[base + q1, base + q2]``, both clipped to fixed windows. ``base`` is ``w``
unless ``geom[8] != 0``, in which case it is the middle variable ``u``. The
layout of ``geom`` is ``[p1, p2, q1, q2, u_lo, u_hi, v_lo, v_hi, flag]``.

Tolerances are passed as a ``(3, 4)`` array whose rows belong to the outer,
middle and inner level and whose columns are
``[abs_tol, rel_tol, max_depth, limit]``.
"""
import math

import numpy as np

from ._backend import jit

# Kronrod abscissae (descending, last one is the centre) and weights.
XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
])
WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
# Gauss weights for the nodes XGK[1], XGK[3], XGK[5] and the centre.
WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

EPMACH = 2.220446049250313e-16
UFLOW = 2.2250738585072014e-308

# integrand codes
GAUSS2 = 0          # exp(-u^2 - v^2)
GAUSS2_DIFF2 = 1    # (v - u)^2 exp(-u^2 - v^2)
DIFF_GAUSS = 2      # exp(-(v - u)^2)
DIFF_GAUSS_QUAD = 3  # exp(-(v - u)^2) (u^2 + v^2 - 2 (w + gamma)^2)
BRANCH_MOD = 4      # product-state integrand, modulus
BRANCH_RE = 5       # product-state integrand, real part
BRANCH_IM = 6       # product-state integrand, imaginary part
ERF_PRODUCT = 7     # erf(a + v) erf(b - v) + 1
DENSITY = 8         # exp(-2 (v - x0)^2 / sigma^2)

# _select status
_CONTINUE = 0
_CONVERGED = 1
_ROUNDOFF = 2
_NO_SPLIT = 3
_FULL = 4


@jit
def gk15_nodes(a, b):
    """Fifteen Kronrod nodes on ``[a, b]``, in ascending order."""
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    x = np.empty(15)
    x[7] = c
    for j in range(7):
        x[j] = c - h * XGK[j]
        x[14 - j] = c + h * XGK[j]
    return x


@jit
def gk15_rule(fx, ex, a, b):
    """Apply the (7, 15) pair to node values.

    Parameters
    ----------
    fx : ndarray
        Integrand values at :func:`gk15_nodes`.
    ex : ndarray
        Error estimates attached to ``fx`` by a nested level (zeros at the
        innermost level).
    a, b : float
        Interval end points.

    Returns
    -------
    result, abserr, floor : float
        Kronrod estimate, error estimate, and the part of the error that
        bisection cannot remove (roundoff plus nested error).
    """
    h = 0.5 * (b - a)
    fc = fx[7]
    resk = WGK[7] * fc
    resg = WG[3] * fc
    resabs = abs(resk)
    nest = WGK[7] * abs(ex[7])
    for j in range(7):
        resk += WGK[j] * (fx[j] + fx[14 - j])
        resabs += WGK[j] * (abs(fx[j]) + abs(fx[14 - j]))
        nest += WGK[j] * (abs(ex[j]) + abs(ex[14 - j]))
    for j in range(3):
        k = 2 * j + 1
        resg += WG[j] * (fx[k] + fx[14 - k])
    reskh = 0.5 * resk
    resasc = WGK[7] * abs(fc - reskh)
    for j in range(7):
        resasc += WGK[j] * (abs(fx[j] - reskh) + abs(fx[14 - j] - reskh))
    ah = abs(h)
    result = resk * h
    resabs *= ah
    resasc *= ah
    nest *= ah
    abserr = abs((resk - resg) * h)
    if resasc != 0.0 and abserr != 0.0:
        abserr = resasc * min(1.0, (200.0 * abserr / resasc) ** 1.5)
    roundoff = 0.0
    if resabs > UFLOW / (50.0 * EPMACH):
        roundoff = 50.0 * EPMACH * resabs
        abserr = max(roundoff, abserr)
    return result, abserr + nest, roundoff + nest


@jit
def _store(S, i, a, b, r, e, fl, depth):
    S[i, 0] = a
    S[i, 1] = b
    S[i, 2] = r
    S[i, 3] = e
    S[i, 4] = fl
    S[i, 5] = depth


@jit
def _select(S, n, tol):
    """Pick the interval to bisect, or report why the loop should stop."""
    res = 0.0
    err = 0.0
    floor = 0.0
    for i in range(n):
        res += S[i, 2]
        err += S[i, 3]
        floor += S[i, 4]
    if err <= max(tol[0], tol[1] * abs(res)):
        return -1, _CONVERGED
    k = -1
    worst = -1.0
    for i in range(n):
        if S[i, 5] < tol[2] and S[i, 3] > 1.01 * S[i, 4] and S[i, 3] > worst:
            worst = S[i, 3]
            k = i
    if k < 0:
        if err <= 2.0 * floor:
            return -1, _ROUNDOFF
        return -1, _NO_SPLIT
    if n >= int(tol[3]):
        return -1, _FULL
    return k, _CONTINUE


@jit
def _finish(S, n, status):
    res = 0.0
    err = 0.0
    for i in range(n):
        res += S[i, 2]
        err += S[i, 3]
    if not (math.isfinite(res) and math.isfinite(err)):
        return res, err, 2
    if status == _CONVERGED or status == _ROUNDOFF:
        return res, err, 0
    return res, err, 1


@jit
def integrand(code, w, u, v, prm):
    """Evaluate integrand ``code`` at fixed ``(w, u)`` over the array ``v``."""
    if code == GAUSS2:
        return np.exp(-u * u - v * v)
    if code == GAUSS2_DIFF2:
        d = v - u
        return d * d * np.exp(-u * u - v * v)
    if code == DIFF_GAUSS:
        d = v - u
        return np.exp(-d * d)
    if code == DIFF_GAUSS_QUAD:
        d = v - u
        s = w + prm[0]
        return np.exp(-d * d) * (u * u + v * v - 2.0 * s * s)
    if code == BRANCH_MOD or code == BRANCH_RE or code == BRANCH_IM:
        du = u - prm[0]
        dv = v - prm[0]
        d = v - u
        mag = np.exp(-(du * du + dv * dv) * prm[1] - prm[2] * d * d)
        if code == BRANCH_MOD:
            return mag
        theta = prm[3] * (u * u - v * v) + (prm[5] + prm[4] * w) * (u - v)
        if code == BRANCH_RE:
            return mag * np.cos(theta)
        return mag * np.sin(theta)
    if code == ERF_PRODUCT:
        out = np.empty(v.shape[0])
        for i in range(v.shape[0]):
            out[i] = math.erf(prm[0] + v[i]) * math.erf(prm[1] - v[i]) + 1.0
        return out
    if code == DENSITY:
        dv = v - prm[0]
        return np.exp(-2.0 * dv * dv * prm[1])
    return np.full(v.shape[0], np.nan)


@jit
def adapt_inner(code, w, u, a, b, prm, tol):
    """Integrate over ``v`` in ``[a, b]`` at fixed ``(w, u)``."""
    if not b > a:
        return 0.0, 0.0, 0
    t = tol[2]
    S = np.empty((int(t[3]), 6))
    zero = np.zeros(15)
    r, e, fl = gk15_rule(integrand(code, w, u, gk15_nodes(a, b), prm), zero, a, b)
    _store(S, 0, a, b, r, e, fl, 0.0)
    n = 1
    while True:
        k, status = _select(S, n, t)
        if status != _CONTINUE:
            break
        lo = S[k, 0]
        hi = S[k, 1]
        m = 0.5 * (lo + hi)
        d = S[k, 5] + 1.0
        r1, e1, f1 = gk15_rule(integrand(code, w, u, gk15_nodes(lo, m), prm), zero, lo, m)
        r2, e2, f2 = gk15_rule(integrand(code, w, u, gk15_nodes(m, hi), prm), zero, m, hi)
        _store(S, k, lo, m, r1, e1, f1, d)
        _store(S, n, m, hi, r2, e2, f2, d)
        n += 1
    return _finish(S, n, status)


@jit
def _mid_nodes(code, w, x, geom, prm, tol):
    fx = np.empty(15)
    ex = np.empty(15)
    ier = 0
    for j in range(15):
        base = x[j] if geom[8] != 0.0 else w
        a = max(base + geom[2], geom[6])
        b = min(base + geom[3], geom[7])
        r, e, i = adapt_inner(code, w, x[j], a, b, prm, tol)
        fx[j] = r
        ex[j] = e
        ier = max(ier, i)
    return fx, ex, ier


@jit
def adapt_mid(code, w, a, b, geom, prm, tol):
    """Integrate over ``u`` in ``[a, b]`` (inner ``v`` nested) at fixed ``w``."""
    if not b > a:
        return 0.0, 0.0, 0
    t = tol[1]
    S = np.empty((int(t[3]), 6))
    fx, ex, ier = _mid_nodes(code, w, gk15_nodes(a, b), geom, prm, tol)
    r, e, fl = gk15_rule(fx, ex, a, b)
    _store(S, 0, a, b, r, e, fl, 0.0)
    n = 1
    while True:
        k, status = _select(S, n, t)
        if status != _CONTINUE:
            break
        lo = S[k, 0]
        hi = S[k, 1]
        m = 0.5 * (lo + hi)
        d = S[k, 5] + 1.0
        fx, ex, i1 = _mid_nodes(code, w, gk15_nodes(lo, m), geom, prm, tol)
        r1, e1, f1 = gk15_rule(fx, ex, lo, m)
        fx, ex, i2 = _mid_nodes(code, w, gk15_nodes(m, hi), geom, prm, tol)
        r2, e2, f2 = gk15_rule(fx, ex, m, hi)
        ier = max(ier, max(i1, i2))
        _store(S, k, lo, m, r1, e1, f1, d)
        _store(S, n, m, hi, r2, e2, f2, d)
        n += 1
    res, err, own = _finish(S, n, status)
    return res, err, max(ier, own)


@jit
def _outer_nodes(code, x, geom, prm, tol):
    fx = np.empty(15)
    ex = np.empty(15)
    ier = 0
    for j in range(15):
        a = max(x[j] + geom[0], geom[4])
        b = min(x[j] + geom[1], geom[5])
        r, e, i = adapt_mid(code, x[j], a, b, geom, prm, tol)
        fx[j] = r
        ex[j] = e
        ier = max(ier, i)
    return fx, ex, ier


@jit
def adapt_outer(code, a, b, geom, prm, tol):
    """Integrate over ``w`` in ``[a, b]`` with ``u`` and ``v`` nested."""
    if not b > a:
        return 0.0, 0.0, 0
    t = tol[0]
    S = np.empty((int(t[3]), 6))
    fx, ex, ier = _outer_nodes(code, gk15_nodes(a, b), geom, prm, tol)
    r, e, fl = gk15_rule(fx, ex, a, b)
    _store(S, 0, a, b, r, e, fl, 0.0)
    n = 1
    while True:
        k, status = _select(S, n, t)
        if status != _CONTINUE:
            break
        lo = S[k, 0]
        hi = S[k, 1]
        m = 0.5 * (lo + hi)
        d = S[k, 5] + 1.0
        fx, ex, i1 = _outer_nodes(code, gk15_nodes(lo, m), geom, prm, tol)
        r1, e1, f1 = gk15_rule(fx, ex, lo, m)
        fx, ex, i2 = _outer_nodes(code, gk15_nodes(m, hi), geom, prm, tol)
        r2, e2, f2 = gk15_rule(fx, ex, m, hi)
        ier = max(ier, max(i1, i2))
        _store(S, k, lo, m, r1, e1, f1, d)
        _store(S, n, m, hi, r2, e2, f2, d)
        n += 1
    res, err, own = _finish(S, n, status)
    return res, err, max(ier, own)
