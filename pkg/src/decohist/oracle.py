"""Brute-force quadrature of every defining integral.

Nothing here uses a closed form: each routine integrates the defining
expression with the nested adaptive Gauss-Kronrod kernels, so it serves as
an independent check of :mod:`gaussian_analysis` and
:mod:`exact_decoherence`.

Variables of the decoherence-functional integrals: ``w = -x`` (final
particle position), ``u = x'`` (initial position on the ``alpha`` branch) and
``v = x''`` (initial position on the ``alpha'`` branch). The class
constraint ``(x + x')/2 in Delta_alpha`` becomes ``u in (w + 2 low, w + 2 high]``.
"""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from . import _kernels as K
from .coarse_grain import indicator, interval_bounds
from .errors import DecoupledApparatus, QuadratureFailure
from .exact_decoherence import sharp_particle_probability, sharp_pointer_probability
from .model import Product, SharpParticle, SharpPointer
from .propagator import (
    coupling_g,
    driving_integrals,
    k0_magnitude_sq,
    kernel_phase_coefficients,
)
from .quadrature import QuadratureSpec, adaptive_gk, integrate_1d, integrate_2d, integrate_3d

__all__ = [
    "QuadratureSpec",
    "FACTOR_KINDS",
    "SumRuleResult",
    "erf_product_integral",
    "oracle_factor",
    "oracle_general_functional",
    "oracle_sharp_particle",
    "oracle_sharp_pointer",
    "sum_rule_check",
    "sum_rule_series",
]

FACTOR_KINDS = ("I", "J", "P0", "P1", "F", "G")
DEFAULT_SPEC = QuadratureSpec()
_INF = math.inf


def erf_product_integral(a, b, spec=DEFAULT_SPEC):
    """Check ``int [erf(a + x) erf(b - x) + 1] dx = 2s erf(s/sqrt2) + 2 sqrt(2/pi) e^{-s^2/2}``, ``s = a + b``.

    The integrand decays like ``erfc`` outside ``[-a, b]``, so the window is
    that range widened by ``tail_cut`` on both sides.

    Returns
    -------
    (numeric, closed) : (float, float)
    """
    lo = min(-a, b) - spec.tail_cut
    hi = max(-a, b) + spec.tail_cut
    numeric, _ = integrate_1d(K.ERF_PRODUCT, lo, hi, [a, b], spec)
    s = a + b
    closed = 2.0 * s * math.erf(s / math.sqrt(2.0)) + 2.0 * math.sqrt(2.0 / math.pi) * math.exp(
        -0.5 * s * s
    )
    return numeric, closed


def _factor_3d(code, beta, neighbour, spec):
    t = spec.tail_cut
    if neighbour:
        geom = [-beta, beta, beta, 3.0 * beta, -t, t, -t, t]
        lo, hi = -t - beta, t - beta
    else:
        geom = [-beta, beta, -beta, beta, -t, t, -t, t]
        lo, hi = -t - beta, t + beta
    return integrate_3d(code, lo, hi, geom, [], spec)


def _factor_2d(code, gamma, w, spec):
    geom = [-gamma, gamma, gamma, 3.0 * gamma, -_INF, _INF, -_INF, _INF]
    return integrate_2d(code, w, w - gamma, w + gamma, geom, [gamma], spec)


def oracle_factor(kind, arg, spec=DEFAULT_SPEC, with_error=False, w_values=(-1.0, 1.0)):
    """Direct quadrature of a dimensionless factor.

    ``I``, ``J``: ``int dw int_{w-b}^{w+b} dz' int_{w+b}^{w+3b} dz'' h``;
    ``P0``, ``P1``: the same with ``z''`` also in ``[w - b, w + b]``; ``h`` is
    ``e^{-z'^2 - z''^2}`` for ``I, P0`` and ``(z'' - z')^2`` times that for
    ``J, P1``. ``F`` and ``G`` are double integrals at fixed ``w`` over
    ``z' in [w - g, w + g]``, ``z'' in [w + g, w + 3g]`` of
    ``e^{-(z'' - z')^2}`` and ``e^{-(z'' - z')^2}(z'^2 + z''^2 - 2(w + g)^2)``.
    They do not depend on ``w``; this is checked at each of ``w_values``.

    Raises
    ------
    QuadratureFailure
        Tolerance not met, or the ``F``/``G`` value depends on ``w``.
    """
    if kind not in FACTOR_KINDS:
        raise ValueError(f"unknown factor {kind!r}; expected one of {FACTOR_KINDS}")
    arg = float(arg)
    if not arg >= 0:
        raise ValueError("factor argument must be non-negative")
    if arg == 0.0:
        return (0.0, 0.0) if with_error else 0.0
    if kind in ("I", "J", "P0", "P1"):
        code = K.GAUSS2 if kind in ("I", "P0") else K.GAUSS2_DIFF2
        val, err = _factor_3d(code, arg, kind in ("I", "J"), spec)
    else:
        code = K.DIFF_GAUSS if kind == "F" else K.DIFF_GAUSS_QUAD
        val, err = _factor_2d(code, arg, 0.0, spec)
        for w in w_values:
            other, oerr = _factor_2d(code, arg, w, spec)
            allowed = max(spec.abs_tol, spec.rel_tol * abs(val)) + err + oerr
            if abs(other - val) > allowed:
                raise QuadratureFailure(
                    f"{kind}({arg}) depends on w: {val!r} at w=0 vs {other!r} at w={w}"
                )
    return (val, err) if with_error else val


def _branch_setup(alpha, alpha_prime, state, params, partition, spec):
    if not isinstance(state, Product):
        raise TypeError("the general functional needs a Gaussian product state")
    part, ptr = state.particle, state.pointer
    sigma, x0 = part.halfwidth, part.center
    k0 = k0_magnitude_sq(
        params.m, params.omega, params.T, params.allow_caustic_branch, params.eps_sing
    )
    g = coupling_g(params.coupling, params.omega, params.T, params.eps_sing)
    prefactor = k0 * part.amplitude_sq * ptr.norm_sq
    lo_a, hi_a = interval_bounds(alpha, partition)
    lo_b, hi_b = interval_bounds(alpha_prime, partition)
    cut = spec.tail_cut * sigma
    geom = [2 * lo_a, 2 * hi_a, 2 * lo_b, 2 * hi_b, x0 - cut, x0 + cut, x0 - cut, x0 + cut]
    w_lo = x0 - cut - 2 * min(hi_a, hi_b)
    w_hi = x0 + cut - 2 * max(lo_a, lo_b)
    k2 = g * g / (8.0 * ptr.halfwidth**2)
    return prefactor, geom, w_lo, w_hi, [x0, 1.0 / sigma**2, k2]


def oracle_general_functional(
    alpha,
    alpha_prime,
    state,
    params,
    partition,
    spec=DEFAULT_SPEC,
    mode="modulus",
    with_error=False,
):
    """Nested quadrature of ``D(alpha, alpha')`` for a Gaussian product state.

    ``mode="modulus"`` integrates the modulus of the integrand,
    ``|K0|^2 |A|^2 exp(-(x'-x0)^2/sigma^2 - (x''-x0)^2/sigma^2) Ov(x''-x')``
    over the two class constraints. That is an upper bound on ``|D|`` and
    needs no propagator phase.

    ``mode="exact"`` restores the phase of the oscillator kernel
    ``a (x'^2 - x''^2) - b x (x' - x'')`` (see
    :func:`propagator.kernel_phase_coefficients`) and the driving phase
    ``B_D (x' - x'') / (2 sin omega T)``, giving the complex functional.

    Returns
    -------
    complex, or (complex, float) with ``with_error=True``
    """
    pref, geom, w_lo, w_hi, prm = _branch_setup(
        alpha, alpha_prime, state, params, partition, spec
    )
    if mode == "modulus":
        val, err = integrate_3d(K.BRANCH_MOD, w_lo, w_hi, geom, prm, spec)
        out = complex(pref * val, 0.0)
        err = pref * err
    elif mode == "exact":
        a, b = kernel_phase_coefficients(params)
        _, B_D = driving_integrals(params.driving, params.omega, params.T)
        c = 0.0 if B_D == 0.0 else B_D / (2.0 * math.sin(params.omega * params.T))
        prm = prm + [a, b, c]
        re, e_re = integrate_3d(K.BRANCH_RE, w_lo, w_hi, geom, prm, spec)
        im, e_im = integrate_3d(K.BRANCH_IM, w_lo, w_hi, geom, prm, spec)
        out = complex(pref * re, pref * im)
        err = pref * (e_re + e_im)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return (out, err) if with_error else out


def oracle_sharp_particle(alpha, alpha_prime, x0, pointer, params, partition, spec=DEFAULT_SPEC):
    """Diagonal check for a particle localised at ``x0``.

    ``D = |K0|^2 <chi|chi> int dx e_alpha((x + x0)/2) e_alpha'((x + x0)/2)``,
    with the pointer norm and the length of the ``x`` range both integrated
    numerically.
    """
    k0 = k0_magnitude_sq(
        params.m, params.omega, params.T, params.allow_caustic_branch, params.eps_sing
    )
    ell = pointer.halfwidth
    t = spec.tail_cut * ell
    dens, _ = integrate_1d(
        K.DENSITY, pointer.center - t, pointer.center + t, [pointer.center, 1.0 / ell**2], spec
    )
    norm = pointer.amplitude_sq * dens
    lo_a, hi_a = interval_bounds(alpha, partition)
    lo_b, hi_b = interval_bounds(alpha_prime, partition)
    lo = 2 * min(lo_a, lo_b) - x0 - partition.delta
    hi = 2 * max(hi_a, hi_b) - x0 + partition.delta

    def both(x):
        xb = (np.asarray(x) + x0) / 2.0
        return np.array(
            [indicator(v, alpha, partition) * indicator(v, alpha_prime, partition) for v in xb],
            dtype=float,
        )

    length, _ = adaptive_gk(both, lo, hi, abs_tol=1e-10, rel_tol=1e-12, max_depth=60)
    return k0 * norm * length


def oracle_sharp_pointer(alpha, alpha_prime, particle, params, partition, spec=DEFAULT_SPEC):
    """Diagonal check for a pointer localised in position.

    A delta-limit pointer makes the overlap ``(2/|g|) delta(x'' - x')``, so
    ``D = (2/|g|) |K0|^2 |A|^2 int dx int dx' e_alpha e_alpha' e^{-2(x'-x0)^2/sigma^2}``
    with both indicators evaluated at ``(x + x')/2``.
    """
    g = coupling_g(params.coupling, params.omega, params.T, params.eps_sing)
    if g == 0.0:
        raise DecoupledApparatus("g = 0")
    k0 = k0_magnitude_sq(
        params.m, params.omega, params.T, params.allow_caustic_branch, params.eps_sing
    )
    sigma, x0 = particle.halfwidth, particle.center
    lo_a, hi_a = interval_bounds(alpha, partition)
    lo_b, hi_b = interval_bounds(alpha_prime, partition)
    lo, hi = max(lo_a, lo_b), min(hi_a, hi_b)
    if not hi > lo:
        return 0.0
    cut = spec.tail_cut * sigma
    # middle variable w = -x, inner v = x' in [w + 2 lo, w + 2 hi]
    geom = [0.0, 0.0, 2 * lo, 2 * hi, -_INF, _INF, x0 - cut, x0 + cut, 1.0]
    val, _ = integrate_2d(
        K.DENSITY, 0.0, x0 - cut - 2 * hi, x0 + cut - 2 * lo, geom, [x0, 1.0 / sigma**2], spec
    )
    return 2.0 / abs(g) * k0 * particle.amplitude_sq * val


class SumRuleResult(NamedTuple):
    """Truncated sum over a window of class pairs.

    ``error_bar`` collects the modulus bounds of the pairs with
    ``|alpha - alpha'| >= 2`` (not included in ``partial_sum``) plus the
    quadrature error estimates.
    """

    partial_sum: float
    target: float
    error_bar: float
    window_N: int


def sum_rule_series(state, params, partition, windows=(2, 4, 6), spec=DEFAULT_SPEC):
    """:func:`sum_rule_check` for several windows, sharing the quadratures.

    Returns
    -------
    list of SumRuleResult
    """
    windows = [int(n) for n in windows]
    if any(n < 0 for n in windows):
        raise ValueError("window_N must be non-negative")
    if isinstance(state, (SharpParticle, SharpPointer)):
        if isinstance(state, SharpParticle):
            p = sharp_particle_probability(params, partition)
        else:
            p = sharp_pointer_probability(params, partition)
        return [SumRuleResult((2 * n + 1) * p, _INF, 0.0, n) for n in windows]
    if not isinstance(state, Product):
        raise TypeError(f"unsupported state {type(state).__name__}")
    target = state.particle.norm_sq * state.pointer.norm_sq
    nmax = max(windows)
    near = {}
    far = {}
    for a in range(-nmax, nmax + 1):
        near[(a, a)] = oracle_general_functional(
            a, a, state, params, partition, spec, "exact", True
        )
        if a < nmax:
            near[(a, a + 1)] = oracle_general_functional(
                a, a + 1, state, params, partition, spec, "exact", True
            )
        for b in range(a + 2, nmax + 1):
            far[(a, b)] = oracle_general_functional(
                a, b, state, params, partition, spec, "modulus", True
            )
    out = []
    for n in windows:
        total = 0.0
        bar = 0.0
        for (a, b), (val, err) in near.items():
            if -n <= a <= n and -n <= b <= n:
                # D(b, a) is the complex conjugate of D(a, b)
                weight = 1.0 if a == b else 2.0
                total += weight * val.real
                bar += weight * err
        for (a, b), (val, err) in far.items():
            if -n <= a <= n and -n <= b <= n:
                bar += 2.0 * (abs(val) + err)
        out.append(SumRuleResult(total, target, bar, n))
    return out


def sum_rule_check(state, params, partition, window_N, spec=DEFAULT_SPEC):
    """Sum ``D(alpha, alpha')`` over ``alpha, alpha' in [-N, N]``.

    For a Gaussian product state the pairs with ``|alpha - alpha'| <= 1`` are
    evaluated with the exact complex functional and their real parts summed;
    the remaining pairs are bounded in modulus and reported as an error bar.
    The target is ``<Psi0|Psi0>`` (1 for L2-normalised factors). Sharp states
    are not normalisable: the partial sum is ``(2N + 1) p`` and the target is
    infinite.
    """
    return sum_rule_series(state, params, partition, (window_N,), spec)[0]
