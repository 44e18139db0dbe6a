"""Closed forms for Gaussian particle and pointer states.

Two expansions are provided. For a narrow particle (``kappa sigma`` small)
the pointer overlap ``exp(-kappa^2 (x'' - x')^2)`` is expanded to first order;
the interval geometry then enters through the factors ``I, J`` (neighbouring
classes) and ``P0, P1`` (diagonal). For a narrow pointer the particle
Gaussian is expanded instead, giving the factors ``F, G``.

Dimensionless groups: ``beta = delta/sigma``, ``kappa = |g|/(sqrt(8) ell)``,
``gamma = kappa delta`` and ``lam = kappa sigma``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import erf, erfc

from .errors import DecoupledApparatus, NonPositive, RegimeWarning
from .model import Normalization, amplitude_sq, overlap_prefactor
from .propagator import coupling_g, k0_magnitude_sq

__all__ = [
    "ExpansionBound",
    "pointer_overlap_gaussian",
    "particle_factors",
    "probability_factors",
    "p1_legacy",
    "pointer_factors",
    "narrow_particle_bound",
    "narrow_particle_probability",
    "narrow_pointer_bound",
    "narrow_pointer_probability",
    "narrow_pointer_leading_estimate",
    "narrow_pointer_regime_ok",
    "GAMMA_MIN",
    "ELL_OVER_DELTA_MAX",
]

SQRT2PI = math.sqrt(2.0 * math.pi)
SQRT_PI_2 = math.sqrt(math.pi / 2.0)
SQRT2 = math.sqrt(2.0)

GAMMA_MIN = 1.5
ELL_OVER_DELTA_MAX = 0.1


def _out(x):
    x = np.asarray(x, dtype=float)
    return float(x) if x.ndim == 0 else x


@dataclass(frozen=True)
class ExpansionBound:
    """Two-term expansion of a bound or probability.

    Attributes
    ----------
    leading, correction : float
        First and second term; ``total = leading + correction``.
    valid : bool
        ``condition_ratio < 1``. Values are reported either way.
    condition_ratio : float
        Expansion parameter. It bounds ``|correction| / leading``.
    asymptotic_leading, asymptotic_correction : float
        The same two terms with the factors replaced by their large-argument
        limits.
    """

    leading: float
    correction: float
    valid: bool
    condition_ratio: float
    asymptotic_leading: float = math.nan
    asymptotic_correction: float = math.nan

    def __post_init__(self):
        if self.valid != (self.condition_ratio < 1):
            raise ValueError("valid must equal condition_ratio < 1")
        if self.leading < 0:
            raise ValueError("leading term must be non-negative")
        if self.valid and abs(self.correction) > self.leading * (1 + 1e-12) + 1e-300:
            raise ValueError("|correction| exceeds leading term inside the valid regime")

    @property
    def total(self) -> float:
        return self.leading + self.correction

    @property
    def asymptotic_total(self) -> float:
        return self.asymptotic_leading + self.asymptotic_correction


def pointer_overlap_gaussian(dx, g, ell):
    """Overlap of a Gaussian pointer with its shifted copy, ``exp(-g^2 dx^2 / (8 ell^2))``."""
    if not ell > 0:
        raise NonPositive("pointer half-width must be positive")
    dx = np.asarray(dx, dtype=float)
    return _out(np.exp(-(g * g) * dx * dx / (8.0 * ell * ell)))


def particle_factors(beta, j_form="appendix"):
    """Neighbour-class factors ``(I, J)`` of the narrow-particle expansion.

    ``I = sqrt(2 pi)[1/2 - e^{-2 b^2} + e^{-8 b^2}/2] + 2 pi b [erf(2 sqrt2 b) - erf(sqrt2 b)]``
    ``J = sqrt(2 pi)[1 - 2 e^{-2 b^2} + e^{-8 b^2}] + 2 pi b [erf(2 sqrt2 b) - erf(sqrt2 b)]``

    Parameters
    ----------
    beta : float or array_like
        ``delta / sigma`` (>= 0).
    j_form : {"appendix", "main-text"}
        ``"main-text"`` selects the variant with ``2 e^{-8 b^2}`` in ``J``.
        It is kept only so that it can be shown to disagree with the
        defining integral (for instance ``J(0) = sqrt(2 pi) != 0``).

    Returns
    -------
    (I, J)
    """
    b = np.asarray(beta, dtype=float)
    if np.any(b < 0):
        raise ValueError("beta must be non-negative")
    with np.errstate(invalid="ignore", over="ignore"):
        b2 = b * b
        e2 = np.expm1(-2.0 * b2)
        e8 = np.expm1(-8.0 * b2)
        tail = 2.0 * np.pi * b * (erfc(SQRT2 * b) - erfc(2.0 * SQRT2 * b))
        tail = np.where(np.isinf(b), 0.0, tail)
        I = SQRT2PI * (-e2 + 0.5 * e8) + tail
        if j_form == "appendix":
            J = SQRT2PI * (-2.0 * e2 + e8) + tail
        elif j_form == "main-text":
            J = SQRT2PI * (-2.0 * e2 + 2.0 * e8 + 1.0) + tail
        else:
            raise ValueError(f"unknown j_form {j_form!r}")
    return _out(I), _out(J)


def probability_factors(beta):
    """Diagonal factors ``(P0, P1)`` of the narrow-particle probability.

    ``P0 = sqrt(2 pi)(e^{-2 b^2} - 1) + 2 pi b erf(sqrt2 b)``
    ``P1 = 2 pi b erf(sqrt2 b) - 2 sqrt(2 pi)(1 - e^{-2 b^2})``

    Both grow like ``2 pi b`` and ``P0 - P1 = sqrt(2 pi)(1 - e^{-2 b^2}) >= 0``.
    """
    b = np.asarray(beta, dtype=float)
    if np.any(b < 0):
        raise ValueError("beta must be non-negative")
    e2 = np.expm1(-2.0 * b * b)
    lin = 2.0 * np.pi * b * erf(SQRT2 * b)
    return _out(SQRT2PI * e2 + lin), _out(lin + 2.0 * SQRT2PI * e2)


def p1_legacy(beta):
    """The ``P1`` variant that coincides with ``P0``.

    Kept for adjudication only: it does not match the defining integral of
    the first-order diagonal term.
    """
    return probability_factors(beta)[0]


def pointer_factors(gamma):
    """Narrow-pointer factors ``(F, G)``.

    ``F = [1 + e^{-16 g^2} - 2 e^{-4 g^2} + 4 sqrt(pi) g (erf 4g - erf 2g)] / 2``
    ``G = [1 + (1 + 4g^2)(e^{-16 g^2} - 2 e^{-4 g^2}) + sqrt(pi) g (3 + 16 g^2)(erf 4g - erf 2g)] / 3``

    ``G`` is the magnitude of the first-order term; that term enters the
    bound with a negative sign.
    """
    g = np.asarray(gamma, dtype=float)
    if np.any(g < 0):
        raise ValueError("gamma must be non-negative")
    with np.errstate(invalid="ignore", over="ignore"):
        g2 = g * g
        e4 = np.expm1(-4.0 * g2)
        e16 = np.expm1(-16.0 * g2)
        de = erfc(2.0 * g) - erfc(4.0 * g)
        sp = math.sqrt(math.pi)
        F_tail = np.where(np.isinf(g), 0.0, 4.0 * sp * g * de)
        G_tail = np.where(np.isinf(g), 0.0, sp * g * (3.0 + 16.0 * g2) * de)
        c = 1.0 + 4.0 * g2
        F = 0.5 * (e16 - 2.0 * e4 + F_tail)
        # small gamma: expm1 form avoids cancellation; large gamma: direct form
        head_small = c * (e16 - 2.0 * e4) - 4.0 * g2
        head_large = 1.0 + c * (np.exp(-16.0 * g2) - 2.0 * np.exp(-4.0 * g2))
        head = np.where(g < 0.5, head_small, np.where(np.isinf(g), 1.0, head_large))
        G = (head + G_tail) / 3.0
    return _out(F), _out(G)


def _constants(params):
    k0 = k0_magnitude_sq(
        params.m, params.omega, params.T, params.allow_caustic_branch, params.eps_sing
    )
    g = coupling_g(params.coupling, params.omega, params.T, params.eps_sing)
    return k0, g


def _positive(**kw):
    for name, val in kw.items():
        if not val > 0:
            raise NonPositive(f"{name} must be positive, got {val}")


def narrow_particle_bound(
    params,
    partition,
    sigma,
    ell,
    normalization=Normalization.L2_NORMALIZED,
    pointer_normalization=Normalization.L2_NORMALIZED,
) -> ExpansionBound:
    """Bound on ``|D(alpha, alpha+1)|`` for a particle narrow on the pointer scale.

    The particle Gaussian is centred on class ``alpha``.
    ``leading = |K0|^2 |A|^2 sigma^3 I(beta)`` and
    ``correction = -lam^2 |K0|^2 |A|^2 sigma^3 J(beta)``, each multiplied by
    the pointer norm. Since ``J <= 2 I`` the condition ratio is ``2 lam^2``.
    """
    _positive(sigma=sigma, ell=ell)
    k0, g = _constants(params)
    beta = partition.delta / sigma
    lam2 = g * g * sigma * sigma / (8.0 * ell * ell)
    scale = k0 * amplitude_sq(sigma, normalization) * sigma**3
    scale *= overlap_prefactor(ell, pointer_normalization)
    I, J = particle_factors(beta)
    ratio = 2.0 * lam2
    asym = SQRT_PI_2 * scale
    return ExpansionBound(scale * I, -lam2 * scale * J, ratio < 1, ratio, asym, -ratio * asym)


def narrow_particle_probability(
    params,
    partition,
    sigma,
    ell,
    normalization=Normalization.L2_NORMALIZED,
    pointer_normalization=Normalization.L2_NORMALIZED,
) -> ExpansionBound:
    """Probability of the class containing the centre of a narrow particle.

    ``p ~ |K0|^2 |A|^2 sigma^3 [P0(beta) - lam^2 P1(beta)]``; for large
    ``beta`` this tends to ``2 pi |K0|^2 |A|^2 sigma^2 delta (1 - lam^2)``.
    With the delta-limit normalisation and ``sigma -> 0`` it recovers the
    sharp-particle probability.
    """
    _positive(sigma=sigma, ell=ell)
    k0, g = _constants(params)
    beta = partition.delta / sigma
    lam2 = g * g * sigma * sigma / (8.0 * ell * ell)
    scale = k0 * amplitude_sq(sigma, normalization) * sigma**3
    scale *= overlap_prefactor(ell, pointer_normalization)
    P0, P1 = probability_factors(beta)
    asym = 2.0 * math.pi * scale * beta
    return ExpansionBound(scale * P0, -lam2 * scale * P1, lam2 < 1, lam2, asym, -lam2 * asym)


def narrow_pointer_bound(
    params,
    partition,
    sigma,
    ell,
    normalization=Normalization.L2_NORMALIZED,
    pointer_normalization=Normalization.L2_NORMALIZED,
) -> ExpansionBound:
    """Bound on ``|D(alpha, alpha+1)|`` for a pointer narrow on the particle scale.

    ``leading = sqrt(pi/2) |K0|^2 |A|^2 (sigma/kappa^2) F(gamma)`` and
    ``correction = -sqrt(pi/2) |K0|^2 |A|^2 G(gamma) / (kappa^4 sigma)``.
    The condition ratio is ``16 ell^2 / (3 g^2 sigma^2) = 2/(3 lam^2)``.
    A :class:`RegimeWarning` is issued when ``ell/delta >= 0.1``.

    Raises
    ------
    DecoupledApparatus
        If ``g = 0``.
    """
    _positive(sigma=sigma, ell=ell)
    k0, g = _constants(params)
    if g == 0.0:
        raise DecoupledApparatus("g = 0: the narrow-pointer expansion does not exist")
    if ell / partition.delta >= ELL_OVER_DELTA_MAX:
        warnings.warn(
            f"ell/delta = {ell / partition.delta:.3g} is not small", RegimeWarning, stacklevel=2
        )
    kappa = abs(g) / (math.sqrt(8.0) * ell)
    gamma = kappa * partition.delta
    scale = SQRT_PI_2 * k0 * amplitude_sq(sigma, normalization)
    scale *= overlap_prefactor(ell, pointer_normalization)
    F, G = pointer_factors(gamma)
    lead = scale * sigma / kappa**2
    corr = -scale / (kappa**4 * sigma)
    ratio = 16.0 * ell * ell / (3.0 * g * g * sigma * sigma)
    return ExpansionBound(lead * F, corr * G, ratio < 1, ratio, 0.5 * lead, corr / 3.0)


def narrow_pointer_leading_estimate(params, ell) -> float:
    """``2 m omega ell^2 / (pi g^2 sin(omega T)) = 4 |K0|^2 ell^2 / g^2``.

    The large-``gamma`` leading term for an L2-normalised particle.
    """
    _positive(ell=ell)
    k0, g = _constants(params)
    if g == 0.0:
        raise DecoupledApparatus("g = 0")
    return 4.0 * k0 * ell * ell / (g * g)


def narrow_pointer_regime_ok(gamma, ell, delta) -> bool:
    """True when ``gamma > 1.5`` and ``ell/delta < 0.1``."""
    return gamma > GAMMA_MIN and ell / delta < ELL_OVER_DELTA_MAX


def narrow_pointer_probability(
    params, partition, ell, normalization=Normalization.L2_NORMALIZED
) -> float:
    """Class probability for a narrow pointer in the step-function regime.

    L2-normalised pointer: ``(4/|g|) |K0|^2 sqrt(2 pi) ell delta``.
    Delta-limit pointer: ``(4/|g|) |K0|^2 delta``, equal to the sharp-pointer
    result. A :class:`RegimeWarning` is issued unless ``gamma > 1.5`` and
    ``ell/delta < 0.1``.

    Raises
    ------
    DecoupledApparatus
        If ``g = 0``.
    """
    _positive(ell=ell)
    k0, g = _constants(params)
    if g == 0.0:
        raise DecoupledApparatus("g = 0: the pointer is decoupled from the particle")
    gamma = abs(g) / (math.sqrt(8.0) * ell) * partition.delta
    if not narrow_pointer_regime_ok(gamma, ell, partition.delta):
        warnings.warn(
            f"narrow-pointer regime not reached (gamma = {gamma:.3g}, ell/delta = "
            f"{ell / partition.delta:.3g})",
            RegimeWarning,
            stacklevel=2,
        )
    p = 4.0 * k0 * partition.delta / abs(g)
    if Normalization.parse(normalization) is Normalization.L2_NORMALIZED:
        p *= SQRT2PI * ell
    return p
