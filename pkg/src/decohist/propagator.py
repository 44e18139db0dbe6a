"""Coupling constants, driving integrals and the propagator density.

For a symmetric coupling profile ``f`` the pointer is displaced by
``s(x, x') = g (x + x')/2 + d`` with ``g = B/(T sin(omega T))`` and
``B = 2 int_0^T f(t) sin(omega t) dt``. The squared modulus of the oscillator
propagator is ``|K0|^2 = m omega / (2 pi sin(omega T))``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NegativeDensity, SingularPropagator
from .model import EPS_SING, ConstantProfile, check_not_singular
from .quadrature import adaptive_gk

__all__ = [
    "SERIES_THRESHOLD",
    "PropagatorConstants",
    "coupling_B",
    "coupling_g",
    "driving_integrals",
    "phase_phi",
    "shift_function",
    "k0_magnitude_sq",
    "kernel_phase_coefficients",
    "propagator_constants",
]

# below this value of omega*T the free-particle series forms are used
SERIES_THRESHOLD = 1e-4


@dataclass(frozen=True)
class PropagatorConstants:
    B: float
    g: float
    A_D: float
    B_D: float
    k0_mag_sq: float


def _sine_moment(f, omega, T, rel_tol):
    """``2 int_0^T f(t) sin(omega t) dt``."""
    if f.is_zero() or omega == 0.0:
        return 0.0
    if isinstance(f, ConstantProfile):
        # 2c(1 - cos wT)/w written without cancellation
        return 4.0 * f.value * math.sin(0.5 * omega * T) ** 2 / omega
    val, _ = adaptive_gk(
        lambda t: f(t, T) * np.sin(omega * t), 0.0, T, abs_tol=1e-300, rel_tol=rel_tol
    )
    return 2.0 * val


def coupling_B(f, omega, T, rel_tol=1e-10):
    """``B = 2 int_0^T f(t) sin(omega t) dt``.

    Uses the closed form for constant profiles and adaptive Gauss-Kronrod
    quadrature otherwise.

    Raises
    ------
    QuadratureFailure
    """
    return _sine_moment(f, omega, T, rel_tol)


def coupling_g(f, omega, T, eps_sing=EPS_SING, rel_tol=1e-10):
    """Coupling constant ``g = B / (T sin(omega T))``.

    For ``omega T`` below :data:`SERIES_THRESHOLD` the free-particle limit
    ``(2/T^2) int t f dt`` is used together with its ``(omega T)^2``
    correction.

    Raises
    ------
    SingularPropagator
        If ``sin(omega T)`` vanishes at a nonzero multiple of pi.
    """
    if f.is_zero():
        return 0.0
    theta = omega * T
    if isinstance(f, ConstantProfile):
        if theta < SERIES_THRESHOLD:
            return f.value * (1.0 + theta * theta / 12.0)
        check_not_singular(omega, T, eps_sing)
        return 2.0 * f.value * math.tan(0.5 * theta) / theta
    if theta < SERIES_THRESHOLD:
        m1, _ = adaptive_gk(lambda t: t * f(t, T), 0.0, T, abs_tol=1e-300, rel_tol=rel_tol)
        m3, _ = adaptive_gk(lambda t: t**3 * f(t, T), 0.0, T, abs_tol=1e-300, rel_tol=rel_tol)
        return (2.0 / T**2) * (m1 + omega**2 / 6.0 * (T * T * m1 - m3))
    check_not_singular(omega, T, eps_sing)
    return coupling_B(f, omega, T, rel_tol) / (T * math.sin(theta))


def driving_integrals(f_D, omega, T, rel_tol=1e-8):
    """Driving integrals ``(A_D, B_D)``.

    ``A_D = int_0^T dt int_0^t ds f_D(t) f_D(s) sin(omega (T - t)) sin(omega s)``
    by nested adaptive quadrature over the triangle, and
    ``B_D = 2 int_0^T f_D(t) sin(omega t) dt``.

    Raises
    ------
    QuadratureFailure
    """
    if f_D.is_zero() or omega == 0.0:
        return 0.0, 0.0
    inner_tol = rel_tol * 1e-2

    def inner(t):
        return adaptive_gk(
            lambda s: f_D(s, T) * np.sin(omega * s), 0.0, t, abs_tol=1e-300, rel_tol=inner_tol
        )[0]

    def outer(t):
        col = np.array([inner(tj) for tj in t])
        return f_D(t, T) * np.sin(omega * (T - t)) * col

    A_D, _ = adaptive_gk(outer, 0.0, T, abs_tol=1e-300, rel_tol=rel_tol)
    return A_D, _sine_moment(f_D, omega, T, 1e-10)


def _sin_theta(omega, T, eps_sing):
    check_not_singular(omega, T, eps_sing)
    return math.sin(omega * T)


def phase_phi(xbar, consts, params):
    """Driving phase ``[xbar B_D - A_D/(m omega)] / sin(omega T)``.

    Only differences of this phase enter any computed quantity, and those are
    linear in ``xbar``.

    Raises
    ------
    SingularPropagator
        If ``sin(omega T) = 0`` (including the free particle ``omega = 0``).
    """
    if params.omega == 0.0:
        raise SingularPropagator("the driving phase is undefined at omega = 0")
    s = _sin_theta(params.omega, params.T, params.eps_sing)
    return (xbar * consts.B_D - consts.A_D / (params.m * params.omega)) / s


def shift_function(x, x_prime, g, d=0.0):
    """Pointer shift ``g (x + x')/2 + d``."""
    return g * (x + x_prime) / 2.0 + d


def k0_magnitude_sq(m, omega, T, allow_caustic_branch=False, eps_sing=EPS_SING):
    """``|K0|^2 = m omega / (2 pi sin(omega T))``.

    For ``omega T`` below :data:`SERIES_THRESHOLD` the free-particle value
    ``m/(2 pi T)`` is returned with its ``(omega T)^2/6`` correction.

    Raises
    ------
    SingularPropagator
        ``sin(omega T) = 0``.
    NegativeDensity
        ``sin(omega T) < 0`` and ``allow_caustic_branch`` is false.
    """
    theta = omega * T
    if theta < SERIES_THRESHOLD:
        return m / (2.0 * math.pi * T) * (1.0 + theta * theta / 6.0)
    s = _sin_theta(omega, T, eps_sing)
    if s < 0 and not allow_caustic_branch:
        raise NegativeDensity(
            f"sin(omega T) = {s:.3g} < 0; pass allow_caustic_branch=True to use |sin|"
        )
    return m * omega / (2.0 * math.pi * abs(s))


def kernel_phase_coefficients(params):
    """Coefficients ``(a, b)`` of the oscillator kernel phase.

    ``K0*(x, T; x'', 0) K0(x, T; x', 0) = |K0|^2 exp{i [a (x'^2 - x''^2)
    - b x (x' - x'')]}`` with ``a = m omega cos(omega T)/(2 sin(omega T))`` and
    ``b = m omega / sin(omega T)``. The free particle gives ``a = m/(2T)`` and
    ``b = m/T`` up to ``(omega T)^2`` corrections.
    """
    m, omega, T = params.m, params.omega, params.T
    theta = omega * T
    if theta < SERIES_THRESHOLD:
        a = m / (2.0 * T) * (1.0 - theta * theta / 3.0)
        b = m / T * (1.0 + theta * theta / 6.0)
        return a, b
    s = _sin_theta(omega, T, params.eps_sing)
    return m * omega * math.cos(theta) / (2.0 * s), m * omega / s


def propagator_constants(params) -> PropagatorConstants:
    """All propagator constants for ``params``."""
    B = coupling_B(params.coupling, params.omega, params.T)
    g = coupling_g(params.coupling, params.omega, params.T, params.eps_sing)
    A_D, B_D = driving_integrals(params.driving, params.omega, params.T)
    k0 = k0_magnitude_sq(
        params.m, params.omega, params.T, params.allow_caustic_branch, params.eps_sing
    )
    return PropagatorConstants(B, g, A_D, B_D, k0)
