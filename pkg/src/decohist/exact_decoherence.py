"""Decoherence functional for initial states that decohere exactly.

When either the particle or the pointer starts in a position eigenstate the
off-diagonal elements vanish identically, because two different class
indicators never overlap. The diagonal elements are relative probabilities:
they are the same for every class, so their sum over all classes diverges.
"""
from __future__ import annotations

import math

from .errors import DecoupledApparatus
from .model import FunctionalKind, FunctionalResult, Method
from .propagator import coupling_g, k0_magnitude_sq

__all__ = [
    "sharp_particle_probability",
    "sharp_pointer_probability",
    "sharp_particle_functional",
    "sharp_pointer_functional",
    "uncoupled_particle_functional",
]


def _k0(params):
    return k0_magnitude_sq(
        params.m, params.omega, params.T, params.allow_caustic_branch, params.eps_sing
    )


def _exact(value):
    return FunctionalResult(
        FunctionalKind.EXACT_VALUE, value, 0.0, value, Method.CLOSED_FORM, 0.0, True
    )


def sharp_particle_probability(params, partition) -> float:
    """``p = 2 delta |K0|^2 = m omega delta / (pi sin(omega T))``."""
    return 2.0 * partition.delta * _k0(params)


def sharp_pointer_probability(params, partition) -> float:
    """``p = 4 delta |K0|^2 / |g|``.

    Raises
    ------
    DecoupledApparatus
        If ``g = 0``; the probability would be infinite.
    """
    g = coupling_g(params.coupling, params.omega, params.T, params.eps_sing)
    if g == 0.0:
        raise DecoupledApparatus("g = 0: the pointer is decoupled from the particle")
    return 4.0 * partition.delta * _k0(params) / abs(g)


def sharp_particle_functional(alpha, alpha_prime, params, partition) -> FunctionalResult:
    """Particle sharply localised; any normalised pointer state.

    Zero off the diagonal, :func:`sharp_particle_probability` on it,
    independently of the initial position, the driving force and the pointer
    shape.
    """
    if alpha != alpha_prime:
        return _exact(0.0)
    return _exact(sharp_particle_probability(params, partition))


def sharp_pointer_functional(alpha, alpha_prime, params, partition) -> FunctionalResult:
    """Pointer sharply localised; any normalised particle state.

    Raises
    ------
    DecoupledApparatus
        If ``g = 0``.
    """
    p = sharp_pointer_probability(params, partition)
    return _exact(p if alpha == alpha_prime else 0.0)


def uncoupled_particle_functional(alpha, alpha_prime, params, partition) -> FunctionalResult:
    """Sharp particle without any apparatus: same result as the coupled case."""
    return sharp_particle_functional(alpha, alpha_prime, params, partition)
