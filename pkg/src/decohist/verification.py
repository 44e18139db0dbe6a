"""Oracle-versus-closed-form verification suite.

Each check compares a closed form (or a limiting statement) against the
brute-force oracle and records whether it holds at its tolerance. The CLI
``verify`` subcommand prints these records; its exit status is the CI gate.
"""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .gaussian_analysis import p1_legacy, particle_factors, pointer_factors, probability_factors
from .model import GaussianSpec, OscillatorParams, Partition, Product
from .oracle import FACTOR_KINDS, erf_product_integral, oracle_factor, sum_rule_series
from .quadrature import QuadratureSpec

__all__ = [
    "Check",
    "FACTOR_ARGS",
    "ERF_SEED",
    "SUM_RULE_WINDOWS",
    "DEFAULT_TOLERANCES",
    "closed_factor",
    "erf_pairs",
    "sum_rule_reference",
    "run_checks",
]

FACTOR_ARGS = (0.25, 0.5, 1.0, 1.72, 3.0)
ERF_SEED = 20231107
SUM_RULE_WINDOWS = (2, 4, 6)
ADJUDICATION_ARG = 0.5
DEFAULT_TOLERANCES = {"factor": 1e-6, "erf": 1e-9, "sum": 1e-3, "adjudication": 1e-6}


class Check(NamedTuple):
    name: str
    expected: float
    got: float
    tolerance: float
    passed: bool

    @property
    def delta(self) -> float:
        return abs(self.got - self.expected)


def closed_factor(kind, arg, j_form="appendix") -> float:
    """Closed-form value of factor ``kind`` at ``arg``."""
    if kind in ("I", "J"):
        return particle_factors(arg, j_form)[kind == "J"]
    if kind in ("P0", "P1"):
        return probability_factors(arg)[kind == "P1"]
    if kind in ("F", "G"):
        return pointer_factors(arg)[kind == "G"]
    raise ValueError(f"unknown factor {kind!r}")


def erf_pairs(n=5, seed=ERF_SEED, bound=3.0):
    """Deterministic pseudo-random ``(a, b)`` pairs with ``|a|, |b| <= bound``."""
    rng = np.random.default_rng(seed)
    return [tuple(map(float, p)) for p in rng.uniform(-bound, bound, size=(n, 2))]


def sum_rule_reference():
    """Reference configuration for the normalisation sum rule.

    L2-normalised Gaussian product state with ``sigma = delta/5`` centred at
    the partition origin; ``m = 2, omega = 1, T = 0.3, ell = 0.5``.
    """
    params = OscillatorParams(2.0, 1.0, 0.3)
    partition = Partition(1.0, 0.0)
    state = Product(GaussianSpec(0.0, 0.2), GaussianSpec(0.0, 0.5))
    return state, params, partition


def _tol(tol, key):
    return DEFAULT_TOLERANCES[key] if tol is None else tol


def run_checks(tol=None, j_form="appendix", spec=None, include_sum_rule=True):
    """Run the whole suite and return a list of :class:`Check`.

    Parameters
    ----------
    tol : float, optional
        Overrides every tolerance.
    j_form : {"appendix", "main-text"}
        Closed form of ``J`` under test.
    """
    spec = spec or QuadratureSpec()
    checks = []
    ftol = _tol(tol, "factor")
    for kind in FACTOR_KINDS:
        for arg in FACTOR_ARGS:
            exp = closed_factor(kind, arg, j_form)
            got = oracle_factor(kind, arg, spec)
            checks.append(Check(f"factor:{kind}({arg})", exp, got, ftol, abs(got - exp) <= ftol))

    etol = _tol(tol, "erf")
    for a, b in erf_pairs():
        numeric, closed = erf_product_integral(a, b, spec)
        checks.append(
            Check(f"erf:a={a:.6f},b={b:.6f}", closed, numeric, etol, abs(numeric - closed) <= etol)
        )

    if include_sum_rule:
        stol = _tol(tol, "sum")
        series = sum_rule_series(*sum_rule_reference(), windows=SUM_RULE_WINDOWS, spec=spec)
        for prev, cur in zip(series, series[1:]):
            dp = abs(prev.partial_sum - prev.target)
            dc = abs(cur.partial_sum - cur.target)
            ok = dc <= dp + cur.error_bar + prev.error_bar
            checks.append(
                Check(f"sum-rule:deviation N={prev.window_N}->{cur.window_N}", dp, dc, 0.0, ok)
            )
        last = series[-1]
        checks.append(
            Check(
                f"sum-rule:N={last.window_N}",
                last.target,
                last.partial_sum,
                stol,
                abs(last.partial_sum - last.target) <= stol,
            )
        )

    atol = _tol(tol, "adjudication")
    beta = ADJUDICATION_ARG
    j_oracle = oracle_factor("J", beta, spec)
    j_test = particle_factors(beta, j_form)[1]
    other = "main-text" if j_form == "appendix" else "appendix"
    j_other = particle_factors(beta, other)[1]
    checks.append(
        Check(f"j-adjudication:{j_form}", j_test, j_oracle, atol, abs(j_oracle - j_test) <= atol)
    )
    checks.append(
        Check(
            f"j-adjudication:{other}-rejected",
            j_other,
            j_oracle,
            10 * atol,
            abs(j_oracle - j_other) > 10 * atol,
        )
    )
    p1_oracle = oracle_factor("P1", beta, spec)
    p1_closed = probability_factors(beta)[1]
    p1_old = p1_legacy(beta)
    checks.append(
        Check("p1-adjudication:corrected", p1_closed, p1_oracle, atol, abs(p1_oracle - p1_closed) <= atol)
    )
    checks.append(
        Check(
            "p1-adjudication:equal-to-P0-rejected",
            p1_old,
            p1_oracle,
            10 * atol,
            abs(p1_oracle - p1_old) > 10 * atol,
        )
    )
    return checks
