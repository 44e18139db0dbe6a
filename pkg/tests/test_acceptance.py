"""Acceptance criteria, one test each.

Every test prints a single ``PASS criterion N: ...`` or ``FAIL criterion N: ...``
line (visible with ``pytest -v`` or ``-s``) before asserting.
"""
import math
import time
import warnings

import numpy as np
import pytest

from decohist.errors import RegimeWarning
from decohist.exact_decoherence import (
    sharp_particle_functional,
    sharp_particle_probability,
    sharp_pointer_functional,
    sharp_pointer_probability,
)
from decohist.gaussian_analysis import (
    narrow_particle_bound,
    narrow_particle_probability,
    narrow_pointer_bound,
    narrow_pointer_probability,
    particle_factors,
    pointer_factors,
)
from decohist.model import ConstantProfile, GaussianSpec, Normalization, OscillatorParams, Partition, Product
from decohist.oracle import (
    erf_product_integral,
    oracle_factor,
    oracle_general_functional,
    oracle_sharp_particle,
    oracle_sharp_pointer,
    sum_rule_series,
)
from decohist.verification import closed_factor, erf_pairs, sum_rule_reference

S2P = math.sqrt(2.0 * math.pi)
DELTA = Normalization.DELTA_LIMIT


@pytest.fixture
def report(capsys):
    def _report(n, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")
        assert ok, detail

    return _report


def test_criterion_01_factor_asymptotes(report):
    I5, J5 = particle_factors(5.0)
    F4, G4 = pointer_factors(4.0)
    errs = {
        "I(5)": abs(I5 - S2P / 2),
        "J(5)": abs(J5 - S2P),
        "F(4)": abs(F4 - 0.5),
        "G(4)": abs(G4 - 1 / 3),
    }
    detail = ", ".join(f"{k} err {v:.2e}" for k, v in errs.items()) + " (tol 1e-6)"
    report(1, max(errs.values()) <= 1e-6, detail)


def test_criterion_02_spot_values(report):
    I, J = particle_factors(1.72)
    F, G = pointer_factors(1.5)
    got = {"I(1.72)": (I, 1.25), "J(1.72)": (J, 2.49), "F(1.5)": (F, 0.50), "G(1.5)": (G, 0.33)}
    ok = all(abs(v - e) <= 0.01 for v, e in got.values())
    report(2, ok, ", ".join(f"{k}={v:.4f}" for k, (v, _) in got.items()) + " (tol 0.01)")


def test_criterion_03_oracle_equivalence(report):
    start = time.perf_counter()
    deltas = {
        f"{kind}({arg})": abs(closed_factor(kind, arg) - oracle_factor(kind, arg))
        for kind in ("I", "J", "F", "G", "P0", "P1")
        for arg in (0.25, 0.5, 1.0, 1.72, 3.0)
    }
    where = max(deltas, key=deltas.get)
    worst = deltas[where]
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-6 and elapsed <= 60.0
    report(3, ok, f"max |closed - quadrature| = {worst:.2e} at {where} (tol 1e-6), {elapsed:.1f} s (limit 60 s)")


def test_criterion_04_j_adjudication(report):
    q = oracle_factor("J", 0.5)
    d_app = abs(q - particle_factors(0.5, "appendix")[1])
    d_main = abs(q - particle_factors(0.5, "main-text")[1])
    ok = d_app <= 1e-6 and d_main > 1e-5
    report(4, ok, f"J(0.5) quadrature={q:.12f}, |appendix form| {d_app:.2e} (<= 1e-6), |main-text form| {d_main:.2e} (> 1e-5)")


def test_criterion_05_exact_decoherence(report):
    cases = [(1.0, 1.0, math.pi / 2, 0.1, 1.0), (2.0, 0.7, 1.3, 0.37, 0.6), (0.5, 3.0, 0.2, 1.5, 2.0)]
    off_zero = True
    worst = 0.0
    for m, w, T, delta, c in cases:
        part = Partition(delta)
        plain = OscillatorParams(m, w, T, coupling=ConstantProfile(c))
        driven = OscillatorParams(m, w, T, coupling=ConstantProfile(c), driving=ConstantProfile(3.0))
        th = w * T
        g = 2.0 * c * math.tan(th / 2) / th
        p_part = m * w * delta / (math.pi * math.sin(th))
        p_ptr = 2.0 * m * w * delta / (g * math.pi * math.sin(th))
        for params in (plain, driven):
            for a in range(-10, 11):
                for b in range(-10, 11):
                    vp = sharp_particle_functional(a, b, params, part).total
                    vq = sharp_pointer_functional(a, b, params, part).total
                    if a != b:
                        off_zero &= vp == 0.0 and vq == 0.0
                    else:
                        worst = max(worst, abs(vp / p_part - 1), abs(vq / p_ptr - 1))
    # independence of x0, of the driving and of the pointer shape, by quadrature
    params = OscillatorParams(1.0, 1.0, math.pi / 2, driving=ConstantProfile(2.0))
    part = Partition(0.1)
    p = sharp_particle_probability(params, part)
    q = sharp_pointer_probability(params, part)
    indep = 0.0
    for x0, ell in ((0.0, 0.1), (0.03, 0.5), (-0.04, 2.0)):
        alpha = round(x0 / 0.1)
        v = oracle_sharp_particle(alpha, alpha, x0, GaussianSpec(0.0, ell), params, part)
        u = oracle_sharp_pointer(alpha, alpha, GaussianSpec(x0, 0.05), params, part)
        indep = max(indep, abs(v / p - 1), abs(u / q - 1))
    ok = off_zero and worst <= 1e-12 and indep <= 1e-8
    report(5, ok, f"off-diagonal exactly 0 over +-10: {off_zero}, diagonal rel err {worst:.1e} (tol 1e-12), "
                  f"quadrature spread over x0/pointer/driving {indep:.1e}")


def test_criterion_06_erf_identity(report):
    worst = max(abs(n - c) for n, c in (erf_product_integral(a, b) for a, b in erf_pairs()))
    report(6, worst <= 1e-9, f"5 seeded (a, b) pairs, max |numeric - closed| = {worst:.2e} (tol 1e-9)")


def test_criterion_07_sum_rule(report):
    series = sum_rule_series(*sum_rule_reference(), windows=(2, 4, 6))
    devs = [abs(r.partial_sum - r.target) for r in series]
    bars = [r.error_bar for r in series]
    monotone = all(b <= a for a, b in zip(devs, devs[1:]))
    ok = devs[-1] <= 1e-3 and monotone and bars[-1] < 1e-6
    detail = ", ".join(f"N={r.window_N}: {d:.2e}" for r, d in zip(series, devs))
    report(7, ok, f"|sum - 1| {detail} (tol 1e-3 at N=6, non-increasing: {monotone}), far-pair bound {bars[-1]:.1e}")


def test_criterion_08_delta_limit(report):
    params = OscillatorParams(1.0, 1.0, math.pi / 2)
    part = Partition(0.1)
    sharp = sharp_particle_probability(params, part)
    narrow = narrow_particle_probability(params, part, part.delta / 1000, 0.5, DELTA).total
    rel = abs(narrow / sharp - 1)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        ptr = narrow_pointer_probability(params, part, 1e-3, DELTA)
    same = ptr == sharp_pointer_probability(params, part)
    report(8, rel <= 1e-3 and same, f"narrow-particle rel err {rel:.2e} at sigma=delta/1000 (tol 1e-3), narrow-pointer == sharp-pointer: {same}")


def test_criterion_09_expansion_bounds(report):
    params = OscillatorParams(1.0, 1.0, math.pi / 2)
    g = 4.0 / math.pi
    k0 = 1.0 / (2.0 * math.pi)
    worst_p = worst_q = 0.0
    ell = 0.5
    kappa = g / (math.sqrt(8.0) * ell)
    for beta in (1.72, 2.0, 3.0, 5.0):
        for ks in (0.01, 0.05, 0.1):
            sigma = math.sqrt(ks) / kappa
            part = Partition(beta * sigma)
            b = narrow_particle_bound(params, part, sigma, ell)
            amp = math.sqrt(2.0 / math.pi) / sigma
            ref = math.sqrt(math.pi / 2) * k0 * amp * sigma**3 * (1 - 2 * sigma**2 * kappa**2)
            worst_p = max(worst_p, abs(b.total / ref - 1))
    sigma = 1.0
    for gamma in (1.5, 2.0, 3.0, 5.0):
        for ratio in (0.01, 0.05, 0.1):
            ell = math.sqrt(ratio * 3 * g * g * sigma**2 / 16)
            kappa = g / (math.sqrt(8.0) * ell)
            part = Partition(gamma / kappa)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", RegimeWarning)
                b = narrow_pointer_bound(params, part, sigma, ell)
            ref = k0 * 4 * ell**2 / g**2 * (1 - 16 * ell**2 / (3 * g**2 * sigma**2))
            worst_q = max(worst_q, abs(b.total / ref - 1))
    ok = worst_p <= 0.01 and worst_q <= 0.01
    report(9, ok, f"max rel gap to asymptotic form: narrow-particle {worst_p:.2e}, narrow-pointer {worst_q:.2e} (tol 1e-2)")


def test_criterion_10_neighbour_falloff(report):
    params = OscillatorParams(1.0, 1.0, math.pi / 2)
    part = Partition(1.0)
    state = Product(GaussianSpec(0.0, 0.25), GaussianSpec(0.0, 0.5))  # beta = delta/sigma = 4
    d1 = oracle_general_functional(0, 1, state, params, part).real
    d2 = oracle_general_functional(0, 2, state, params, part).real
    ratio = d2 / d1
    report(10, d1 > 0 and ratio <= 1e-3, f"|D(a,a+2)| / |D(a,a+1)| = {ratio:.2e} at beta=4 (tol 1e-3)")
