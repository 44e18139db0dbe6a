import math

import numpy as np
import pytest

from decohist.errors import DecoupledApparatus, SingularPropagator
from decohist.exact_decoherence import (
    sharp_particle_functional,
    sharp_particle_probability,
    sharp_pointer_functional,
    sharp_pointer_probability,
    uncoupled_particle_functional,
)
from decohist.model import (
    ConstantProfile,
    FunctionalKind,
    GaussianSpec,
    Method,
    Normalization,
    OscillatorParams,
    Partition,
    SharpParticle,
)
from decohist.oracle import oracle_sharp_particle, oracle_sharp_pointer, sum_rule_check


def test_sharp_particle_off_diagonal_vanishes(quarter, narrow_partition):
    r = sharp_particle_functional(0, 1, quarter, narrow_partition)
    assert r.total == 0.0 and r.kind is FunctionalKind.EXACT_VALUE


def test_sharp_particle_diagonal(quarter, narrow_partition):
    r = sharp_particle_functional(2, 2, quarter, narrow_partition)
    np.testing.assert_allclose(r.total, 0.1 / math.pi, rtol=1e-15)
    assert r.method is Method.CLOSED_FORM and r.estimated_error == 0.0 and r.relative


def test_sharp_particle_free_limit():
    p = sharp_particle_probability(OscillatorParams(1.0, 0.0, 1.0), Partition(1.0))
    np.testing.assert_allclose(p, 1 / math.pi, rtol=1e-15)


def test_sharp_pointer_examples(quarter, narrow_partition):
    assert sharp_pointer_functional(0, 3, quarter, narrow_partition).total == 0.0
    np.testing.assert_allclose(sharp_pointer_functional(1, 1, quarter, narrow_partition).total, 0.05, rtol=1e-14)


def test_sharp_pointer_decoupled(narrow_partition):
    params = OscillatorParams(1.0, 1.0, 1.0, coupling=ConstantProfile(0.0))
    with pytest.raises(DecoupledApparatus):
        sharp_pointer_functional(0, 0, params, narrow_partition)


def test_uncoupled_matches_coupled(quarter, narrow_partition):
    for a, b in [(0, 0), (0, 1), (-4, -4)]:
        assert uncoupled_particle_functional(a, b, quarter, narrow_partition) == sharp_particle_functional(
            a, b, quarter, narrow_partition
        )
    np.testing.assert_allclose(uncoupled_particle_functional(0, 0, quarter, narrow_partition).total, 0.1 / math.pi)


def test_singular_propagator_propagates(narrow_partition):
    with pytest.raises(SingularPropagator):
        sharp_particle_functional(0, 0, OscillatorParams(1.0, 1.0, math.pi), narrow_partition)


def test_diagonal_independent_of_class_and_driving(quarter, driven_quarter, narrow_partition):
    vals = [sharp_particle_functional(a, a, quarter, narrow_partition).total for a in range(-10, 11)]
    vals += [sharp_particle_functional(a, a, driven_quarter, narrow_partition).total for a in range(-10, 11)]
    assert len(set(vals)) == 1
    vals = [sharp_pointer_functional(a, a, quarter, narrow_partition).total for a in range(-10, 11)]
    vals += [sharp_pointer_functional(a, a, driven_quarter, narrow_partition).total for a in range(-10, 11)]
    assert len(set(vals)) == 1


@pytest.mark.parametrize("x0", [-0.37, 0.0, 0.05, 1.234])
@pytest.mark.parametrize(
    "pointer",
    [GaussianSpec(0.0, 0.1), GaussianSpec(2.0, 1.5), GaussianSpec(-1.0, 0.01)],
)
def test_sharp_particle_oracle(quarter, narrow_partition, x0, pointer):
    closed = sharp_particle_probability(quarter, narrow_partition)
    for a, b in [(0, 0), (3, 3), (0, 1), (2, -1)]:
        got = oracle_sharp_particle(a, b, x0, pointer, quarter, narrow_partition)
        np.testing.assert_allclose(got, closed if a == b else 0.0, rtol=1e-8, atol=1e-12)


@pytest.mark.parametrize(
    "particle",
    [GaussianSpec(0.0, 0.05), GaussianSpec(0.33, 0.5), GaussianSpec(-2.0, 3.0)],
)
def test_sharp_pointer_oracle(quarter, narrow_partition, particle):
    closed = sharp_pointer_probability(quarter, narrow_partition)
    for a, b in [(0, 0), (-2, -2), (0, 1), (1, 3)]:
        got = oracle_sharp_pointer(a, b, particle, quarter, narrow_partition)
        np.testing.assert_allclose(got, closed if a == b else 0.0, rtol=1e-8, atol=1e-14)


def test_sharp_states_diverge_in_the_sum(quarter, narrow_partition):
    p = sharp_particle_probability(quarter, narrow_partition)
    state = SharpParticle(0.0, GaussianSpec(0.0, 0.1, Normalization.DELTA_LIMIT))
    for n in (0, 3, 10):
        r = sum_rule_check(state, quarter, narrow_partition, n)
        assert math.isinf(r.target)
        assert r.partial_sum == (2 * n + 1) * p
