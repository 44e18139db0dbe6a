"""Decoherent histories of a driven oscillator measured by a von Neumann pointer.

Closed-form decoherence functionals, bounds and class probabilities, each
checked against brute-force nested quadrature.
"""
from ._backend import BACKEND
from .coarse_grain import IntervalId, indicator, interval_bounds, interval_index
from .errors import (
    AsymmetricFunction,
    ConfigError,
    DecohistError,
    DecoupledApparatus,
    NegativeDensity,
    NonPositive,
    QuadratureFailure,
    RegimeWarning,
    SingularPropagator,
)
from .exact_decoherence import (
    sharp_particle_functional,
    sharp_particle_probability,
    sharp_pointer_functional,
    sharp_pointer_probability,
    uncoupled_particle_functional,
)
from .gaussian_analysis import (
    ExpansionBound,
    narrow_particle_bound,
    narrow_particle_probability,
    narrow_pointer_bound,
    narrow_pointer_probability,
    particle_factors,
    pointer_factors,
    pointer_overlap_gaussian,
    probability_factors,
)
from .model import (
    CallableProfile,
    ConstantProfile,
    DerivedConstants,
    FunctionalKind,
    FunctionalResult,
    GaussianSpec,
    Method,
    Normalization,
    OscillatorParams,
    Partition,
    Product,
    SharpParticle,
    SharpPointer,
    SineWindowProfile,
    TableProfile,
    dimensionless_groups,
    profile_from_name,
    validate,
)
from .oracle import (
    QuadratureSpec,
    erf_product_integral,
    oracle_factor,
    oracle_general_functional,
    sum_rule_check,
)
from .propagator import (
    PropagatorConstants,
    coupling_B,
    coupling_g,
    driving_integrals,
    k0_magnitude_sq,
    phase_phi,
    propagator_constants,
    shift_function,
)

__version__ = "0.1.0"
