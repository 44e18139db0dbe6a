"""Physical parameters, partitions, initial states and result containers.

Units are chosen with hbar = 1. Every type is an immutable value object.
"""
from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from .errors import AsymmetricFunction, NonPositive, SingularPropagator

__all__ = [
    "EPS_SING",
    "SYMMETRY_GRID",
    "Profile",
    "ConstantProfile",
    "SineWindowProfile",
    "TableProfile",
    "CallableProfile",
    "profile_from_name",
    "OscillatorParams",
    "Partition",
    "Normalization",
    "GaussianSpec",
    "SharpParticle",
    "SharpPointer",
    "Product",
    "InitialState",
    "FunctionalKind",
    "Method",
    "FunctionalResult",
    "DerivedConstants",
    "Configuration",
    "check_symmetric",
    "check_not_singular",
    "validate",
    "dimensionless_groups",
]

EPS_SING = 1e-6
SYMMETRY_GRID = 257
SYMMETRY_RTOL = 1e-12


# ---------------------------------------------------------------- profiles

class Profile:
    """A real function of time on ``[0, T]``.

    Subclasses implement ``__call__(t, T)`` for array ``t``. ``name`` is the
    string accepted by :func:`profile_from_name`.
    """

    name = "profile"

    def __call__(self, t, T):  # pragma: no cover - abstract
        raise NotImplementedError

    def is_zero(self) -> bool:
        return False


@dataclass(frozen=True)
class ConstantProfile(Profile):
    """``f(t) = value``."""

    value: float = 1.0

    @property
    def name(self):
        return f"const:{self.value!r}"

    def __call__(self, t, T):
        return np.full(np.shape(t), float(self.value))

    def is_zero(self):
        return self.value == 0.0


@dataclass(frozen=True)
class SineWindowProfile(Profile):
    """``f(t) = amplitude * sin(pi t / T)``, a smooth switch-on/off window."""

    amplitude: float = 1.0

    @property
    def name(self):
        return f"sine-window:{self.amplitude!r}"

    def __call__(self, t, T):
        return self.amplitude * np.sin(np.pi * np.asarray(t, dtype=float) / T)

    def is_zero(self):
        return self.amplitude == 0.0


@dataclass(frozen=True)
class TableProfile(Profile):
    """Piecewise-linear interpolation of tabulated ``(t, value)`` pairs."""

    t: tuple
    values: tuple
    source: str = ""

    def __post_init__(self):
        if len(self.t) != len(self.values) or len(self.t) < 2:
            raise ValueError("table profile needs at least two (t, value) rows")
        if np.any(np.diff(self.t) <= 0):
            raise ValueError("table times must be strictly increasing")

    @property
    def name(self):
        return f"table:{self.source}"

    @classmethod
    def from_csv(cls, path):
        """Read a two-column CSV file; a non-numeric first row is a header."""
        ts, vs = [], []
        with open(path, newline="") as fh:
            for row in csv.reader(fh):
                row = [c.strip() for c in row if c.strip()]
                if not row or row[0].startswith("#"):
                    continue
                try:
                    t, v = float(row[0]), float(row[1])
                except (ValueError, IndexError):
                    if ts:
                        raise ValueError(f"bad row in {path}: {row}")
                    continue
                ts.append(t)
                vs.append(v)
        return cls(tuple(ts), tuple(vs), str(path))

    def __call__(self, t, T):
        return np.interp(np.asarray(t, dtype=float), self.t, self.values)

    def is_zero(self):
        return not any(self.values)


@dataclass(frozen=True)
class CallableProfile(Profile):
    """Wrap a Python function of ``t`` (scalar or array)."""

    func: Callable = field(compare=True)
    label: str = "callable"

    @property
    def name(self):
        return self.label

    def __call__(self, t, T):
        t = np.asarray(t, dtype=float)
        try:
            out = np.asarray(self.func(t), dtype=float)
            if out.shape == t.shape:
                return out
        except Exception:
            pass
        return np.array([float(self.func(x)) for x in t.ravel()]).reshape(t.shape)


def profile_from_name(spec: str) -> Profile:
    """Build a profile from a name such as ``const``, ``const:2``,
    ``sine-window:0.5``, ``zero`` or ``table:<path>``."""
    spec = spec.strip()
    head, _, arg = spec.partition(":")
    head = head.strip().lower()
    if head == "table":
        if not arg:
            raise ValueError("table profile needs a path, e.g. table:f.csv")
        return TableProfile.from_csv(arg)
    if head == "zero":
        return ConstantProfile(0.0)
    value = float(arg) if arg else 1.0
    if head == "const":
        return ConstantProfile(value)
    if head == "sine-window":
        return SineWindowProfile(value)
    raise ValueError(f"unknown profile {spec!r}")


# ---------------------------------------------------------------- parameters

@dataclass(frozen=True)
class OscillatorParams:
    """Driven oscillator plus measuring apparatus.

    Parameters
    ----------
    m : float
        Particle mass (> 0).
    omega : float
        Angular frequency (>= 0; zero is the free particle).
    T : float
        Duration of the measurement (> 0).
    coupling : Profile
        Dimensionless coupling function ``f(t)``, symmetric about ``T/2``.
    driving : Profile
        Driving force ``f_D(t)``, symmetric about ``T/2``.
    d : float
        Constant pointer displacement. It cancels in every computed quantity.
    M_eff : float
        Effective pointer mass; also cancels.
    allow_caustic_branch : bool
        Permit ``sin(omega T) < 0`` and use ``|sin(omega T)|`` in densities.
    eps_sing : float
        Minimum distance of ``omega T`` from a nonzero multiple of pi.
    """

    m: float
    omega: float
    T: float
    coupling: Profile = ConstantProfile(1.0)
    driving: Profile = ConstantProfile(0.0)
    d: float = 0.0
    M_eff: float = 1.0
    allow_caustic_branch: bool = False
    eps_sing: float = EPS_SING

    def __post_init__(self):
        if not self.m > 0:
            raise NonPositive(f"mass must be positive, got {self.m}")
        if not self.T > 0:
            raise NonPositive(f"duration T must be positive, got {self.T}")
        if not self.omega >= 0:
            raise NonPositive(f"omega must be non-negative, got {self.omega}")

    @property
    def theta(self) -> float:
        """The phase ``omega * T``."""
        return self.omega * self.T


@dataclass(frozen=True)
class Partition:
    """Equal intervals ``(origin + a*delta - delta/2, origin + a*delta + delta/2]``."""

    delta: float
    origin: float = 0.0

    def __post_init__(self):
        if not self.delta > 0:
            raise NonPositive(f"interval length delta must be positive, got {self.delta}")


class Normalization(enum.Enum):
    """Amplitude convention for a Gaussian ``A exp(-(x - c)^2 / w^2)``.

    ``L2_NORMALIZED`` gives unit norm. ``DELTA_LIMIT`` gives
    ``|A|^2 = 1/(pi w^2)``, so that ``|psi|^2`` tends to ``delta(x - c)`` up to
    a constant as ``w -> 0``.
    """

    L2_NORMALIZED = "L2Normalized"
    DELTA_LIMIT = "DeltaLimit"

    @classmethod
    def parse(cls, text):
        if isinstance(text, cls):
            return text
        key = str(text).strip().lower().replace("-", "").replace("_", "")
        for member in cls:
            if key in (member.value.lower(), member.name.lower().replace("_", "")):
                return member
        if key in ("l2", "normalized"):
            return cls.L2_NORMALIZED
        if key in ("delta",):
            return cls.DELTA_LIMIT
        raise ValueError(f"unknown normalization {text!r}")


def amplitude_sq(halfwidth, normalization) -> float:
    """``|A|^2`` of a Gaussian with the given half-width and convention."""
    if Normalization.parse(normalization) is Normalization.L2_NORMALIZED:
        return math.sqrt(2.0 / math.pi) / halfwidth
    return 1.0 / (math.pi * halfwidth**2)


def overlap_prefactor(halfwidth, normalization) -> float:
    """``|A|^2 w sqrt(pi/2)``: the squared norm of the Gaussian."""
    return amplitude_sq(halfwidth, normalization) * halfwidth * math.sqrt(math.pi / 2.0)


@dataclass(frozen=True)
class GaussianSpec:
    """Gaussian wavefunction ``A exp(-(x - center)^2 / halfwidth^2)``."""

    center: float
    halfwidth: float
    normalization: Normalization = Normalization.L2_NORMALIZED

    def __post_init__(self):
        if not self.halfwidth > 0:
            raise NonPositive(f"Gaussian half-width must be positive, got {self.halfwidth}")
        object.__setattr__(self, "normalization", Normalization.parse(self.normalization))

    @property
    def amplitude_sq(self) -> float:
        return amplitude_sq(self.halfwidth, self.normalization)

    @property
    def norm_sq(self) -> float:
        """``<psi|psi>``; 1 for the L2 convention."""
        return overlap_prefactor(self.halfwidth, self.normalization)


@dataclass(frozen=True)
class SharpParticle:
    """Particle in a position eigenstate at ``x0``; pointer arbitrary."""

    x0: float
    pointer: GaussianSpec


@dataclass(frozen=True)
class SharpPointer:
    """Pointer in a position eigenstate; particle Gaussian."""

    particle: GaussianSpec


@dataclass(frozen=True)
class Product:
    """Gaussian particle times Gaussian pointer."""

    particle: GaussianSpec
    pointer: GaussianSpec


InitialState = Union[SharpParticle, SharpPointer, Product]


# ---------------------------------------------------------------- results

class FunctionalKind(enum.Enum):
    EXACT_VALUE = "ExactValue"
    UPPER_BOUND = "UpperBound"


class Method(enum.Enum):
    CLOSED_FORM = "ClosedForm"
    ORACLE = "Oracle"


@dataclass(frozen=True)
class FunctionalResult:
    """Value or bound of one decoherence-functional element.

    ``relative`` flags probabilities of non-normalisable states, which are
    meaningful only as ratios.
    """

    kind: FunctionalKind
    order0: float
    order1: float
    total: float
    method: Method
    estimated_error: float = 0.0
    relative: bool = False

    def __post_init__(self):
        if not math.isclose(self.total, self.order0 + self.order1, rel_tol=1e-12, abs_tol=0.0):
            raise ValueError("total must equal order0 + order1")
        if self.estimated_error < 0:
            raise ValueError("estimated_error must be non-negative")
        if self.method is Method.CLOSED_FORM and self.estimated_error != 0:
            raise ValueError("closed-form results carry no estimated error")


@dataclass(frozen=True)
class DerivedConstants:
    """Coupling constants and dimensionless groups of a configuration.

    ``kappa = g/(sqrt(8) ell)``, ``beta = delta/sigma``, ``gamma = kappa delta``
    and ``lam = kappa sigma``. Sharp states use the limiting values
    (``sigma -> 0`` or ``ell -> 0``), which may be ``inf``.
    """

    B: float
    g: float
    A_D: float
    B_D: float
    d: float
    kappa: float
    beta: float
    gamma: float
    lam: float

    def __post_init__(self):
        for name in ("kappa", "beta", "gamma", "lam"):
            if not getattr(self, name) >= 0:
                raise ValueError(f"{name} must be non-negative")
        finite = all(math.isfinite(v) for v in (self.beta, self.gamma, self.lam))
        if finite and self.lam > 0:
            if not math.isclose(self.gamma / self.lam, self.beta, rel_tol=1e-12):
                raise ValueError("inconsistent groups: gamma/lam != beta")


@dataclass(frozen=True)
class Configuration:
    params: OscillatorParams
    partition: Partition
    state: InitialState


# ---------------------------------------------------------------- validation

def check_symmetric(profile: Profile, T: float, label: str = "profile") -> None:
    """Raise :class:`AsymmetricFunction` unless ``f(t) = f(T - t)`` on a grid."""
    t = np.linspace(0.0, T, SYMMETRY_GRID)
    ft = np.asarray(profile(t, T), dtype=float)
    fr = np.asarray(profile(T - t, T), dtype=float)
    scale = float(np.max(np.abs(ft))) if ft.size else 0.0
    worst = float(np.max(np.abs(ft - fr)))
    if not np.all(np.isfinite(ft)):
        raise AsymmetricFunction(f"{label} is not finite on [0, T]")
    if worst > SYMMETRY_RTOL * scale:
        raise AsymmetricFunction(
            f"{label} is not symmetric about T/2 (max |f(t) - f(T-t)| = {worst:.3g})"
        )


def check_not_singular(omega: float, T: float, eps: float = EPS_SING) -> None:
    """Raise :class:`SingularPropagator` if ``omega T`` is within ``eps`` of ``n pi``, n >= 1."""
    theta = omega * T
    n = round(theta / math.pi)
    if n >= 1 and abs(theta - n * math.pi) < eps:
        raise SingularPropagator(
            f"omega*T = {theta!r} is within {eps:g} of {n}*pi; sin(omega T) vanishes"
        )


def _state_widths(state):
    if isinstance(state, SharpParticle):
        return [state.pointer]
    if isinstance(state, SharpPointer):
        return [state.particle]
    if isinstance(state, Product):
        return [state.particle, state.pointer]
    raise TypeError(f"unsupported initial state {type(state).__name__}")


def validate(params, partition=None, state=None) -> Configuration:
    """Check every invariant and return the configuration unchanged.

    Accepts either ``(params, partition, state)`` or a single
    :class:`Configuration`, so validation is idempotent.

    Raises
    ------
    SingularPropagator, AsymmetricFunction, NonPositive
    """
    if isinstance(params, Configuration):
        params, partition, state = params.params, params.partition, params.state
    if not isinstance(params, OscillatorParams) or not isinstance(partition, Partition):
        raise TypeError("validate expects OscillatorParams, Partition and an initial state")
    for value, what in ((params.m, "mass"), (params.T, "T"), (partition.delta, "delta")):
        if not value > 0:
            raise NonPositive(f"{what} must be positive")
    for spec in _state_widths(state):
        if not spec.halfwidth > 0:
            raise NonPositive("Gaussian half-widths must be positive")
    check_not_singular(params.omega, params.T, params.eps_sing)
    check_symmetric(params.coupling, params.T, "coupling f")
    check_symmetric(params.driving, params.T, "driving f_D")
    return Configuration(params, partition, state)


def dimensionless_groups(params, partition, state) -> DerivedConstants:
    """Compute ``B, g, A_D, B_D`` and the groups ``kappa, beta, gamma, lam``."""
    from . import propagator

    B = propagator.coupling_B(params.coupling, params.omega, params.T)
    g = propagator.coupling_g(params.coupling, params.omega, params.T, params.eps_sing)
    A_D, B_D = propagator.driving_integrals(params.driving, params.omega, params.T)
    delta = partition.delta
    if isinstance(state, SharpParticle):
        sigma, ell = 0.0, state.pointer.halfwidth
    elif isinstance(state, SharpPointer):
        sigma, ell = state.particle.halfwidth, 0.0
    else:
        sigma, ell = state.particle.halfwidth, state.pointer.halfwidth
    ag = abs(g)
    if ell > 0:
        kappa = ag / (math.sqrt(8.0) * ell)
    else:
        kappa = math.inf if ag > 0 else 0.0
    beta = delta / sigma if sigma > 0 else math.inf
    gamma = kappa * delta
    if math.isinf(kappa):
        lam = math.inf if sigma > 0 else 0.0
    else:
        lam = kappa * sigma
    return DerivedConstants(B, g, A_D, B_D, params.d, kappa, beta, gamma, lam)
