"""Flat ``key = value`` configuration with ``#`` comments.

Keys are case-insensitive and ``-``/``_`` are interchangeable. Numbers may
be simple arithmetic expressions in ``pi``, e.g. ``T = pi/2``.
"""
from __future__ import annotations

import ast
import math
import operator
from dataclasses import dataclass, fields, replace

from .errors import ConfigError
from .model import (
    GaussianSpec,
    Normalization,
    OscillatorParams,
    Partition,
    Product,
    SharpParticle,
    SharpPointer,
    profile_from_name,
)

__all__ = ["RunConfig", "parse_config_text", "load_config", "parse_number", "parse_grid"]

_OPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
    ast.USub: operator.neg,
    ast.UAdd: operator.pos,
}
_NAMES = {"pi": math.pi, "e": math.e, "inf": math.inf}


def _eval(node):
    if isinstance(node, ast.Expression):
        return _eval(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        return float(node.value)
    if isinstance(node, ast.Name) and node.id.lower() in _NAMES:
        return _NAMES[node.id.lower()]
    if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
        return _OPS[type(node.op)](_eval(node.left), _eval(node.right))
    if isinstance(node, ast.UnaryOp) and type(node.op) in _OPS:
        return _OPS[type(node.op)](_eval(node.operand))
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and len(node.args) == 1:
        fn = {"sqrt": math.sqrt}.get(node.func.id)
        if fn:
            return fn(_eval(node.args[0]))
    raise ValueError("unsupported expression")


def parse_number(text) -> float:
    """Parse a float or an arithmetic expression such as ``pi/2``."""
    if isinstance(text, (int, float)):
        return float(text)
    try:
        return float(text)
    except ValueError:
        pass
    try:
        return _eval(ast.parse(str(text).strip(), mode="eval"))
    except (SyntaxError, ValueError, ZeroDivisionError, TypeError) as exc:
        raise ConfigError(f"not a number: {text!r}") from exc


def _parse_bool(text) -> bool:
    if isinstance(text, bool):
        return text
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


def parse_grid(text):
    """Parse ``start:stop:step`` into a list of grid values.

    The values are ``start + i*step`` rounded to 12 decimals, for
    ``i = 0 .. round((stop - start)/step)``.

    Raises
    ------
    ConfigError
        Malformed text, ``step <= 0``, ``stop < start`` or a span that is
        not a whole number of steps.
    """
    parts = str(text).split(":")
    if len(parts) != 3:
        raise ConfigError(f"grid must look like start:stop:step, got {text!r}")
    start, stop, step = (parse_number(p) for p in parts)
    if not step > 0:
        raise ConfigError(f"grid step must be positive, got {step}")
    if stop < start:
        raise ConfigError("grid stop must not be below start")
    span = (stop - start) / step
    n = round(span)
    if abs(span - n) > 1e-9 * max(1.0, span):
        raise ConfigError("grid span is not a whole number of steps")
    return [round(start + i * step, 12) for i in range(n + 1)]


@dataclass(frozen=True)
class RunConfig:
    """Every setting understood by the command-line tool."""

    kind: str = "particle-factors"
    grid: str = "0:3:0.01"
    with_oracle: bool = False
    j_form: str = "appendix"
    tol: float | None = None
    out: str | None = None
    m: float = 1.0
    omega: float = 1.0
    T: float = math.pi / 2
    delta: float = 1.0
    origin: float = 0.0
    coupling: str = "const"
    driving: str = "zero"
    d: float = 0.0
    M_eff: float = 1.0
    allow_caustic_branch: bool = False
    state: str = "sharp-particle"
    x0: float = 0.0
    sigma: float = 0.1
    ell: float = 0.1
    particle_normalization: str = "L2Normalized"
    pointer_normalization: str = "L2Normalized"
    window: int = 3
    regime: str = "auto"

    def updated(self, values: dict) -> "RunConfig":
        """Return a copy with string or typed ``values`` applied."""
        known = {_key(f.name): f for f in fields(self)}
        kw = {}
        for raw, val in values.items():
            if val is None:
                continue
            f = known.get(_key(raw))
            if f is None:
                raise ConfigError(f"unknown configuration key {raw!r}")
            kw[f.name] = _coerce(f, val)
        return replace(self, **kw)

    def params(self) -> OscillatorParams:
        return OscillatorParams(
            self.m,
            self.omega,
            self.T,
            _profile(self.coupling),
            _profile(self.driving),
            self.d,
            self.M_eff,
            self.allow_caustic_branch,
        )

    def partition(self) -> Partition:
        return Partition(self.delta, self.origin)

    def initial_state(self):
        try:
            part = GaussianSpec(self.x0, self.sigma, Normalization.parse(self.particle_normalization))
            ptr = GaussianSpec(0.0, self.ell, Normalization.parse(self.pointer_normalization))
        except ValueError as exc:
            if type(exc) is ValueError:
                raise ConfigError(str(exc)) from exc
            raise
        kind = _key(self.state)
        if kind == "sharp_particle":
            return SharpParticle(self.x0, ptr)
        if kind == "sharp_pointer":
            return SharpPointer(part)
        if kind == "product":
            return Product(part, ptr)
        raise ConfigError(f"unknown state {self.state!r}")


def _key(name) -> str:
    low = str(name).strip().replace("-", "_").lower()
    return {"t": "T", "m_eff": "M_eff"}.get(low, low)


def _coerce(f, val):
    if f.type in ("float", "float | None"):
        return parse_number(val)
    if f.type == "int":
        x = parse_number(val)
        if x != int(x):
            raise ConfigError(f"{f.name} must be an integer")
        return int(x)
    if f.type == "bool":
        return _parse_bool(val)
    return str(val).strip()


def _profile(name):
    try:
        return profile_from_name(name)
    except (ValueError, OSError) as exc:
        raise ConfigError(str(exc)) from exc


def parse_config_text(text: str) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, val = (s.strip() for s in line.split("=", 1))
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        out[key] = val
    return out


def load_config(path, overrides=None) -> RunConfig:
    """Read ``path`` (if given), then apply ``overrides`` (e.g. CLI flags)."""
    cfg = RunConfig()
    if path:
        try:
            with open(path) as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        cfg = cfg.updated(parse_config_text(text))
    if overrides:
        cfg = cfg.updated(overrides)
    return cfg
