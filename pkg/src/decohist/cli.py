"""Command-line front end: ``sweep``, ``verify`` and ``prob``.

All tabular output is CSV with a one-line header and 17 significant digits.
Exit codes: 0 success, 1 configuration or validation error, 2 verification
failure, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import contextlib
import sys
import warnings

from .coarse_grain import interval_index
from .errors import ConfigError, NumericError, RegimeWarning, ValidationError
from .exact_decoherence import sharp_particle_functional, sharp_pointer_functional
from .gaussian_analysis import (
    narrow_particle_probability,
    narrow_pointer_probability,
    narrow_pointer_regime_ok,
    particle_factors,
    pointer_factors,
)
from .config import RunConfig, load_config, parse_grid
from .model import Product, SharpParticle, SharpPointer, dimensionless_groups, validate
from .oracle import oracle_factor
from .verification import run_checks

__all__ = ["main", "run_sweep", "run_verify", "run_probabilities", "fmt"]

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_VERIFY = 2
EXIT_NUMERIC = 3

SWEEP_KINDS = {
    "particle-factors": (("I", "J"), particle_factors),
    "pointer-factors": (("F", "G"), pointer_factors),
}


def fmt(x) -> str:
    """Format a float with 17 significant digits."""
    return format(float(x), ".17g")


def run_sweep(cfg: RunConfig):
    """CSV rows (header first) of closed-form factors on ``cfg.grid``."""
    if cfg.kind not in SWEEP_KINDS:
        raise ConfigError(f"unknown sweep kind {cfg.kind!r}; expected one of {sorted(SWEEP_KINDS)}")
    if cfg.j_form not in ("appendix", "main-text"):
        raise ConfigError(f"unknown j-form {cfg.j_form!r}")
    names, func = SWEEP_KINDS[cfg.kind]
    grid = parse_grid(cfg.grid)
    header = ["arg", *names]
    if cfg.with_oracle:
        header += [f"{n}_oracle" for n in names] + [f"d{n}" for n in names]
    rows = [",".join(header)]
    for arg in grid:
        vals = func(arg, cfg.j_form) if cfg.kind == "particle-factors" else func(arg)
        cols = [arg, *vals]
        if cfg.with_oracle:
            orc = [oracle_factor(n, arg) for n in names]
            cols += orc + [abs(o - v) for o, v in zip(orc, vals)]
        rows.append(",".join(fmt(c) for c in cols))
    return rows


def run_verify(cfg: RunConfig, stream=None):
    """Run the verification suite, print one line per check, return the exit code."""
    stream = stream or sys.stdout
    checks = run_checks(tol=cfg.tol, j_form=cfg.j_form)
    print("check,expected,got,delta,tolerance,status", file=stream)
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        print(f"{c.name},{fmt(c.expected)},{fmt(c.got)},{c.delta:.3e},{c.tolerance:.1e},{status}", file=stream)
    failed = sum(not c.passed for c in checks)
    print(f"# {len(checks) - failed}/{len(checks)} checks passed", file=stream)
    return EXIT_OK if failed == 0 else EXIT_VERIFY


def run_probabilities(cfg: RunConfig):
    """CSV rows ``alpha,p,regime,valid`` for classes around the state's centre."""
    params, partition, state = cfg.params(), cfg.partition(), cfg.initial_state()
    validate(params, partition, state)
    if cfg.window < 0:
        raise ConfigError("window must be non-negative")
    centre = interval_index(cfg.x0, partition)
    alphas = range(centre - cfg.window, centre + cfg.window + 1)
    rows = ["alpha,p,regime,valid"]
    if isinstance(state, SharpParticle):
        ps = [sharp_particle_functional(a, a, params, partition).total for a in alphas]
        return rows + [f"{a},{fmt(p)},exact,true" for a, p in zip(alphas, ps)]
    if isinstance(state, SharpPointer):
        ps = [sharp_pointer_functional(a, a, params, partition).total for a in alphas]
        return rows + [f"{a},{fmt(p)},exact,true" for a, p in zip(alphas, ps)]
    assert isinstance(state, Product)
    regime = cfg.regime
    if regime == "auto":
        groups = dimensionless_groups(params, partition, state)
        regime = "narrow-particle" if groups.lam**2 < 1 else "narrow-pointer"
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        if regime == "narrow-particle":
            b = narrow_particle_probability(
                params,
                partition,
                cfg.sigma,
                cfg.ell,
                cfg.particle_normalization,
                cfg.pointer_normalization,
            )
            p, valid = b.total, b.valid
        elif regime == "narrow-pointer":
            p = narrow_pointer_probability(params, partition, cfg.ell, cfg.pointer_normalization)
            groups = dimensionless_groups(params, partition, state)
            valid = narrow_pointer_regime_ok(groups.gamma, cfg.ell, cfg.delta)
        else:
            raise ConfigError(f"unknown regime {cfg.regime!r}")
    flag = "true" if valid else "false"
    return rows + [f"{a},{fmt(p)},{regime},{flag}" for a in alphas]


def _parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value configuration file")
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--tol", help="override every verification tolerance")
    common.add_argument("--j-form", choices=["appendix", "main-text"], dest="j_form")

    p = argparse.ArgumentParser(prog="decohist", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    sw = sub.add_parser("sweep", parents=[common], help="tabulate I,J or F,G on a grid")
    sw.add_argument("--kind", choices=sorted(SWEEP_KINDS))
    sw.add_argument("--grid", help="start:stop:step")
    sw.add_argument("--with-oracle", action="store_const", const="true", dest="with_oracle")

    sub.add_parser("verify", parents=[common], help="oracle vs closed-form checks")

    pr = sub.add_parser("prob", parents=[common], help="class probabilities")
    for name in (
        "m", "omega", "T", "delta", "origin", "coupling", "driving", "d", "state", "x0",
        "sigma", "ell", "particle-normalization", "pointer-normalization", "window", "regime",
    ):
        pr.add_argument(f"--{name}", dest=name.replace("-", "_"))
    pr.add_argument(
        "--allow-caustic-branch", action="store_const", const="true", dest="allow_caustic_branch"
    )
    return p


@contextlib.contextmanager
def _output(path):
    if path:
        with open(path, "w", newline="") as fh:
            yield fh
    else:
        yield sys.stdout


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    overrides = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    try:
        cfg = load_config(args.config, overrides)
        if args.command == "sweep":
            rows = run_sweep(cfg)
        elif args.command == "prob":
            rows = run_probabilities(cfg)
        else:
            with _output(cfg.out) as fh:
                return run_verify(cfg, fh)
        with _output(cfg.out) as fh:
            fh.write("\n".join(rows) + "\n")
        return EXIT_OK
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
