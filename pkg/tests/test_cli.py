import functools
import io
import math

import numpy as np
import pytest

from decohist import cli
from decohist.config import RunConfig
from decohist.verification import run_checks


def _rows(capsys, argv):
    code = cli.main(argv)
    out = capsys.readouterr().out
    return code, out.splitlines()


def _row_at(rows, arg):
    for line in rows[1:]:
        vals = [float(v) for v in line.split(",")]
        if vals[0] == arg:
            return vals
    raise KeyError(arg)


def test_particle_sweep(capsys):
    code, rows = _rows(capsys, ["sweep", "--kind", "particle-factors", "--grid", "0:3:0.01"])
    assert code == cli.EXIT_OK
    assert rows[0] == "arg,I,J"
    assert len(rows) == 302
    np.testing.assert_allclose(_row_at(rows, 1.72)[1:], [1.25, 2.49], atol=0.01)
    assert _row_at(rows, 0.0)[1:] == [0.0, 0.0]


def test_pointer_sweep(capsys):
    code, rows = _rows(capsys, ["sweep", "--kind", "pointer-factors", "--grid", "0:3:0.01"])
    assert code == cli.EXIT_OK
    assert rows[0] == "arg,F,G"
    np.testing.assert_allclose(_row_at(rows, 1.5)[1:], [0.50, 0.33], atol=0.01)


def test_sweep_with_oracle(capsys):
    code, rows = _rows(capsys, ["sweep", "--kind", "pointer-factors", "--grid", "0.5:1.5:0.5", "--with-oracle"])
    assert code == cli.EXIT_OK
    assert rows[0] == "arg,F,G,F_oracle,G_oracle,dF,dG"
    for line in rows[1:]:
        vals = [float(v) for v in line.split(",")]
        assert max(vals[5:]) < 1e-8


def test_seventeen_digit_output():
    assert cli.fmt(0.1) == "0.10000000000000001"
    assert float(cli.fmt(math.pi)) == math.pi


@pytest.mark.parametrize("grid", ["0:3:0", "0:3:-0.1", "3:0:0.1", "a:b:c", "0:1"])
def test_bad_grid_exits_with_config_error(capsys, grid):
    code = cli.main(["sweep", "--grid", grid])
    assert code == cli.EXIT_CONFIG
    assert "error" in capsys.readouterr().err


def test_config_file_and_flag_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# pointer sweep\nkind = pointer-factors\ngrid = 0:1:0.5\n")
    code, rows = _rows(capsys, ["sweep", "--config", str(cfg)])
    assert code == 0 and rows[0] == "arg,F,G" and len(rows) == 4
    code, rows = _rows(capsys, ["sweep", "--config", str(cfg), "--grid", "0:1:0.25"])
    assert code == 0 and len(rows) == 6


def test_unknown_config_key(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("colour = blue\n")
    assert cli.main(["sweep", "--config", str(cfg)]) == cli.EXIT_CONFIG


def test_out_file_is_byte_identical(tmp_path):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        assert cli.main(["sweep", "--grid", "0:3:0.01", "--out", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert paths[0].read_bytes().count(b"\n") == 302


PROB_BASE = ["prob", "--m", "1", "--omega", "1", "--T", "pi/2", "--delta", "0.1", "--window", "3"]


@pytest.mark.parametrize(
    "extra, expected",
    [
        (["--state", "sharp-particle"], 0.0318310),
        (["--state", "sharp-pointer"], 0.05),
    ],
)
def test_sharp_probability_rows(capsys, extra, expected):
    code, rows = _rows(capsys, PROB_BASE + extra)
    assert code == 0
    assert rows[0] == "alpha,p,regime,valid"
    assert len(rows) == 8
    ps = {line.split(",")[1] for line in rows[1:]}
    assert len(ps) == 1
    np.testing.assert_allclose(float(ps.pop()), expected, rtol=1e-6)
    assert [int(line.split(",")[0]) for line in rows[1:]] == list(range(-3, 4))


def test_delta_limit_product_matches_sharp_pointer(capsys):
    _, sharp = _rows(capsys, PROB_BASE + ["--state", "sharp-pointer"])
    code, prod = _rows(
        capsys,
        PROB_BASE + ["--state", "product", "--sigma", "1", "--ell", "0.001", "--pointer-normalization", "DeltaLimit"],
    )
    assert code == 0
    assert [r.split(",")[:2] for r in prod] == [r.split(",")[:2] for r in sharp]
    assert all(r.split(",")[2] == "narrow-pointer" for r in prod[1:])


def test_narrow_particle_product_rows(capsys):
    code, rows = _rows(capsys, PROB_BASE + ["--state", "product", "--sigma", "0.01", "--ell", "0.5"])
    assert code == 0
    assert all(r.endswith("narrow-particle,true") for r in rows[1:])


def test_decoupled_pointer_is_an_error(capsys):
    code = cli.main(PROB_BASE + ["--state", "sharp-pointer", "--coupling", "zero"])
    assert code == cli.EXIT_CONFIG


@pytest.fixture(scope="module")
def default_report():
    buf = io.StringIO()
    code = cli.run_verify(RunConfig(), buf)
    return code, buf.getvalue().splitlines()


def test_verify_defaults_pass(default_report):
    code, lines = default_report
    assert code == cli.EXIT_OK
    assert lines[0] == "check,expected,got,delta,tolerance,status"
    assert all(line.endswith("PASS") for line in lines[1:-1])
    assert lines[-1] == f"# {len(lines) - 2}/{len(lines) - 2} checks passed"
    names = [line.split(",")[0] for line in lines[1:-1]]
    assert any(n.startswith("sum") for n in names)
    assert any(n.startswith("erf") for n in names)


@pytest.fixture
def fast_checks(monkeypatch):
    # the sum rule is covered by the default run; skip it to keep these quick
    monkeypatch.setattr(cli, "run_checks", functools.partial(run_checks, include_sum_rule=False))


def test_verify_tight_tolerance_fails(fast_checks, capsys):
    code = cli.main(["verify", "--tol", "1e-15"])
    out = capsys.readouterr().out
    assert code == cli.EXIT_VERIFY
    assert "FAIL" in out


def test_verify_main_text_j_fails_adjudication(fast_checks, capsys):
    code = cli.main(["verify", "--j-form", "main-text"])
    lines = capsys.readouterr().out.splitlines()
    assert code == cli.EXIT_VERIFY
    failed = [line.split(",")[0] for line in lines if line.endswith("FAIL")]
    assert "j-adjudication:main-text" in failed
    assert all(n.startswith(("factor:J(", "j-adjudication")) for n in failed)
