"""CLI subcommands, exit codes, deterministic outputs, config strictness."""

import numpy as np
import pytest

from geoperiod import ConfigError
from geoperiod.cli import main
from geoperiod.config import RunConfig, parse_config


def test_parse_config_defaults():
    cfg = parse_config()
    assert cfg.model_kind == "spaceform"
    assert cfg.model_curvature == -1.0
    assert cfg.jacobi_tol == 1e-6
    assert cfg.seed == 0


def test_parse_config_overrides():
    cfg = parse_config(
        text="""
[model]
kind = euclidean
dimension = 4

[tolerances]
slack = 1e-8

[grids]
lambda_grid = 16 32 64

[run]
seed = 7
quiet = true
"""
    )
    assert cfg.model_kind == "euclidean"
    assert cfg.model_dimension == 4
    assert cfg.slack == 1e-8
    assert cfg.lambda_grid == (16.0, 32.0, 64.0)
    assert cfg.seed == 7 and cfg.quiet is True


@pytest.mark.parametrize(
    "text,fragment",
    [
        ("[grids]\nsweep_densty = 3\n", "sweep_densty"),
        ("[typo_section]\nx = 1\n", "typo_section"),
        ("[tolerances]\njacobi_tol = -1e-6\n", "jacobi_tol"),
        ("[grids]\nlambda_grid = 64 32\n", "sorted"),
        ("[oscint]\nmatrix = 1 0; 1\n", "unequal"),
        ("[run]\nquiet = maybe\n", "quiet"),
        ("[model]\nr_bounds = 5 -5\n", "r_bounds"),
    ],
)
def test_parse_config_rejects(text, fragment):
    with pytest.raises(ConfigError, match=fragment):
        parse_config(text=text)


def test_unknown_key_reports_line(tmp_path, capsys):
    cfg = tmp_path / "bad.ini"
    cfg.write_text("[grids]\nlambda_grid = 16 32\nsweep_densty = 3\n")
    code = main(["oscint", "--config", str(cfg), "--out-dir", str(tmp_path)])
    assert code == 2
    err = capsys.readouterr().err
    assert "sweep_densty" in err and "line 3" in err


def test_curvature_roundtrip(tmp_path):
    d1, d2 = tmp_path / "a", tmp_path / "b"
    assert main(["curvature", "--out-dir", str(d1), "--quiet"]) == 0
    assert main(["curvature", "--out-dir", str(d2), "--quiet"]) == 0
    t1 = (d1 / "curvature.csv").read_bytes()
    assert t1 == (d2 / "curvature.csv").read_bytes()
    lines = t1.decode().splitlines()
    assert lines[0] == "r,horosphere,sphere,difference,bound,pass"
    assert len(lines) == 51
    assert all(line.endswith(",1") for line in lines[1:])


def test_check_hypersurface_exit_codes(tmp_path):
    assert main(["check-hypersurface", "--out-dir", str(tmp_path), "--quiet"]) == 0
    horo = tmp_path / "horo.ini"
    horo.write_text("[chart]\nkind = horosphere\n")
    code = main(
        ["check-hypersurface", "--config", str(horo), "--out-dir", str(tmp_path), "--quiet"]
    )
    assert code == 1
    header = (tmp_path / "check_hypersurface.csv").read_text().splitlines()[0]
    assert header.startswith("index,u0,u1,rank_plus,rank_minus,rank_sum,passes")


def test_oscint_routes_and_budget(tmp_path):
    assert main(["oscint", "--out-dir", str(tmp_path), "--quiet"]) == 0
    rows = (tmp_path / "oscint.csv").read_text().splitlines()
    assert rows[0] == "lambda,real,imag,magnitude,err_est,err_tol,nodes,converged"
    assert len(rows) == 7  # six dyadic frequencies
    ls = tmp_path / "ls.ini"
    ls.write_text("[oscint]\ndimension = 2\nphase = linear_square\n")
    assert main(["oscint", "--config", str(ls), "--out-dir", str(tmp_path), "--quiet"]) == 0
    tiny = tmp_path / "tiny.ini"
    tiny.write_text("[tolerances]\nnode_cap = 10\n")
    code = main(["oscint", "--config", str(tiny), "--out-dir", str(tmp_path), "--quiet"])
    assert code == 3


def test_kuznecov_sphere_target(tmp_path):
    cfg = tmp_path / "sph.ini"
    cfg.write_text("[kuznecov]\ntarget = sphere\n\n[grids]\ndegree_cap = 8\n")
    assert main(["kuznecov", "--config", str(cfg), "--out-dir", str(tmp_path), "--quiet"]) == 0
    rows = (tmp_path / "kuznecov.csv").read_text().splitlines()
    assert rows[0] == "index,eigenvalue,period_re,period_im,abs2,cumulative"
    assert len(rows) == 1 + 81  # all (l, m) with l <= 8
    # the constant mode integrates to sqrt(pi) exactly
    first = rows[1].split(",")
    assert first[0] == "0 0"
    assert float(first[2]) == pytest.approx(np.sqrt(np.pi), abs=1e-12)


def test_verify_all_summary(tmp_path):
    assert main(["verify-all", "--out-dir", str(tmp_path), "--quiet", "--seed", "0"]) == 0
    text = (tmp_path / "summary.txt").read_text()
    lines = text.splitlines()
    assert lines[-1] == "20/20 checks passed"
    assert all(line.startswith("PASS ") for line in lines[:-1])
