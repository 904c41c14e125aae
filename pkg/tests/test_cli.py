"""Tests for the CLI entrypoint."""

import csv
import io
from unittest.mock import patch

import numpy as np
import pytest
from click.testing import CliRunner

from padestep.cli import main
from padestep.errors import DivergenceError


@pytest.fixture
def runner():
    return CliRunner()


def _invoke(runner, tmp_path, args):
    out = tmp_path / "out.csv"
    result = runner.invoke(main, [*args, "--out", str(out), "--quiet"])
    assert result.exit_code == 0, result.output
    with out.open(newline="") as fh:
        return list(csv.DictReader(fh))


def _column(rows, name):
    return np.array([float(row[name]) for row in rows])


def test_spectral_default_grid(runner, tmp_path):
    rows = _invoke(runner, tmp_path, ["spectral"])
    assert len(rows) == 400
    assert float(rows[0]["x"]) == pytest.approx(1e-3)
    assert float(rows[-1]["rho"]) == pytest.approx(0.8, abs=1e-2)


def test_spectral_diagonal_scheme_is_non_dissipative(runner, tmp_path):
    rows = _invoke(runner, tmp_path, ["spectral", "--M", "3", "--rho-inf", "1", "--points", "50"])
    np.testing.assert_allclose(_column(rows, "rho"), 1.0, atol=1e-10)


def test_spectral_hht_columns(runner, tmp_path):
    rows = _invoke(runner, tmp_path, ["spectral", "--hht-alpha", "-0.3", "--points", "40"])
    assert "hht_rho" in rows[0]
    assert float(rows[-1]["hht_rho"]) == pytest.approx(0.7 / 1.3, abs=1e-2)


def test_spectral_stdout_when_quiet(runner):
    result = runner.invoke(main, ["spectral", "--points", "5", "--quiet"])
    assert result.exit_code == 0
    lines = result.output.strip().splitlines()
    assert lines[0] == "x,rho,phase,period_error,damping_ratio"
    assert len(lines) == 6


def test_spectral_prints_summary(runner, tmp_path):
    result = runner.invoke(main, ["spectral", "--points", "5", "--out", str(tmp_path / "s.csv")])
    assert result.exit_code == 0
    assert "Spectral sweep" in result.output


@pytest.mark.parametrize(
    "args",
    [
        ["spectral", "--x-min", "10", "--x-max", "1"],
        ["spectral", "--hht-alpha", "-0.5"],
        ["spectral", "--rho-inf", "1.5"],
    ],
)
def test_spectral_rejects_bad_parameters(runner, args):
    result = runner.invoke(main, [*args, "--quiet"])
    assert result.exit_code == 2


def test_simulate_rod_with_cfl(runner, tmp_path):
    rows = _invoke(
        runner,
        tmp_path,
        ["simulate", "--elements", "200", "--M", "2", "--rho-inf", "0.8", "--cfl", "20"],
    )
    # two transits at 20 elements per step
    assert len(rows) == 20
    assert {"mid_u", "mid_v", "mid_a", "tip_v", "mid_v_ref", "tip_v_ref"} <= set(rows[0])


def test_simulate_three_dof(runner, tmp_path):
    rows = _invoke(runner, tmp_path, ["simulate", "--problem", "three_dof", "--duration", "1.4"])
    assert len(rows) == 10
    assert float(rows[0]["t"]) == pytest.approx(0.14)
    assert float(rows[-1]["t"]) == pytest.approx(1.4)
    assert "u2_u_ref" in rows[0]


def test_simulate_probe_selection_and_no_reference(runner, tmp_path):
    rows = _invoke(
        runner,
        tmp_path,
        ["simulate", "--elements", "20", "--probe", "tip", "--no-reference"],
    )
    assert list(rows[0]) == ["t", "tip_u", "tip_v", "tip_a"]


@pytest.mark.parametrize(
    "args",
    [
        ["simulate", "--elements", "20", "--dt", "1e-4", "--cfl", "5"],
        ["simulate", "--problem", "three_dof", "--cfl", "5"],
        ["simulate", "--elements", "20", "--probe", "nowhere"],
        ["simulate", "--elements", "20", "--pf", "9"],
        ["simulate", "--elements", "20", "--duration", "0"],
        ["simulate", "--problem", "pendulum"],
    ],
)
def test_simulate_usage_errors(runner, args):
    result = runner.invoke(main, [*args, "--quiet"])
    assert result.exit_code == 2


def test_simulate_divergence_exit_code(runner):
    with patch("padestep.cli.integrate", side_effect=DivergenceError("boom", 7)):
        result = runner.invoke(main, ["simulate", "--problem", "sdof", "--quiet"])
    assert result.exit_code == 3
    assert "step 7" in result.output


@pytest.mark.parametrize(
    ("order", "rho_inf", "expected"),
    [(1, "1", 2.0), (2, "1", 4.0)],
)
def test_convergence_order(runner, tmp_path, order, rho_inf, expected):
    rows = _invoke(
        runner,
        tmp_path,
        ["convergence", "--M", str(order), "--rho-inf", rho_inf, "--levels", "4"],
    )
    assert len(rows) == 4
    assert rows[0]["order_estimate"] == ""
    assert float(rows[-1]["order_estimate"]) == pytest.approx(expected, abs=0.25)


def test_convergence_dissipative_scheme_loses_one_order(runner, tmp_path):
    rows = _invoke(runner, tmp_path, ["convergence", "--M", "2", "--rho-inf", "0.8"])
    assert 2.7 < float(rows[-1]["order_estimate"]) < 3.6


def test_compare_sdof_on_shared_grid(runner, tmp_path):
    rows = _invoke(
        runner,
        tmp_path,
        [
            "compare",
            "--problem",
            "sdof",
            "--rho-inf",
            "1",
            "--dt",
            "0.01",
            "--duration",
            "0.1",
            "--hht-dt",
            "0.01",
        ],
    )
    assert len(rows) == 10
    assert all(row["exact_match"] == "1" for row in rows)
    pade_u, hht_u = _column(rows, "x_u"), _column(rows, "x_hht_u")
    np.testing.assert_allclose(pade_u, hht_u, rtol=0, atol=2e-2 * np.max(np.abs(pade_u)))


def test_compare_rod_aligns_on_coarse_grid(runner, tmp_path):
    rows = _invoke(runner, tmp_path, ["compare", "--elements", "50"])
    assert len(rows) == 10
    assert all(row["exact_match"] == "1" for row in rows)
    assert "tip_hht_v" in rows[0]


def test_compare_rejects_bad_alpha(runner):
    result = runner.invoke(main, ["compare", "--problem", "sdof", "--hht-alpha", "0.2", "--quiet"])
    assert result.exit_code == 2


def test_config_file_supplies_defaults(runner, tmp_path):
    config = tmp_path / "run.toml"
    config.write_text("M = 1\npoints = 12\nrho-inf = 1.0\n")
    rows = _invoke(runner, tmp_path, ["spectral", "--config", str(config)])
    assert len(rows) == 12
    np.testing.assert_allclose(_column(rows, "rho"), 1.0, atol=1e-12)


def test_flags_override_config_file(runner, tmp_path):
    config = tmp_path / "run.toml"
    config.write_text("points = 12\n")
    rows = _invoke(runner, tmp_path, ["spectral", "--config", str(config), "--points", "7"])
    assert len(rows) == 7


def test_config_file_unknown_key(runner, tmp_path):
    config = tmp_path / "run.toml"
    config.write_text("stiffness = 3\n")
    result = runner.invoke(main, ["spectral", "--config", str(config), "--quiet"])
    assert result.exit_code == 2
    assert "unknown key" in result.output


def test_summary_alongside_csv_file(runner, tmp_path):
    out = tmp_path / "conv.csv"
    result = runner.invoke(main, ["convergence", "--levels", "2", "--out", str(out)])
    assert result.exit_code == 0
    assert "Convergence" in result.output
    assert out.read_text().startswith("dt,error,order_estimate")


def test_help_lists_commands(runner):
    result = runner.invoke(main, ["--help"])
    assert result.exit_code == 0
    for name in ("spectral", "simulate", "convergence", "compare"):
        assert name in result.output


def test_read_back_stdout_csv(runner):
    result = runner.invoke(main, ["convergence", "--levels", "2", "--quiet"])
    rows = list(csv.DictReader(io.StringIO(result.output)))
    assert [float(r["dt"]) for r in rows] == [0.05, 0.025]


@pytest.mark.parametrize("command", ["simulate", "compare"])
def test_dt_and_cfl_rejected_before_building(runner, mocker, command):
    build = mocker.patch("padestep.cli.build_model")
    result = runner.invoke(main, [command, "--dt", "1e-4", "--cfl", "5", "--quiet"])
    assert result.exit_code == 2
    assert "either --dt or --cfl" in result.output
    build.assert_not_called()


def test_diagonal_sweep_writes_full_width_ones(runner, tmp_path):
    rows = _invoke(runner, tmp_path, ["spectral", "--M", "2", "--rho-inf", "1", "--points", "30"])
    assert {row["rho"] for row in rows} == {"1.000000000000"}


@pytest.mark.parametrize(
    "args",
    [
        ["spectral", "--M", "3", "--rho-inf", "0.5", "--hht-alpha", "-0.3", "--points", "25"],
        ["simulate", "--elements", "20", "--cfl", "5"],
        ["convergence", "--levels", "3"],
    ],
)
def test_repeated_runs_write_identical_bytes(runner, tmp_path, args):
    first, second = tmp_path / "first.csv", tmp_path / "second.csv"
    for out in (first, second):
        result = runner.invoke(main, [*args, "--out", str(out), "--quiet"])
        assert result.exit_code == 0, result.output
    assert first.read_bytes() == second.read_bytes()
