import csv
import math
import warnings

import numpy as np
import pytest

from noncredible.bench import ExperimentConfig, build_config, fit_regret_slope, read_config_file, run_experiment, verify_lower_bound
from noncredible.bench.cli import main
from noncredible.bench.lower_bound import closed_form_kl
from noncredible.bench.runner import SUMMARY_FIELDS, TRACE_FIELDS, read_summary
from noncredible.env import ConfigurationError, FeedbackMode


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


# -- config ----------------------------------------------------------------


def test_config_file_and_overrides(tmp_path):
    f = tmp_path / "exp.cfg"
    f.write_text("# sweep\nstrategy = ucb\nalpha0 = 0.0\nT = 100, 200\nreps = 3\nseed = 9  # root\n")
    raw = read_config_file(f)
    cfg = build_config(raw, {"reps": 5, "dist": "example_bad", "seed": None})
    assert cfg.strategy == "ucb"
    assert cfg.horizons == (100, 200)
    assert cfg.reps == 5
    assert cfg.seed == 9
    assert cfg.dist == "example_bad"


def test_exp3_defaults_to_full_feedback():
    assert build_config({"strategy": "exp3", "alpha0": "0.5"}).feedback is FeedbackMode.FULL


@pytest.mark.parametrize(
    "raw",
    [
        {"strategy": "ucb", "alpha0": "0", "T": "200,100"},
        {"strategy": "ucb", "alpha0": "0", "T": "100,100"},
        {"strategy": "ucb", "alpha0": "0", "reps": "0"},
        {"strategy": "exp3", "alpha0": "0.5", "feedback": "bandit"},
        {"strategy": "elimination", "alpha0": "0"},
        {"strategy": "magic", "alpha0": "0.5"},
        {"strategy": "ucb", "alpha0": "1.5"},
        {"strategy": "ucb", "alpha0": "0", "dist": "cauchy"},
        {"strategy": "ucb", "alpha0": "0", "colour": "red"},
        {"strategy": "ucb"},
    ],
)
def test_config_rejects(raw):
    with pytest.raises(ConfigurationError):
        build_config(raw)


def test_malformed_config_line(tmp_path):
    f = tmp_path / "bad.cfg"
    f.write_text("strategy ucb\n")
    with pytest.raises(ConfigurationError):
        read_config_file(f)


def test_auto_grid_sizes():
    assert ExperimentConfig("ucb", 0.0).grid_size(4096) == 16
    assert ExperimentConfig("elimination", 0.5).grid_size(4096) == 64
    assert ExperimentConfig("exp3", 0.5, feedback=FeedbackMode.FULL).n_predictors(4096) == 16
    assert ExperimentConfig("ucb", 0.0, K=7).grid_size(4096) == 7


# -- runner ----------------------------------------------------------------


def test_truthful_credible_sweep(tmp_path):
    cfg = ExperimentConfig("truthful", 1.0, horizons=(1000,), reps=5, out=str(tmp_path))
    rows = run_experiment(cfg)
    assert all(r.mean_regret <= 1e-6 for r in rows)
    assert rows[0].reps == 5


def test_identical_configs_give_identical_files(tmp_path):
    cfg = ExperimentConfig("ucb", 0.2, horizons=(300,), reps=1, traces=True)
    run_experiment(cfg, out=str(tmp_path / "a"))
    run_experiment(cfg, out=str(tmp_path / "b"))
    for name in ("summary.csv", "traces.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_worker_pool_does_not_change_output(tmp_path):
    base = dict(horizons=(100, 250), reps=3, traces=True)
    run_experiment(ExperimentConfig("bandit_unknown", 0.5, workers=1, **base), out=str(tmp_path / "serial"))
    run_experiment(ExperimentConfig("bandit_unknown", 0.5, workers=3, **base), out=str(tmp_path / "pool"))
    for name in ("summary.csv", "traces.csv"):
        assert (tmp_path / "serial" / name).read_bytes() == (tmp_path / "pool" / name).read_bytes()


def test_empty_sweep_writes_header_only(tmp_path):
    rows = run_experiment(ExperimentConfig("ucb", 0.0, horizons=()), out=str(tmp_path))
    assert rows == []
    assert read_rows(tmp_path / "summary.csv") == [list(SUMMARY_FIELDS)]


def test_summary_round_trips_against_traces(tmp_path):
    cfg = ExperimentConfig("exp3", 0.5, feedback=FeedbackMode.FULL, horizons=(100, 200, 400), reps=3, traces=True, seed=4)
    rows = run_experiment(cfg, out=str(tmp_path))
    header, *body = read_rows(tmp_path / "traces.csv")
    assert header == list(TRACE_FIELDS)
    per_run = {}
    for rec in body:
        per_run.setdefault(rec[0], []).append(float(rec[9]))
    for row in rows:
        totals = [math.fsum(v) for k, v in per_run.items() if k.startswith(f"T{row.T}_")]
        assert len(totals) == row.reps
        assert np.mean(totals) == pytest.approx(row.mean_regret, abs=1e-9)
        assert np.std(totals) == pytest.approx(row.std_regret, abs=1e-9)
    # the last cumulative entry of each run equals its summed increments
    last = {}
    for rec in body:
        last[rec[0]] = float(rec[10])
    for k, v in per_run.items():
        assert last[k] == pytest.approx(math.fsum(v), abs=1e-9)


def test_summary_rows_valid_and_ordered(tmp_path):
    cfg = ExperimentConfig("known_g", 0.5, horizons=(50, 100, 200), reps=2)
    run_experiment(cfg, out=str(tmp_path))
    rows = read_summary(tmp_path / "summary.csv")
    assert [int(r["T"]) for r in rows] == [50, 100, 200]
    for r in rows:
        assert float(r["mean_regret"]) >= -1e-6 and float(r["std_regret"]) >= 0


def test_headers_stable_across_strategies(tmp_path):
    heads = set()
    for i, cfg in enumerate([ExperimentConfig("ucb", 0.0, horizons=(50,)), ExperimentConfig("elimination", 0.5, horizons=(50,))]):
        run_experiment(cfg, out=str(tmp_path / str(i)))
        heads.add(tuple(read_rows(tmp_path / str(i) / "summary.csv")[0]))
    assert heads == {SUMMARY_FIELDS}


def test_seeds_differ_across_runs(tmp_path):
    cfg = ExperimentConfig("truthful", 0.5, horizons=(20,), reps=3, traces=True)
    run_experiment(cfg, out=str(tmp_path))
    _, *body = read_rows(tmp_path / "traces.csv")
    firsts = {rec[0]: rec[2] for rec in body if rec[1] == "1"}
    assert len(set(firsts.values())) == 3


def test_unwritable_output(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(OSError):
        run_experiment(ExperimentConfig("ucb", 0.0, horizons=(10,)), out=str(blocker / "sub"))


# -- slope -----------------------------------------------------------------


def test_slope_exact_power_laws():
    Ts = [2.0**e for e in range(10, 17)]
    beta, _ = fit_regret_slope([(T, T**0.5) for T in Ts])
    assert beta == pytest.approx(0.5, abs=1e-12)
    beta, c = fit_regret_slope([(T, 7 * T ** (2 / 3)) for T in Ts])
    assert beta == pytest.approx(2 / 3, abs=1e-12)
    assert c == pytest.approx(math.log(7), abs=1e-10)
    beta, _ = fit_regret_slope([(T, 3.0) for T in Ts])
    assert beta == pytest.approx(0.0, abs=1e-12)


def test_slope_drops_nonpositive_points():
    pts = [(10, 10.0), (100, 100.0), (1000, 0.0), (10_000, 10_000.0)]
    with pytest.warns(RuntimeWarning):
        beta, _ = fit_regret_slope(pts)
    assert beta == pytest.approx(1.0)


def test_slope_needs_three_points():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        with pytest.raises(ValueError):
            fit_regret_slope([(10, 1.0), (100, -1.0), (1000, 3.0)])
    with pytest.raises(ValueError):
        fit_regret_slope([(10, 1.0), (100, 2.0)])


# -- lower bound -----------------------------------------------------------


def test_lower_bound_at_proof_delta():
    rep = verify_lower_bound(0.5, 1 / (4 * math.sqrt(1e4)))
    assert rep.delta == pytest.approx(0.0025)
    assert rep.passed, rep.checks


def test_lower_bound_large_delta():
    assert verify_lower_bound(0.9, 0.2).passed


def test_lower_bound_kl_closed_form():
    rep = verify_lower_bound(0.3, 0.1, grid_n=1000)
    assert rep.kl == pytest.approx(closed_form_kl(0.1), rel=1e-12)


@pytest.mark.parametrize("alpha,delta", [(0.5, 0.0), (0.5, 0.25), (0.0, 0.1), (1.0, 0.1)])
def test_lower_bound_rejects(alpha, delta):
    with pytest.raises(ValueError):
        verify_lower_bound(alpha, delta)


# -- CLI -------------------------------------------------------------------


def test_cli_run_and_slope(tmp_path, capsys):
    out = tmp_path / "o"
    assert main(["run", "--strategy", "ucb", "--alpha0", "0", "--T", "200,400,800", "--reps", "2", "--out", str(out)]) == 0
    assert (out / "summary.csv").exists()
    assert main(["slope", str(out / "summary.csv")]) == 0
    assert "beta=" in capsys.readouterr().out
    assert main(["slope", str(out / "summary.csv"), "--min", "5"]) == 1


def test_cli_config_file_with_flag_override(tmp_path):
    f = tmp_path / "c.cfg"
    f.write_text("strategy = truthful\nalpha0 = 1\nT = 100\nreps = 2\n")
    out = tmp_path / "o"
    assert main(["run", "--config", str(f), "--reps", "4", "--out", str(out)]) == 0
    assert read_summary(out / "summary.csv")[0]["reps"] == "4"


def test_cli_rejects_bad_pairing(tmp_path, capsys):
    code = main(["run", "--strategy", "exp3", "--alpha0", "0.5", "--feedback", "bandit", "--out", str(tmp_path)])
    assert code != 0
    assert "full feedback" in capsys.readouterr().err


def test_cli_verify_lb(capsys):
    assert main(["verify-lb", "--alpha", "0.5", "--delta", "0.0025"]) == 0
    assert capsys.readouterr().out.count("PASS") == 3
    assert main(["verify-lb", "--alpha", "0.5", "--delta", "0"]) != 0


def test_cli_oracle(capsys):
    assert main(["oracle", "--dist", "example_bad", "--alpha", "0.5", "--v", "1"]) == 0
    v, a, b = capsys.readouterr().out.strip().split(",")
    assert float(b) == pytest.approx(5 / 9, abs=1e-3)
