"""Sweep runner: horizons x replications, pseudo-regret, CSV output."""

from __future__ import annotations

import csv
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from ..clairvoyant import pseudo_regret
from ..env import EnvConfig, EpisodeTrace, check_compatible, episode_streams, run_episode
from ..strategies import BanditUnknownBoth, Elimination, Exp3Ensemble, KnownG, Strategy, Truthful, UcbCrossLearning
from .config import ExperimentConfig

log = logging.getLogger(__name__)

SUMMARY_FIELDS = ("strategy", "alpha0", "dist", "T", "reps", "mean_regret", "std_regret")
TRACE_FIELDS = ("run_id", "t", "v", "b", "d", "x", "p", "c", "r", "instant_regret", "cum_regret")


def fmt(x) -> str:
    """17 significant digits so floats round-trip exactly."""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return "%.17g" % float(x)


@dataclass(frozen=True)
class SummaryRow:
    strategy: str
    alpha0: float
    dist: str
    T: int
    reps: int
    mean_regret: float
    std_regret: float

    def as_strings(self) -> List[str]:
        return [self.strategy, fmt(self.alpha0), self.dist, str(self.T), str(self.reps), fmt(self.mean_regret), fmt(self.std_regret)]


@dataclass
class RunResult:
    T: int
    rep: int
    trace: EpisodeTrace
    instant: np.ndarray
    cumulative: np.ndarray

    @property
    def run_id(self) -> str:
        return f"T{self.T}_r{self.rep}"

    @property
    def total(self) -> float:
        return float(self.cumulative[-1]) if self.cumulative.size else 0.0


def run_seed(root: int, T: int, rep: int) -> int:
    """Independent per-run seed derived from (root, T, rep)."""
    return int(np.random.SeedSequence([root, T, rep]).generate_state(1, dtype=np.uint32)[0])


def make_strategy(config: ExperimentConfig, T: int, rng: np.random.Generator) -> Strategy:
    K, M = config.grid_size(T), config.n_predictors(T)
    name = config.strategy
    if name == "truthful":
        return Truthful()
    if name == "ucb":
        return UcbCrossLearning(T, K)
    if name == "elimination":
        return Elimination(config.alpha0, T, K, M, delta=config.delta)
    if name == "known_g":
        return KnownG(config.competing(), T, delta=config.delta)
    if name == "bandit_unknown":
        return BanditUnknownBoth(T, K, alpha_low=config.alpha_low, estimator=config.estimator)
    if name == "exp3":
        return Exp3Ensemble(T, K, M, eta=config.eta, rng=rng)
    raise ValueError(f"unknown strategy {name!r}")


def run_one(config: ExperimentConfig, T: int, rep: int) -> RunResult:
    seed = run_seed(config.seed, T, rep)
    strategy = make_strategy(config, T, episode_streams(seed)[2])
    env = EnvConfig(
        alpha0=config.alpha0,
        competing_dist=config.competing(),
        horizon=T,
        value_dist=config.values(),
        feedback_mode=config.feedback,
        seed=seed,
    )
    trace = run_episode(strategy, env)
    reg = pseudo_regret(trace, config.alpha0, env.competing_dist, config.regret_grid)
    return RunResult(T, rep, trace, reg.per_round, reg.cumulative)


def _run_job(args):
    config, T, rep = args
    return run_one(config, T, rep)


def run_all(config: ExperimentConfig) -> List[RunResult]:
    """Every (T, rep) episode, ordered by (T, rep) whatever the completion order."""
    jobs = [(config, T, rep) for T in config.horizons for rep in range(config.reps)]
    if config.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(_run_job, jobs))
    else:
        results = [_run_job(job) for job in jobs]
    return sorted(results, key=lambda res: (res.T, res.rep))


def summarise(config: ExperimentConfig, results: Sequence[RunResult]) -> List[SummaryRow]:
    rows = []
    for T in config.horizons:
        totals = np.array([res.total for res in results if res.T == T])
        rows.append(
            SummaryRow(config.strategy, config.alpha0, config.dist, T, totals.size, float(totals.mean()), float(totals.std()))
        )
    return rows


def write_summary(path: Path, rows: Sequence[SummaryRow]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SUMMARY_FIELDS)
        for row in rows:
            writer.writerow(row.as_strings())


def write_traces(path: Path, results: Sequence[RunResult]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TRACE_FIELDS)
        for res in results:
            tr = res.trace
            for i in range(len(tr)):
                writer.writerow(
                    [res.run_id, i + 1, fmt(tr.v[i]), fmt(tr.b[i]), fmt(tr.d[i]), int(tr.x[i]), fmt(tr.p[i]),
                     fmt(tr.c[i]), fmt(tr.r[i]), fmt(res.instant[i]), fmt(res.cumulative[i])]
                )


def prepare_output(out) -> Path:
    path = Path(out)
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {path}: {exc}") from exc
    probe = path / ".write_test"
    try:
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise OSError(f"output directory {path} is not writable: {exc}") from exc
    return path


def run_experiment(config: ExperimentConfig, out: Optional[str] = None) -> List[SummaryRow]:
    """Run the sweep and write ``summary.csv`` (and ``traces.csv`` when asked).

    All writes happen in this process after the episodes finish, so the files
    are identical for identical configs whatever the worker count.
    """
    # fail on a bad pairing before any episode runs
    for T in config.horizons[:1]:
        check_compatible(make_strategy(config, T, np.random.default_rng(0)), config.feedback)
    path = prepare_output(out if out is not None else config.out)
    results = run_all(config)
    rows = summarise(config, results)
    for row in rows:
        log.info("%s T=%d mean=%.4g std=%.4g", row.strategy, row.T, row.mean_regret, row.std_regret)
    write_summary(path / "summary.csv", rows)
    if config.traces:
        write_traces(path / "traces.csv", results)
    return rows


def read_summary(path) -> List[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))
