"""Repeated non-credible second-price auction environment.

The winner pays ``p = alpha0 * d + (1 - alpha0) * b``: alpha0 = 1 is an honest
second-price auction, alpha0 = 0 a first-price auction.  Ties go to our bidder.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Union

import numpy as np

from .distributions import Distribution, Uniform01


class ConfigurationError(ValueError):
    """Raised when a strategy and an environment cannot be paired."""


class FeedbackMode(str, Enum):
    BANDIT = "bandit"
    FULL = "full"


@dataclass(frozen=True)
class RoundOutcome:
    v: float
    b: float
    d: float
    x: int
    p: float
    c: float
    r: float


@dataclass(frozen=True)
class BanditFeedback:
    x: int
    c: float

    @property
    def cost(self) -> float:
        return self.c


@dataclass(frozen=True)
class FullFeedback:
    x: int
    p: float

    @property
    def cost(self) -> float:
        return self.x * self.p


Feedback = Union[BanditFeedback, FullFeedback]


def run_round(v: float, b: float, d: float, alpha0: float) -> RoundOutcome:
    x = 1 if b >= d else 0
    # the manipulated price is defined on every round; full feedback reveals it on losses too
    p = alpha0 * d + (1.0 - alpha0) * b
    c = x * p
    r = x * v - c
    return RoundOutcome(v=v, b=b, d=d, x=x, p=p, c=c, r=r)


def project_feedback(outcome: RoundOutcome, mode: FeedbackMode) -> Feedback:
    if FeedbackMode(mode) is FeedbackMode.FULL:
        return FullFeedback(outcome.x, outcome.p)
    return BanditFeedback(outcome.x, outcome.c)


@dataclass(frozen=True)
class EnvConfig:
    alpha0: float
    competing_dist: Distribution
    horizon: int
    value_dist: Distribution = field(default_factory=Uniform01)
    feedback_mode: FeedbackMode = FeedbackMode.BANDIT
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.alpha0 <= 1.0:
            raise ConfigurationError(f"alpha0 must lie in [0, 1], got {self.alpha0}")
        if self.horizon < 0:
            raise ConfigurationError("horizon must be non-negative")
        if not 0 <= self.seed < 2**64:
            raise ConfigurationError("seed must be a 64-bit unsigned integer")
        object.__setattr__(self, "feedback_mode", FeedbackMode(self.feedback_mode))


def episode_streams(seed: int, n: int = 3):
    """Independent generators (values, competing bids, strategy) from one root seed."""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(n)]


@dataclass
class EpisodeTrace:
    """Columnar record of an episode; iterating yields :class:`RoundOutcome`."""

    v: np.ndarray
    b: np.ndarray
    d: np.ndarray
    x: np.ndarray
    p: np.ndarray
    c: np.ndarray
    r: np.ndarray

    def __len__(self) -> int:
        return len(self.v)

    def __getitem__(self, t: int) -> RoundOutcome:
        return RoundOutcome(
            float(self.v[t]), float(self.b[t]), float(self.d[t]), int(self.x[t]),
            float(self.p[t]), float(self.c[t]), float(self.r[t]),
        )

    def __iter__(self) -> Iterator[RoundOutcome]:
        return (self[t] for t in range(len(self)))

    @classmethod
    def from_outcomes(cls, outcomes) -> "EpisodeTrace":
        outcomes = list(outcomes)
        cols = {name: np.array([getattr(o, name) for o in outcomes], dtype=float) for name in "vbdpcr"}
        cols["x"] = np.array([o.x for o in outcomes], dtype=int)
        return cls(**cols)


def check_compatible(strategy, mode: FeedbackMode) -> None:
    needed = FeedbackMode(getattr(strategy, "feedback_required", FeedbackMode.BANDIT))
    if needed is FeedbackMode.FULL and FeedbackMode(mode) is FeedbackMode.BANDIT:
        raise ConfigurationError(f"{type(strategy).__name__} needs full feedback but the environment is bandit")


def run_episode(strategy, config: EnvConfig) -> EpisodeTrace:
    """Drive ``strategy`` through ``config.horizon`` rounds.

    Values and competing bids come from separate streams of ``config.seed`` so
    that swapping strategies leaves the environment draws untouched.
    """
    check_compatible(strategy, config.feedback_mode)
    T = config.horizon
    value_rng, competing_rng, _ = episode_streams(config.seed)
    vs = np.asarray(config.value_dist.sample(value_rng, T), dtype=float)
    ds = np.asarray(config.competing_dist.sample(competing_rng, T), dtype=float)
    bs = np.empty(T)
    xs = np.empty(T, dtype=int)
    ps = np.empty(T)
    alpha0, mode = config.alpha0, config.feedback_mode
    for i in range(T):
        v = float(vs[i])
        b = float(strategy.next_bid(v, i + 1))
        out = run_round(v, b, float(ds[i]), alpha0)
        strategy.observe(project_feedback(out, mode), v, b)
        bs[i], xs[i], ps[i] = b, out.x, out.p
    cs = xs * ps
    return EpisodeTrace(v=vs, b=bs, d=ds, x=xs, p=ps, c=cs, r=xs * vs - cs)
