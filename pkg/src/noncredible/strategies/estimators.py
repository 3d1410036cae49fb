"""Estimation subroutines shared by the learning strategies."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from ..distributions import Distribution


class NotApplicableError(ValueError):
    """An estimator was asked about a round it cannot use."""


def cross_learn_reward(r: float, x: int, v: float, v_new: float) -> float:
    """Reward the same round would have paid had the value been ``v_new``."""
    return r + x * (v_new - v)


def infer_highest_bid(c: float, b: float, alpha0: float, x: int = 1) -> float:
    """Invert the payment rule on a winning round: ``(c - (1 - alpha0) b) / alpha0``."""
    if alpha0 <= 0:
        raise NotApplicableError("alpha0 = 0: the cost carries no information about d")
    if not x:
        raise NotApplicableError("the competing bid is only revealed on winning rounds")
    return (c - (1.0 - alpha0) * b) / alpha0


# ---------------------------------------------------------------------------
# known G: affine inversion of the reward model


@dataclass
class AlphaEstimate:
    alpha: float
    width: float
    #: False when no round had a positive running integral yet
    identified: bool = True


def mle_alpha_known_g(
    v: Sequence[float],
    b: Sequence[float],
    r: Sequence[float],
    dist: Distribution,
    horizon: Optional[int] = None,
    delta: Optional[float] = None,
) -> AlphaEstimate:
    """Least-misfit credibility given realised rewards under a known G.

    ``r(v, b, alpha)`` is affine in alpha, so the minimiser of
    ``|sum_s r_s - r(v_s, b_s, alpha)|`` over [0, 1] is a clamped ratio.
    """
    v, b, r = (np.asarray(a, dtype=float) for a in (v, b, r))
    sum_r = float(r.sum())
    sum_win = float(np.sum((v - b) * dist.cdf(b)))
    sum_int = float(np.sum(dist.integral(b)))
    n = v.size
    T = horizon if horizon is not None else max(n + 1, 1)
    delta = delta if delta is not None else 1.0 / T
    return alpha_from_sums(sum_r, sum_win, sum_int, n, T, delta)


def alpha_from_sums(sum_r: float, sum_win: float, sum_int: float, n: int, horizon: int, delta: float) -> AlphaEstimate:
    if sum_int <= 0.0:
        return AlphaEstimate(1.0, math.inf, identified=False)
    alpha = min(max((sum_r - sum_win) / sum_int, 0.0), 1.0)
    width = 2.0 * math.sqrt(2.0 * n * math.log(2.0 * horizon / delta)) / sum_int
    return AlphaEstimate(alpha, width)


# ---------------------------------------------------------------------------
# unknown G, bandit feedback: credibility by binary search on a counting loss


def bisect_loss(loss: Callable[[float], float], lo: float, hi: float = 1.0, tol: float = 1e-9) -> float:
    """``inf {a in [lo, hi] : loss(a) <= 0}`` for a non-increasing loss.

    Returns ``hi`` when even ``loss(hi) > 0``.
    """
    if loss(lo) <= 0:
        return lo
    if loss(hi) > 0:
        return hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if loss(mid) <= 0:
            hi = mid
        else:
            lo = mid
    return hi


def win_ratios(x, b, c) -> np.ndarray:
    """``1 - c_s / b_s`` over winning rounds with positive bids."""
    x, b, c = (np.asarray(a, dtype=float) for a in (x, b, c))
    keep = (x > 0) & (b > 0)
    return 1.0 - c[keep] / b[keep]


def alpha_from_loss(x, b, c, alpha_low: float, tol: float = 1e-9) -> float:
    """Smallest alpha in [alpha_low, 1] with no winning round charging at most (1 - alpha) b.

    The loss ``L(alpha) = sum_s x_s 1{c_s <= (1 - alpha) b_s}`` is integer valued
    and non-increasing, so a binary search finds its zero set.  Wins at b = 0
    carry no information about alpha and are skipped.
    """
    if not 0.0 < alpha_low <= 1.0:
        raise ValueError("alpha_low must lie in (0, 1]")
    ratios = win_ratios(x, b, c)
    if ratios.size == 0:
        return alpha_low
    return bisect_loss(lambda a: np.count_nonzero(ratios >= a), alpha_low, 1.0, tol)


# ---------------------------------------------------------------------------
# empirical CDF of reconstructed competing bids


def reconstruct_bids(signal, b, alpha: float) -> np.ndarray:
    """``(signal - (1 - alpha) b) / alpha`` where signal is a cost or a price."""
    return (np.asarray(signal, dtype=float) - (1.0 - alpha) * np.asarray(b, dtype=float)) / alpha


@dataclass
class EmpiricalCdf:
    """Right-continuous step CDF; ``cold`` when built from no samples."""

    samples: np.ndarray
    norm: Optional[int] = None

    def __post_init__(self):
        self.samples = np.sort(np.asarray(self.samples, dtype=float))
        if self.norm is None:
            self.norm = self.samples.size

    @property
    def cold(self) -> bool:
        return self.samples.size == 0

    def __call__(self, x):
        if self.cold:
            return np.zeros_like(np.asarray(x, dtype=float)) if np.ndim(x) else 0.0
        out = np.searchsorted(self.samples, x, side="right") / self.norm
        return out if np.ndim(out) else float(out)

    def integral(self, b):
        """``int_0^b G_hat(y) dy`` computed exactly from the sorted samples."""
        if self.cold:
            return np.zeros_like(np.asarray(b, dtype=float)) if np.ndim(b) else 0.0
        s = np.maximum(self.samples, 0.0)
        b_arr = np.atleast_1d(np.asarray(b, dtype=float))
        k = np.searchsorted(s, b_arr, side="right")
        prefix = np.concatenate([[0.0], np.cumsum(s)])
        out = (k * b_arr - prefix[k]) / self.norm
        out = np.where(b_arr > 0, out, 0.0)
        return out if np.ndim(b) else float(out[0])


def empirical_cdf(samples, x):
    return EmpiricalCdf(samples)(x)
