"""Clairvoyant benchmark: expected reward, optimal bid and pseudo-regret.

``r(v, b, alpha) = (v - b) G(b) + alpha * int_0^b G(y) dy``.  The optimal bid
is the largest maximiser over a uniform grid on [0, 1] augmented with the
CDF's breakpoints and the value itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .distributions import Distribution, TwoPointParams, Variant, make_two_point

DEFAULT_GRID = 10_000
TIE_TOL = 1e-12


@dataclass(frozen=True)
class RewardQuery:
    v: float
    b: float
    alpha: float
    dist: Distribution


def reward(v, b, alpha, dist: Distribution):
    """Vectorised ``r(v, b, alpha)``."""
    b = np.asarray(b, dtype=float)
    out = (v - b) * dist.cdf(b) + alpha * dist.integral(b)
    return out if np.ndim(out) else float(out)


def expected_reward(q: RewardQuery) -> float:
    return float(reward(q.v, q.b, q.alpha, q.dist))


@lru_cache(maxsize=64)
def _table(dist: Distribution, grid_n: int):
    """Candidate bids (sorted) with their CDF and running-integral values."""
    grid = np.linspace(0.0, 1.0, grid_n + 1)
    extra = np.asarray([x for x in dist.breakpoints if 0.0 <= x <= 1.0], dtype=float)
    cand = np.unique(np.concatenate([grid, extra]))
    G = np.asarray(dist.cdf(cand), dtype=float)
    I = np.asarray(dist.integral(cand), dtype=float)
    for arr in (cand, G, I):
        arr.setflags(write=False)
    return cand, G, I


def _largest_argmax(values: np.ndarray) -> int:
    top = values.max()
    return int(np.flatnonzero(values >= top - TIE_TOL)[-1])


def optimal_bid(v: float, alpha: float, dist: Distribution, grid_n: int = DEFAULT_GRID) -> float:
    cand, G, I = _table(dist, grid_n)
    vals = (v - cand) * G + alpha * I
    k = _largest_argmax(vals)
    best_b, best_r = float(cand[k]), float(vals[k])
    # the value itself is a candidate; it sits between grid points unless already present
    r_v = alpha * float(dist.integral(v))
    if r_v >= best_r - TIE_TOL and v > best_b:
        return float(v)
    if r_v > best_r + TIE_TOL:
        return float(v)
    return best_b


class _Envelope:
    """Upper envelope of the lines ``v -> G(b) v + (alpha I(b) - b G(b))`` over candidates."""

    def __init__(self, slopes: np.ndarray, intercepts: np.ndarray):
        order = np.lexsort((intercepts, slopes))
        s, c = slopes[order], intercepts[order]
        hull_s, hull_c = [], []
        for si, ci in zip(s.tolist(), c.tolist()):
            if hull_s and hull_s[-1] == si:
                hull_s.pop()
                hull_c.pop()
            while len(hull_s) >= 2:
                s1, c1, s2, c2 = hull_s[-2], hull_c[-2], hull_s[-1], hull_c[-1]
                # drop the middle line when it never strictly wins
                if (c1 - ci) * (s2 - s1) <= (c1 - c2) * (si - s1):
                    hull_s.pop()
                    hull_c.pop()
                else:
                    break
            hull_s.append(si)
            hull_c.append(ci)
        self.s = np.asarray(hull_s)
        self.c = np.asarray(hull_c)
        # v-coordinates where consecutive hull lines cross
        self.cross = (self.c[:-1] - self.c[1:]) / (self.s[1:] - self.s[:-1])

    def __call__(self, v: np.ndarray) -> np.ndarray:
        idx = np.searchsorted(self.cross, v, side="left")
        # evaluate the neighbouring lines too, guarding against round-off at crossings
        lo = np.clip(idx - 1, 0, self.s.size - 1)
        hi = np.clip(idx + 1, 0, self.s.size - 1)
        vals = [self.s[j] * v + self.c[j] for j in (lo, idx, hi)]
        return np.maximum.reduce(vals)


@lru_cache(maxsize=64)
def _envelope(dist: Distribution, alpha: float, grid_n: int) -> _Envelope:
    cand, G, I = _table(dist, grid_n)
    return _Envelope(G, alpha * I - cand * G)


def max_reward(v, alpha: float, dist: Distribution, grid_n: int = DEFAULT_GRID) -> np.ndarray:
    """Benchmark reward ``r(v, b*(v, alpha), alpha)`` for an array of values."""
    v = np.atleast_1d(np.asarray(v, dtype=float))
    env = _envelope(dist, float(alpha), grid_n)
    at_value = alpha * np.asarray(dist.integral(v), dtype=float)
    return np.maximum(env(v), at_value)


@dataclass
class RegretTrace:
    per_round: np.ndarray
    cumulative: np.ndarray

    @property
    def total(self) -> float:
        return float(self.cumulative[-1]) if self.cumulative.size else 0.0


def pseudo_regret(trace, alpha0: float, dist: Distribution, grid_n: int = DEFAULT_GRID) -> RegretTrace:
    """Per-round ``r(v_t, b*_t) - r(v_t, b_t)`` under the true (alpha0, G).

    The submitted bid joins the candidate set, so off-grid bids cannot beat the
    benchmark by the grid's discretisation error.
    """
    v = np.asarray(trace.v if hasattr(trace, "v") else [o.v for o in trace], dtype=float)
    b = np.asarray(trace.b if hasattr(trace, "b") else [o.b for o in trace], dtype=float)
    if v.size == 0:
        empty = np.zeros(0)
        return RegretTrace(empty, empty.copy())
    got = np.asarray(reward(v, b, alpha0, dist), dtype=float)
    best = np.maximum(max_reward(v, alpha0, dist, grid_n), got)
    per_round = best - got
    return RegretTrace(per_round, np.cumsum(per_round))


# ---------------------------------------------------------------------------
# two-point separation


def _two_point_rewards(alpha: float, delta: float, grid_n: int):
    dists = [make_two_point(TwoPointParams(alpha, delta, var)) for var in (Variant.G1, Variant.G2)]
    grid = np.linspace(0.0, 1.0, grid_n + 1)
    cand = np.unique(np.concatenate([grid, dists[0].breakpoints]))
    R1, R2 = (reward(1.0, cand, alpha, g) for g in dists)
    return cand, R1, R2


def separation_gap(alpha: float, delta: float, b, grid_n: int = DEFAULT_GRID):
    """``[max R1 - R1(b)] + [max R2 - R2(b)]`` with v = 1 and brute-force maxima."""
    if not 0.0 < alpha < 1.0 or not 0.0 <= delta < 0.25:
        raise ValueError("need alpha in (0, 1) and delta in [0, 1/4)")
    cand, R1, R2 = _two_point_rewards(alpha, delta, grid_n)
    dists = [make_two_point(TwoPointParams(alpha, delta, var)) for var in (Variant.G1, Variant.G2)]
    b = np.asarray(b, dtype=float)
    gap = (R1.max() - reward(1.0, b, alpha, dists[0])) + (R2.max() - reward(1.0, b, alpha, dists[1]))
    return gap if np.ndim(gap) else float(gap)


def separation_bound(alpha: float, delta: float) -> float:
    return (2.0 - 2.0 * alpha) / (3.0 - 2.0 * alpha) * delta
