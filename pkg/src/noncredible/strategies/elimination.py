"""Successive elimination with cross-learning over values and partial ordering over bids.

With alpha0 in (0, 1) a winning round reveals d exactly, so one round at bid
b_s yields the counterfactual outcome of every lower grid bid.  Each value
bucket keeps an active bid set; the bucket bids the supremum of its set, and
sets are capped by the supremum of every higher bucket (optimal bids are
monotone in the value).
"""

from __future__ import annotations

import math
from typing import Optional

import numpy as np
from numba import njit

from .base import Strategy, bid_grid
from .estimators import infer_highest_bid

_RECON_TOL = 1e-12


@njit(cache=True)
def _sweep(active, values, grid, n, wins, dsum, alpha0, width_const):
    M1, K1 = active.shape
    cap = K1 - 1
    for m in range(M1 - 1, -1, -1):
        row = active[m]
        for k in range(cap + 1, K1):
            row[k] = False
        sup = -1
        for k in range(cap, -1, -1):
            if row[k]:
                sup = k
                break
        if sup < 0:
            # capping emptied the set: keep the cap bid itself
            row[cap] = True
            sup = cap
        N = n[sup]
        if N > 0:
            w = math.sqrt(width_const / N)
            v = values[m]
            best = -np.inf
            for k in range(sup + 1):
                if row[k]:
                    r = (v * wins[k] - alpha0 * dsum[k] - (1.0 - alpha0) * grid[k] * wins[k]) / n[k]
                    if r > best:
                        best = r
            thresh = best - 2.0 * w
            for k in range(sup + 1):
                if row[k]:
                    r = (v * wins[k] - alpha0 * dsum[k] - (1.0 - alpha0) * grid[k] * wins[k]) / n[k]
                    if r < thresh:
                        row[k] = False
        new_sup = 0
        for k in range(sup, -1, -1):
            if row[k]:
                new_sup = k
                break
        if new_sup < cap:
            cap = new_sup


class EliminationState:
    def __init__(self, K: int, M: int):
        self.grid = bid_grid(K)
        self.values = np.arange(M + 1) / M
        self.active = np.ones((M + 1, K + 1), dtype=np.bool_)
        # n[k]: rounds with b_s >= b^k
        self.n = np.zeros(K + 1, dtype=np.int64)
        # wins[k], dsum[k]: count and sum of reconstructed d over wins with d <= b^k <= b_s
        self.wins = np.zeros(K + 1)
        self.dsum = np.zeros(K + 1)

    def bucket(self, v: float) -> int:
        """Index of the largest grid value not exceeding v."""
        return int(np.searchsorted(self.values, v, side="right")) - 1

    def sup(self, m: int) -> int:
        return int(np.flatnonzero(self.active[m])[-1])

    def add_sample(self, k_bid: int, x: int, d_hat: Optional[float]) -> None:
        self.n[: k_bid + 1] += 1
        if x:
            k_lo = int(np.searchsorted(self.grid, d_hat - _RECON_TOL, side="left"))
            if k_lo <= k_bid:
                self.wins[k_lo: k_bid + 1] += 1.0
                self.dsum[k_lo: k_bid + 1] += d_hat

    def estimates(self, m: int, alpha0: float) -> np.ndarray:
        """Cross-learned reward estimates ``r~(v^m, b^k, alpha0)`` for every grid bid."""
        g = self.grid
        with np.errstate(divide="ignore", invalid="ignore"):
            return (self.values[m] * self.wins - alpha0 * self.dsum - (1 - alpha0) * g * self.wins) / self.n


class Elimination(Strategy):
    name = "elimination"

    def __init__(self, alpha0: float, horizon: int, K: int, M: int, delta: Optional[float] = None):
        if not 0.0 < alpha0 < 1.0:
            raise ValueError("elimination needs a known alpha0 in (0, 1)")
        self.alpha0 = alpha0
        self.horizon = max(int(horizon), 2)
        self.delta = delta if delta is not None else 1.0 / self.horizon
        self.state = EliminationState(K, M)
        self.width_const = 4.0 * math.log(self.horizon) * math.log(max(K, 1) * self.horizon / self.delta)
        self._k = K

    def width(self, N: int) -> float:
        return math.sqrt(self.width_const / N) if N > 0 else math.inf

    def next_bid(self, v, t):
        self._k = self.state.sup(self.state.bucket(v))
        return float(self.state.grid[self._k])

    def observe(self, feedback, v, b):
        x = feedback.x
        d_hat = infer_highest_bid(feedback.cost, b, self.alpha0) if x else None
        self.state.add_sample(self._k, x, d_hat)
        elimination_step(self.state, self.alpha0, self.width_const)


def elimination_step(state: EliminationState, alpha0: float, width_const: float) -> None:
    """Cap and prune every bucket from the top value down (in place)."""
    _sweep(state.active, state.values, state.grid, state.n, state.wins, state.dsum, alpha0, width_const)
