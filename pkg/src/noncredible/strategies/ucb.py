from __future__ import annotations

import math

import numpy as np

from .base import Strategy, bid_grid, largest_argmax


class UcbTable:
    """Per-bid counts plus the win and cost totals needed to revalue samples at any v."""

    def __init__(self, K: int):
        self.grid = bid_grid(K)
        self.n = np.zeros(K + 1, dtype=np.int64)
        self.wins = np.zeros(K + 1)
        self.cost = np.zeros(K + 1)

    def add(self, k: int, x: int, c: float) -> None:
        self.n[k] += 1
        self.wins[k] += x
        self.cost[k] += c

    def mean_reward(self, v: float) -> np.ndarray:
        """Empirical mean of ``x_s v - c_s`` per bid (cross-learning over values)."""
        with np.errstate(divide="ignore", invalid="ignore"):
            return (v * self.wins - self.cost) / self.n

    def width(self, horizon: int) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return np.sqrt(2.0 * math.log(horizon) / self.n)


class UcbCrossLearning(Strategy):
    """UCB over a bid grid with cross-learning over values.

    Needs neither alpha0 nor G, so it also serves the unknown-alpha bandit case.
    The first K + 1 rounds submit each grid bid once, in increasing order.
    """

    name = "ucb"

    def __init__(self, horizon: int, K: int):
        self.horizon = max(int(horizon), 1)
        self.table = UcbTable(K)
        self._k = 0

    @property
    def K(self) -> int:
        return self.table.grid.size - 1

    def next_bid(self, v, t):
        if t <= self.K + 1:
            self._k = t - 1
        else:
            self._k = ucb_cl_step(self.table, v, self.horizon)
        return float(self.table.grid[self._k])

    def observe(self, feedback, v, b):
        self.table.add(self._k, feedback.x, feedback.cost)


def ucb_cl_step(table: UcbTable, v: float, horizon: int) -> int:
    """Grid index maximising mean reward plus ``sqrt(2 ln T / n_k)``; unseen bids score +inf."""
    score = table.mean_reward(v) + table.width(horizon)
    score = np.where(table.n == 0, np.inf, score)
    return largest_argmax(score)
