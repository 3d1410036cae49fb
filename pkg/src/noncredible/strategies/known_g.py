from __future__ import annotations

from typing import Optional

from ..clairvoyant import optimal_bid
from ..distributions import Distribution
from .base import Strategy
from .estimators import AlphaEstimate, alpha_from_sums


class KnownG(Strategy):
    """Unknown credibility, known G: refit alpha each round and best-respond to it.

    Round 1 bids 1.  Afterwards alpha is the affine inversion of the reward
    model against the realised rewards so far.
    """

    name = "known_g"

    def __init__(self, dist: Distribution, horizon: int, delta: Optional[float] = None, grid_n: int = 1000):
        self.dist = dist
        self.horizon = max(int(horizon), 1)
        self.delta = delta if delta is not None else 1.0 / self.horizon
        self.grid_n = grid_n
        self.sum_r = 0.0
        self.sum_win = 0.0
        self.sum_int = 0.0
        self.n = 0
        self.estimate: Optional[AlphaEstimate] = None

    def current_estimate(self) -> AlphaEstimate:
        return alpha_from_sums(self.sum_r, self.sum_win, self.sum_int, self.n, self.horizon, self.delta)

    def next_bid(self, v, t):
        if t == 1:
            self.estimate = None
            return 1.0
        self.estimate = self.current_estimate()
        return optimal_bid(v, self.estimate.alpha, self.dist, self.grid_n)

    def observe(self, feedback, v, b):
        self.sum_r += feedback.x * v - feedback.cost
        self.sum_win += (v - b) * float(self.dist.cdf(b))
        self.sum_int += float(self.dist.integral(b))
        self.n += 1
