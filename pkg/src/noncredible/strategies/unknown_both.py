"""Unknown credibility and unknown G.

Bandit feedback: credibility by binary search on a counting loss, G by the
empirical CDF of reconstructed competing bids, bids restricted to
``[1 / (1 + ln t), 1]``.

Full feedback: an exponential-weights ensemble over credibility predictors,
each best-responding to its own plug-in estimate of G.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from ..env import FeedbackMode
from .base import Strategy, bid_grid, largest_argmax
from .estimators import EmpiricalCdf, bisect_loss

_BIN_TOL = 1e-12


def _bins(grid: np.ndarray, d_hat) -> np.ndarray:
    """First grid index k with ``d_hat <= b^k`` (``len(grid)`` when above the grid)."""
    return np.searchsorted(grid, np.asarray(d_hat) - _BIN_TOL, side="left")


def plug_in_objective(v: float, alpha: float, grid: np.ndarray, counts: np.ndarray, sums: np.ndarray, norm: float):
    """``(v - b) G_hat(b) + alpha int_0^b G_hat`` on the grid from binned samples.

    ``counts[k]`` / ``sums[k]`` hold the number and the sum of (clipped at 0)
    reconstructed bids whose first grid point at or above them is ``b^k``.
    """
    N = np.cumsum(counts[..., : grid.size], axis=-1)
    S = np.cumsum(sums[..., : grid.size], axis=-1)
    return ((v - grid) * N + alpha * (N * grid - S)) / norm


def product_limit_objective(v: float, alpha: float, grid: np.ndarray, deaths: np.ndarray, dsums: np.ndarray, censored: np.ndarray):
    """Plug-in objective with G estimated by the product-limit rule.

    A losing round at bid ``b^j`` only says ``d > b^j``, so it stays at risk up
    to ``b^j`` and then leaves the sample.  Censoring happens only at grid
    points, so within a bin the survival curve drops by ``(R - D) / R`` and its
    integral follows from the bin's death count and sum of reconstructed bids.
    """
    K1 = grid.size
    D = deaths[:K1]
    # at risk in bin k: every death in bins >= k plus every loss at bid index >= k
    at_risk = np.cumsum((D + censored[:K1])[::-1])[::-1] + deaths[K1]
    with np.errstate(divide="ignore", invalid="ignore"):
        factor = np.where(at_risk > 0, (at_risk - D) / at_risk, 1.0)
        frac_sum = np.where(at_risk > 0, (D * grid - dsums[:K1]) / at_risk, 0.0)
    S = np.cumprod(factor)
    S_prev = np.concatenate([[1.0], S[:-1]])
    h = np.diff(grid, prepend=0.0)
    # int over (b^{k-1}, b^k] of G = h - S_prev * (h - sum_i (b^k - d_i) / R)
    bin_int = h - S_prev * (h - frac_sum)
    I = np.cumsum(bin_int)
    return (v - grid) * (1.0 - S) + alpha * I


class BanditUnknownBoth(Strategy):
    """Binary-search credibility, plug-in G, bids restricted to ``[1/(1 + ln t), 1]``.

    ``estimator="product_limit"`` corrects for losing rounds hiding ``d``;
    ``estimator="wins_only"`` uses the raw empirical CDF of winning rounds.
    """

    name = "bandit_unknown"

    def __init__(self, horizon: int, K: int, alpha_low: float = 0.1, estimator: str = "product_limit"):
        if not 0.0 < alpha_low <= 1.0:
            raise ValueError("alpha_low must lie in (0, 1]")
        if estimator not in ("product_limit", "wins_only"):
            raise ValueError(f"unknown estimator {estimator!r}")
        self.alpha_low = alpha_low
        self.estimator = estimator
        self.grid = bid_grid(K)
        self._b = np.empty(max(int(horizon), 1))
        self._c = np.empty(max(int(horizon), 1))
        self.n_samples = 0
        self.n_rounds = 0
        self._ratios = []  # sorted 1 - c/b over wins with b > 0
        self.alpha = alpha_low
        self._alpha_key = None
        self._counts = np.zeros(K + 2)
        self._sums = np.zeros(K + 2)
        self._censored = np.zeros(K + 1)

    # -- credibility ------------------------------------------------------
    def loss(self, alpha: float) -> int:
        """Number of winning rounds charging at most ``(1 - alpha) b``."""
        return len(self._ratios) - bisect.bisect_left(self._ratios, alpha)

    def _refresh_alpha(self) -> None:
        # the zero set of the loss depends only on the largest ratio
        key = self._ratios[-1] if self._ratios else None
        if key == self._alpha_key:
            return
        self._alpha_key = key
        self.alpha = bisect_loss(self.loss, self.alpha_low, 1.0)
        self._rebin()

    def _rebin(self) -> None:
        d_hat = self.reconstructed()
        k = _bins(self.grid, d_hat)
        size = self.grid.size + 1
        self._counts = np.bincount(k, minlength=size)[:size].astype(float)
        self._sums = np.bincount(k, weights=np.maximum(d_hat, 0.0), minlength=size)[:size]

    def reconstructed(self, alpha: Optional[float] = None) -> np.ndarray:
        a = self.alpha if alpha is None else alpha
        b, c = self._b[: self.n_samples], self._c[: self.n_samples]
        return (c - (1.0 - a) * b) / a

    def g_hat(self) -> EmpiricalCdf:
        """Empirical CDF of the reconstructed winning-round bids (no censoring correction)."""
        return EmpiricalCdf(self.reconstructed())

    # -- bidding ----------------------------------------------------------
    def lower_bid(self, t: int) -> float:
        return 1.0 / (1.0 + math.log(t))

    def objective(self, v: float) -> np.ndarray:
        if self.estimator == "product_limit":
            return product_limit_objective(v, self.alpha, self.grid, self._counts, self._sums, self._censored)
        return plug_in_objective(v, self.alpha, self.grid, self._counts, self._sums, self.n_samples)

    def next_bid(self, v, t):
        if t == 1:
            return 1.0
        self._refresh_alpha()
        lo = self.lower_bid(t)
        if self.n_samples == 0:
            return lo
        obj = self.objective(v)
        start = int(np.searchsorted(self.grid, lo, side="left"))
        return float(self.grid[start + largest_argmax(obj[start:])])

    def observe(self, feedback, v, b):
        self.n_rounds += 1
        price = getattr(feedback, "p", None)
        if price is not None:
            # full feedback reveals p on losing rounds too: nothing is censored
            self._add_sample(b, price)
            return
        if not feedback.x:
            # bids come from the grid (round 1 bids 1 = b^K)
            k = int(np.searchsorted(self.grid, b - _BIN_TOL, side="left"))
            self._censored[min(k, self.grid.size - 1)] += 1.0
            return
        self._add_sample(b, feedback.cost)

    def _add_sample(self, b: float, c: float) -> None:
        i = self.n_samples
        self._b[i], self._c[i] = b, c
        self.n_samples += 1
        if b > 0:
            ratio = 1.0 - c / b
            bisect.insort(self._ratios, ratio)
            if self._alpha_key is not None and ratio > self._alpha_key:
                return  # alpha moves next round; bins get rebuilt then
        d_hat = (c - (1.0 - self.alpha) * b) / self.alpha
        k = int(_bins(self.grid, d_hat))
        if k <= self.grid.size:
            self._counts[k] += 1.0
            self._sums[k] += max(d_hat, 0.0)


# ---------------------------------------------------------------------------
# full feedback: exponential weights over credibility predictors


@dataclass
class Exp3State:
    M: int
    K: int
    eta: float
    horizon: int
    alphas: np.ndarray = field(init=False)
    grid: np.ndarray = field(init=False)
    cum_loss: np.ndarray = field(init=False)
    q: np.ndarray = field(init=False)
    counts: np.ndarray = field(init=False)
    sums: np.ndarray = field(init=False)
    rounds: int = 0

    def __post_init__(self):
        self.alphas = np.arange(1, self.M + 1) / self.M
        self.grid = bid_grid(self.K)
        self.cum_loss = np.zeros(self.M)
        self.q = np.full(self.M, 1.0 / self.M)
        self.counts = np.zeros((self.M, self.K + 2))
        self.sums = np.zeros((self.M, self.K + 2))

    def width(self, t: int) -> float:
        return math.sqrt(2.0 * math.log(self.horizon) / (t - 1)) if t > 1 else math.inf

    def add_price(self, p: float, b: float) -> None:
        """Reconstruct d under every predictor's credibility and bin it."""
        d_hat = (p - (1.0 - self.alphas) * b) / self.alphas
        k = _bins(self.grid, d_hat)
        rows = np.flatnonzero(k <= self.grid.size)
        self.counts[rows, k[rows]] += 1.0
        self.sums[rows, k[rows]] += np.maximum(d_hat[rows], 0.0)
        self.rounds += 1


def default_eta(M: int, K: int, horizon: int) -> float:
    """Balances ``ln M / eta + eta T K / 2``."""
    return math.sqrt(2.0 * math.log(M) / (max(horizon, 1) * max(K, 1)))


def predictor_suggestions(state: Exp3State, v: float, t: int) -> np.ndarray:
    """Grid index each predictor would bid (largest maximiser of its UCB estimate)."""
    if t <= 1 or state.rounds == 0:
        return np.full(state.M, state.K)
    obj = plug_in_objective(v, state.alphas[:, None], state.grid, state.counts, state.sums, state.rounds)
    # the bonus is the same for every bid, so it cannot change the argmax
    obj = obj + state.width(t)
    flipped = obj[:, ::-1]
    return state.K - np.argmax(flipped, axis=1)


def suggestion_prob(q: np.ndarray, suggestions: np.ndarray, k: int) -> float:
    return float(q[suggestions == k].sum())


def exp3_sample_and_bid(state: Exp3State, v: float, t: int, rng: np.random.Generator) -> Tuple[int, float, np.ndarray]:
    suggestions = predictor_suggestions(state, v, t)
    m = int(rng.choice(state.M, p=state.q))
    return m, float(state.grid[suggestions[m]]), suggestions


def normalise_reward(r: float) -> float:
    """Map a reward in [-1, 1] into [0, 1] before it enters the loss."""
    return (r + 1.0) / 2.0


def importance_losses(q: np.ndarray, suggestions: np.ndarray, k_played: int, r: float) -> np.ndarray:
    """``1{suggestion = played} / P(played) * (1 - r)`` for a reward ``r`` in [0, 1]."""
    if not 0.0 <= r <= 1.0:
        raise ValueError(f"reward {r} outside [0, 1]; normalise it first")
    P = suggestion_prob(q, suggestions, k_played)
    if P <= 0.0:
        raise RuntimeError("submitted bid was suggested by no predictor")
    return (suggestions == k_played) / P * (1.0 - r)


def exp3_update(state: Exp3State, k_played: int, suggestions: np.ndarray, r: float) -> np.ndarray:
    """Charge importance-weighted losses and refresh the sampling distribution.

    ``r`` is the normalised reward in [0, 1].
    """
    losses = importance_losses(state.q, suggestions, k_played, r)
    state.cum_loss += losses
    z = -state.eta * (state.cum_loss - state.cum_loss.min())
    w = np.exp(z - z.max())
    state.q = w / w.sum()
    return losses


class Exp3Ensemble(Strategy):
    name = "exp3"
    feedback_required = FeedbackMode.FULL

    def __init__(self, horizon: int, K: int, M: int, eta: Optional[float] = None, rng: Optional[np.random.Generator] = None):
        horizon = max(int(horizon), 1)
        eta = default_eta(M, K, horizon) if eta is None else eta
        self.state = Exp3State(M=M, K=K, eta=eta, horizon=horizon)
        self.rng = rng if rng is not None else np.random.default_rng(0)
        self._m = 0
        self._suggestions = np.full(M, K)

    def next_bid(self, v, t):
        self._m, bid, self._suggestions = exp3_sample_and_bid(self.state, v, t, self.rng)
        return bid

    def observe(self, feedback, v, b):
        p = feedback.p
        r = feedback.x * (v - p)
        exp3_update(self.state, int(self._suggestions[self._m]), self._suggestions, normalise_reward(r))
        self.state.add_price(p, b)
