from __future__ import annotations

import abc

import numpy as np

from ..env import FeedbackMode


class Strategy(abc.ABC):
    """Receive a value, emit a bid, then observe that round's feedback.

    ``t`` is the 1-based round index.  ``observe`` is called exactly once per
    round, after ``next_bid``.
    """

    name = "strategy"
    feedback_required = FeedbackMode.BANDIT

    @abc.abstractmethod
    def next_bid(self, v: float, t: int) -> float: ...

    @abc.abstractmethod
    def observe(self, feedback, v: float, b: float) -> None: ...


def bid_grid(K: int) -> np.ndarray:
    """``{k / K : k = 0..K}``."""
    if K < 1:
        raise ValueError("K must be at least 1")
    return np.arange(K + 1) / K


def largest_argmax(values: np.ndarray, tol: float = 0.0) -> int:
    """Index of the largest maximiser (ties go to the highest index)."""
    top = values.max()
    return int(np.flatnonzero(values >= top - tol)[-1])


class Truthful(Strategy):
    name = "truthful"

    def next_bid(self, v, t):
        return truthful_next_bid(v)

    def observe(self, feedback, v, b):
        pass


def truthful_next_bid(v: float) -> float:
    return v
