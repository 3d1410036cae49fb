"""Numerical checks of the two-point lower-bound construction."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict

import numpy as np

from ..clairvoyant import DEFAULT_GRID, separation_bound, separation_gap
from ..distributions import TwoPointParams, Variant, kl_and_tv, make_two_point, tv_kl_lower_bound

SEP_TOL = 1e-9


@dataclass(frozen=True)
class LowerBoundReport:
    alpha: float
    delta: float
    min_gap: float
    gap_bound: float
    kl: float
    kl_bound: float
    one_minus_tv: float
    tv_kl_floor: float

    @property
    def checks(self) -> Dict[str, bool]:
        return {
            "separation": self.min_gap >= self.gap_bound - SEP_TOL,
            "kl": self.kl <= self.kl_bound,
            "tv_kl": self.one_minus_tv >= self.tv_kl_floor,
        }

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def verify_lower_bound(alpha: float, delta: float, grid_n: int = DEFAULT_GRID) -> LowerBoundReport:
    """Separation gap over the bid grid, KL(G1 || G2) <= 16 delta^2 and the TV-KL inequality."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    if not 0.0 < delta < 0.25:
        raise ValueError("delta must lie in (0, 1/4)")
    bids = np.linspace(0.0, 1.0, grid_n + 1)
    min_gap = float(np.min(separation_gap(alpha, delta, bids, grid_n)))
    g1, g2 = (make_two_point(TwoPointParams(alpha, delta, var)) for var in (Variant.G1, Variant.G2))
    p, q = np.asarray(g1.masses, dtype=float), np.asarray(g2.masses, dtype=float)
    kl_pq, tv = kl_and_tv(p, q)
    return LowerBoundReport(
        alpha=alpha,
        delta=delta,
        min_gap=min_gap,
        gap_bound=separation_bound(alpha, delta),
        kl=kl_pq,
        kl_bound=16.0 * delta * delta,
        one_minus_tv=1.0 - tv,
        tv_kl_floor=tv_kl_lower_bound(p, q),
    )


def closed_form_kl(delta: float) -> float:
    """KL between the two instances: 2 delta ln((1/2 + delta) / (1/2 - delta))."""
    return 2.0 * delta * math.log((0.5 + delta) / (0.5 - delta))
