from __future__ import annotations

import warnings
from typing import Iterable, Tuple

import numpy as np


def fit_regret_slope(points: Iterable[Tuple[float, float]]) -> Tuple[float, float]:
    """Least-squares fit of log(regret) = beta log(T) + intercept.

    Points with a nonpositive T or regret are dropped with a warning.
    """
    pts = [(float(T), float(r)) for T, r in points]
    usable = [(T, r) for T, r in pts if T > 0 and r > 0]
    dropped = len(pts) - len(usable)
    if dropped:
        warnings.warn(f"dropped {dropped} point(s) with nonpositive T or regret", RuntimeWarning, stacklevel=2)
    if len(usable) < 3:
        raise ValueError(f"need at least 3 usable points, got {len(usable)}")
    logT = np.log([T for T, _ in usable])
    logR = np.log([r for _, r in usable])
    beta, intercept = np.polyfit(logT, logR, 1)
    return float(beta), float(intercept)
