"""CDFs for values and highest competing bids, plus the two-point toolkit.

Every distribution is supported on [0, 1] and exposes a vectorised CDF, the
running integral ``I(b) = int_0^b G(y) dy`` and inverse-CDF sampling.
Instances are frozen dataclasses, so they can be shared between episodes and
used as cache keys.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy import special

QUAD_PANELS = 4096


class Distribution:
    """Base class; subclasses implement ``cdf`` and ``_quantile``."""

    label = "distribution"
    #: density lower/upper bounds (B1, B2) when the family declares them
    density_bounds: Optional[Tuple[float, float]] = None
    #: Lipschitz constant of the CDF, if declared
    lipschitz: Optional[float] = None

    def cdf(self, x):
        raise NotImplementedError

    def integral(self, b):
        """``int_0^b G(y) dy`` by composite trapezoid (subclasses may override)."""
        b = np.asarray(b, dtype=float)
        flat = np.atleast_1d(b)
        out = np.empty(flat.shape)
        u = np.linspace(0.0, 1.0, QUAD_PANELS + 1)
        for lo in range(0, flat.size, 256):
            chunk = np.maximum(flat[lo:lo + 256], 0.0)
            ys = self.cdf(chunk[:, None] * u[None, :])
            h = chunk / QUAD_PANELS
            out[lo:lo + 256] = h * (ys.sum(axis=1) - 0.5 * (ys[:, 0] + ys[:, -1]))
        return out.reshape(b.shape) if b.ndim else float(out[0])

    def _quantile(self, u):
        raise NotImplementedError

    def sample(self, rng: np.random.Generator, size=None):
        u = rng.random(size)
        return self._quantile(u)

    @property
    def breakpoints(self) -> Tuple[float, ...]:
        """Kinks and atoms of the CDF inside [0, 1] (used to augment bid grids)."""
        return ()


@dataclass(frozen=True)
class Uniform01(Distribution):
    label = "uniform"
    density_bounds = (1.0, 1.0)
    lipschitz = 1.0

    def cdf(self, x):
        return np.clip(x, 0.0, 1.0) * 1.0

    def integral(self, b):
        b = np.maximum(np.asarray(b, dtype=float), 0.0)
        out = np.where(b <= 1.0, 0.5 * b * b, 0.5 + (b - 1.0))
        return out if out.ndim else float(out)

    def _quantile(self, u):
        return u


@dataclass(frozen=True)
class PiecewiseLinear(Distribution):
    """CDF linear between breakpoints; a repeated x encodes a jump.

    ``xs`` must be non-decreasing, ``ys`` non-decreasing with ``ys[-1] == 1``.
    At a repeated x the CDF takes the last listed value (right-continuity).
    """

    xs: Tuple[float, ...]
    ys: Tuple[float, ...]
    name: str = "piecewise"

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=float)
        ys = np.asarray(self.ys, dtype=float)
        if xs.shape != ys.shape or xs.size == 0:
            raise ValueError("xs and ys must be non-empty and of equal length")
        if np.any(np.diff(xs) < 0) or np.any(np.diff(ys) < 0):
            raise ValueError("breakpoints and CDF values must be non-decreasing")
        if xs[0] < 0 or xs[-1] > 1 or ys[0] < 0 or not math.isclose(ys[-1], 1.0):
            raise ValueError("CDF must live on [0, 1] and end at 1")
        object.__setattr__(self, "xs", tuple(float(x) for x in xs))
        object.__setattr__(self, "ys", tuple(float(y) for y in ys))

    @property
    def label(self):
        return self.name

    @property
    def breakpoints(self):
        return tuple(sorted(set(self.xs)))

    def _arrays(self):
        return np.asarray(self.xs), np.asarray(self.ys)

    def cdf(self, x):
        xs, ys = self._arrays()
        x = np.asarray(x, dtype=float)
        i = np.searchsorted(xs, x, side="right") - 1
        last = xs.size - 1
        j = np.clip(i, 0, last - 1) if last > 0 else np.zeros_like(i)
        if last > 0:
            x0, x1 = xs[j], xs[j + 1]
            y0, y1 = ys[j], ys[j + 1]
            width = np.where(x1 > x0, x1 - x0, 1.0)
            inner = y0 + (y1 - y0) * np.clip((x - x0) / width, 0.0, 1.0)
        else:
            inner = np.ones_like(x)
        out = np.where(i < 0, 0.0, np.where(i >= last, 1.0, inner))
        return out if out.ndim else float(out)

    def integral(self, b):
        xs, ys = self._arrays()
        b = np.asarray(b, dtype=float)
        seg = np.diff(xs) * (ys[:-1] + ys[1:]) / 2.0
        cum = np.concatenate([[0.0], np.cumsum(seg)])
        i = np.searchsorted(xs, b, side="right") - 1
        last = xs.size - 1
        ic = np.clip(i, 0, last)
        partial = (b - xs[ic]) * (ys[ic] + self.cdf(np.minimum(b, xs[-1]))) / 2.0
        within = cum[ic] + np.where(i >= last, 0.0, partial)
        beyond = cum[-1] + (b - xs[-1])
        out = np.where(i < 0, 0.0, np.where(i >= last, beyond, within))
        return out if out.ndim else float(out)

    def _quantile(self, u):
        xs, ys = self._arrays()
        u = np.asarray(u, dtype=float)
        j = np.searchsorted(ys, u, side="left")
        jc = np.clip(j, 1, xs.size - 1) if xs.size > 1 else np.zeros_like(j)
        if xs.size == 1:
            return np.full_like(u, xs[0])
        y0, y1 = ys[jc - 1], ys[jc]
        x0, x1 = xs[jc - 1], xs[jc]
        frac = np.where(y1 > y0, (u - y0) / np.where(y1 > y0, y1 - y0, 1.0), 1.0)
        out = np.where(j == 0, xs[0], x0 + frac * (x1 - x0))
        return out if out.ndim else float(out)


@dataclass(frozen=True)
class TwoPoint(Distribution):
    """Discrete distribution on two atoms in [0, 1]."""

    atoms: Tuple[float, float]
    masses: Tuple[float, float]
    name: str = "two_point"

    def __post_init__(self):
        if len(self.atoms) != 2 or len(self.masses) != 2:
            raise ValueError("TwoPoint needs exactly two atoms and two masses")
        lo, hi = self.atoms
        if not 0.0 <= lo < hi <= 1.0:
            raise ValueError("atoms must satisfy 0 <= a1 < a2 <= 1")
        if any(m < 0 or m > 1 for m in self.masses) or not math.isclose(sum(self.masses), 1.0):
            raise ValueError("masses must lie in [0, 1] and sum to 1")

    @property
    def label(self):
        return self.name

    @property
    def breakpoints(self):
        return tuple(self.atoms)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        (a1, a2), (m1, _) = self.atoms, self.masses
        out = np.where(x >= a2, 1.0, np.where(x >= a1, m1, 0.0))
        return out if out.ndim else float(out)

    def integral(self, b):
        b = np.asarray(b, dtype=float)
        (a1, a2), (m1, _) = self.atoms, self.masses
        out = np.where(
            b >= a2,
            m1 * (a2 - a1) + (b - a2),
            np.where(b >= a1, m1 * (b - a1), 0.0),
        )
        return out if out.ndim else float(out)

    def _quantile(self, u):
        u = np.asarray(u, dtype=float)
        out = np.where(u < self.masses[0], self.atoms[0], self.atoms[1])
        return out if out.ndim else float(out)


@dataclass(frozen=True)
class TruncatedNormal(Distribution):
    """Normal(mu, sigma) truncated to [0, 1]; log-concave with bounded density.

    The running integral uses the generic trapezoid rule.
    """

    mu: float = 0.5
    sigma: float = 0.3

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")

    @property
    def label(self):
        return f"truncnorm(mu={self.mu:g},sigma={self.sigma:g})"

    def _mass(self):
        lo = special.ndtr(-self.mu / self.sigma)
        hi = special.ndtr((1.0 - self.mu) / self.sigma)
        return lo, hi - lo

    def density(self, x):
        _, z = self._mass()
        x = np.asarray(x, dtype=float)
        pdf = np.exp(-0.5 * ((x - self.mu) / self.sigma) ** 2) / (self.sigma * math.sqrt(2 * math.pi) * z)
        return np.where((x >= 0) & (x <= 1), pdf, 0.0)

    @property
    def density_bounds(self):
        # unimodal density: extremes at the endpoints or at the clipped mode
        pts = np.array([0.0, 1.0, min(max(self.mu, 0.0), 1.0)])
        g = self.density(pts)
        return float(g.min()), float(g.max())

    @property
    def lipschitz(self):
        return self.density_bounds[1]

    def cdf(self, x):
        lo, z = self._mass()
        x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
        out = (special.ndtr((x - self.mu) / self.sigma) - lo) / z
        out = np.clip(out, 0.0, 1.0)
        return out if out.ndim else float(out)

    def _quantile(self, u):
        lo, z = self._mass()
        x = self.mu + self.sigma * special.ndtri(lo + np.asarray(u) * z)
        return np.clip(x, 0.0, 1.0)


# ---------------------------------------------------------------------------
# named instances


def make_example_bad() -> PiecewiseLinear:
    """0 on [0, 1/3), then 3y/4 + 1/4 up to 1 at y = 1."""
    third = 1.0 / 3.0
    return PiecewiseLinear((0.0, third, third, 1.0), (0.0, 0.0, 0.5, 1.0), name="example_bad")


class Variant(str, Enum):
    G1 = "G1"
    G2 = "G2"


@dataclass(frozen=True)
class TwoPointParams:
    alpha: float
    delta: float
    variant: Variant = Variant.G1


def two_point_atoms(alpha: float) -> Tuple[float, float]:
    return (1.0 - alpha) / (3.0 - 2.0 * alpha), (2.0 - alpha) / (3.0 - 2.0 * alpha)


def make_two_point(params: TwoPointParams) -> TwoPoint:
    """Lower-bound instance: masses (1/2 + delta, 1/2 - delta) for G1, swapped for G2."""
    alpha, delta = params.alpha, params.delta
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    if not 0.0 <= delta < 0.25:
        raise ValueError(f"delta must lie in [0, 1/4), got {delta}")
    heavy, light = 0.5 + delta, 0.5 - delta
    masses = (heavy, light) if Variant(params.variant) is Variant.G1 else (light, heavy)
    return TwoPoint(two_point_atoms(alpha), masses, name=f"two_point_{Variant(params.variant).value}")


def kl_and_tv(p_masses: Sequence[float], q_masses: Sequence[float]) -> Tuple[float, float]:
    """KL(p || q) and total variation between two mass vectors on the same support.

    Returns ``math.inf`` for the KL when p puts mass where q has none.
    """
    p = np.asarray(p_masses, dtype=float)
    q = np.asarray(q_masses, dtype=float)
    if p.shape != q.shape or p.ndim != 1:
        raise ValueError("mass vectors must share one support")
    for name, m in (("p", p), ("q", q)):
        if np.any(m < 0) or not math.isclose(m.sum(), 1.0, abs_tol=1e-12):
            raise ValueError(f"{name} is not a probability vector")
    tv = 0.5 * float(np.abs(p - q).sum())
    if np.any((p > 0) & (q == 0)):
        return math.inf, tv
    mask = p > 0
    kl = float(np.sum(p[mask] * np.log(p[mask] / q[mask])))
    return max(kl, 0.0), tv


def tv_kl_lower_bound(p_masses, q_masses) -> float:
    """Right-hand side 1/2 exp(-(KL(p||q) + KL(q||p)) / 2) of the TV-KL inequality."""
    kl_pq, _ = kl_and_tv(p_masses, q_masses)
    kl_qp, _ = kl_and_tv(q_masses, p_masses)
    return 0.5 * math.exp(-(kl_pq + kl_qp) / 2.0)


# ---------------------------------------------------------------------------
# textual specs used by the CLI and config files


def parse_distribution(text: str) -> Distribution:
    """Build a distribution from ``uniform``, ``example_bad``,
    ``two_point:alpha=0.5,delta=0.1,variant=G1``, ``truncnorm:mu=0.5,sigma=0.3``
    or ``piecewise:0,0;0.5,0.2;1,1``."""
    kind, _, rest = text.strip().partition(":")
    kind = kind.lower()
    if kind in ("uniform", "uniform01"):
        return Uniform01()
    if kind in ("example_bad", "examplebad"):
        return make_example_bad()
    if kind == "piecewise":
        pts = [tuple(float(v) for v in pair.split(",")) for pair in rest.split(";") if pair]
        return PiecewiseLinear(tuple(p[0] for p in pts), tuple(p[1] for p in pts))
    kwargs = dict(item.split("=", 1) for item in rest.split(",") if item)
    if kind == "two_point":
        return make_two_point(
            TwoPointParams(float(kwargs["alpha"]), float(kwargs["delta"]), Variant(kwargs.get("variant", "G1")))
        )
    if kind == "truncnorm":
        return TruncatedNormal(float(kwargs.get("mu", 0.5)), float(kwargs.get("sigma", 0.3)))
    raise ValueError(f"unknown distribution spec {text!r}")


def random_piecewise(rng: np.random.Generator, n_knots: int = 4) -> PiecewiseLinear:
    """A random continuous piecewise-linear CDF on [0, 1] (test fixture helper)."""
    xs = np.sort(rng.uniform(0.0, 1.0, n_knots))
    ys = np.sort(rng.uniform(0.0, 1.0, n_knots))
    return PiecewiseLinear(
        tuple(np.concatenate([[0.0], xs, [1.0]])),
        tuple(np.concatenate([[0.0], ys, [1.0]])),
        name="random_piecewise",
    )
