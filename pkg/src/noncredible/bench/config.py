"""Experiment configuration: a flat ``key=value`` file plus command-line overrides."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Dict, Mapping, Optional, Tuple

from ..distributions import Distribution, parse_distribution
from ..env import ConfigurationError, FeedbackMode

STRATEGIES = ("truthful", "ucb", "elimination", "known_g", "bandit_unknown", "exp3")

# strategies that need the full price on every round
_FULL_ONLY = {"exp3"}


@dataclass(frozen=True)
class ExperimentConfig:
    strategy: str
    alpha0: float
    dist: str = "uniform"
    value_dist: str = "uniform"
    feedback: FeedbackMode = FeedbackMode.BANDIT
    horizons: Tuple[int, ...] = (1000,)
    reps: int = 1
    seed: int = 0
    out: str = "results"
    K: Optional[int] = None
    M: Optional[int] = None
    eta: Optional[float] = None
    delta: Optional[float] = None
    alpha_low: float = 0.1
    estimator: str = "product_limit"
    traces: bool = False
    workers: int = 1
    regret_grid: int = 10_000

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ConfigurationError(f"unknown strategy {self.strategy!r}; pick one of {', '.join(STRATEGIES)}")
        if not 0.0 <= self.alpha0 <= 1.0:
            raise ConfigurationError("alpha0 must lie in [0, 1]")
        if self.reps < 1:
            raise ConfigurationError("reps must be >= 1")
        if any(T < 1 for T in self.horizons):
            raise ConfigurationError("horizons must be positive")
        if any(b <= a for a, b in zip(self.horizons, self.horizons[1:])):
            raise ConfigurationError("horizon list must be strictly increasing")
        if self.workers < 1:
            raise ConfigurationError("workers must be >= 1")
        if self.strategy in _FULL_ONLY and self.feedback is not FeedbackMode.FULL:
            raise ConfigurationError(f"{self.strategy} needs full feedback")
        if self.strategy == "elimination" and not 0.0 < self.alpha0 < 1.0:
            raise ConfigurationError("elimination needs alpha0 in (0, 1)")
        try:
            self.competing()
            self.values()
        except (ValueError, KeyError) as exc:
            raise ConfigurationError(f"bad distribution: {exc}") from exc

    def competing(self) -> Distribution:
        return parse_distribution(self.dist)

    def values(self) -> Distribution:
        return parse_distribution(self.value_dist)

    def grid_size(self, T: int) -> int:
        """K for horizon T: explicit, else the rate-matching default of the strategy."""
        if self.K is not None:
            return self.K
        if self.strategy in ("ucb", "exp3"):
            return max(1, math.ceil(T ** (1.0 / 3.0)))
        return max(1, math.ceil(math.sqrt(T)))

    def n_predictors(self, T: int) -> int:
        if self.M is not None:
            return self.M
        return self.grid_size(T)


def _parse_horizons(text: str) -> Tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    return tuple(int(float(tok)) for tok in text.replace(";", ",").split(",") if tok.strip())


def _bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ConfigurationError(f"not a boolean: {text!r}")


def _opt(cast):
    def conv(text: str):
        text = text.strip()
        return None if text.lower() in ("", "none", "auto") else cast(text)

    return conv


_CONVERTERS = {
    "strategy": str.strip,
    "alpha0": float,
    "dist": str.strip,
    "value_dist": str.strip,
    "feedback": lambda s: FeedbackMode(s.strip().lower()),
    "horizons": _parse_horizons,
    "reps": int,
    "seed": int,
    "out": str.strip,
    "K": _opt(int),
    "M": _opt(int),
    "eta": _opt(float),
    "delta": _opt(float),
    "alpha_low": float,
    "estimator": str.strip,
    "traces": _bool,
    "workers": int,
    "regret_grid": int,
}

_ALIASES = {"T": "horizons", "horizon": "horizons", "replications": "reps", "alpha": "alpha0", "G": "dist", "F": "value_dist"}


def read_config_file(path) -> Dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    raw: Dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        raw[key] = value
    return raw


def build_config(raw: Mapping[str, str], overrides: Optional[Mapping[str, object]] = None) -> ExperimentConfig:
    """Merge file entries with overrides (overrides win) and validate."""
    merged: Dict[str, object] = {}
    for key, value in raw.items():
        merged[_ALIASES.get(key, key)] = value
    for key, value in (overrides or {}).items():
        if value is not None:
            merged[_ALIASES.get(key, key)] = value
    kwargs: Dict[str, object] = {}
    extra: Dict[str, str] = {}
    for key, value in merged.items():
        conv = _CONVERTERS.get(key)
        if conv is None:
            extra[key] = str(value)
            continue
        try:
            kwargs[key] = conv(value) if isinstance(value, str) else value
        except ValueError as exc:
            raise ConfigurationError(f"bad value for {key}: {value!r}") from exc
    if extra:
        raise ConfigurationError(f"unknown config keys: {', '.join(sorted(extra))}")
    for required in ("strategy", "alpha0"):
        if required not in kwargs:
            raise ConfigurationError(f"missing required key {required!r}")
    if "feedback" not in kwargs and kwargs["strategy"] in _FULL_ONLY:
        kwargs["feedback"] = FeedbackMode.FULL
    if isinstance(kwargs.get("horizons"), list):
        kwargs["horizons"] = tuple(kwargs["horizons"])
    return ExperimentConfig(**kwargs)


def with_overrides(config: ExperimentConfig, **changes) -> ExperimentConfig:
    return replace(config, **changes)


def config_keys() -> Tuple[str, ...]:
    return tuple(f.name for f in fields(ExperimentConfig))
