import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from noncredible.clairvoyant import reward
from noncredible.distributions import Uniform01, make_example_bad
from noncredible.env import run_round
from noncredible.strategies import (
    EmpiricalCdf,
    NotApplicableError,
    alpha_from_loss,
    cross_learn_reward,
    empirical_cdf,
    infer_highest_bid,
    mle_alpha_known_g,
    truthful_next_bid,
)


@pytest.mark.parametrize("v", [0.7, 0.0, 1.0])
def test_truthful_bid_is_value(v):
    assert truthful_next_bid(v) == v


def test_cross_learn_reward():
    assert cross_learn_reward(0.4, 1, 1.0, 0.7) == pytest.approx(0.1)
    assert cross_learn_reward(0.0, 0, 1.0, 0.3) == 0.0
    assert cross_learn_reward(0.25, 1, 0.6, 0.6) == 0.25


@settings(max_examples=200, deadline=None)
@given(*(st.floats(0, 1) for _ in range(4)), st.floats(0, 1))
def test_cross_learning_matches_replay(v, v2, b, d, a):
    # revaluing a realised round equals replaying it with the other value
    out = run_round(v, b, d, a)
    assert cross_learn_reward(out.r, out.x, v, v2) == pytest.approx(run_round(v2, b, d, a).r, abs=1e-12)


def test_infer_highest_bid():
    assert infer_highest_bid(0.6, 0.8, 0.5) == pytest.approx(0.4)
    assert infer_highest_bid(0.37, 0.9, 1.0) == 0.37
    for b in (0.1, 0.55, 1.0):
        assert infer_highest_bid(b, b, 0.5) == pytest.approx(b)


def test_infer_highest_bid_errors():
    with pytest.raises(NotApplicableError):
        infer_highest_bid(0.5, 0.5, 0.0)
    with pytest.raises(NotApplicableError):
        infer_highest_bid(0.0, 0.5, 0.5, x=0)


@settings(max_examples=300, deadline=None)
@given(st.floats(0, 1), st.floats(0, 1), st.floats(0.01, 1))
def test_infer_reconstructs_env_rounds(b, d, a):
    out = run_round(1.0, b, d, a)
    if out.x:
        assert infer_highest_bid(out.c, b, a) == pytest.approx(d, abs=1e-9)


# -- known G ---------------------------------------------------------------


def test_mle_single_round_example():
    est = mle_alpha_known_g([1.0], [1.0], [0.3], Uniform01())
    assert est.alpha == pytest.approx(0.6)


def test_mle_exact_fit_recovers_alpha():
    rng = np.random.default_rng(0)
    dist = make_example_bad()
    v, b = rng.uniform(size=(2, 50))
    r = reward(v, b, 0.37, dist)
    assert mle_alpha_known_g(v, b, r, dist).alpha == pytest.approx(0.37, abs=1e-12)


def test_mle_clamps():
    assert mle_alpha_known_g([1.0], [1.0], [5.0], Uniform01()).alpha == 1.0
    assert mle_alpha_known_g([1.0], [1.0], [-5.0], Uniform01()).alpha == 0.0


def test_mle_unidentified():
    est = mle_alpha_known_g([0.5, 0.7], [0.0, 0.0], [0.0, 0.0], Uniform01())
    assert est.alpha == 1.0 and est.width == math.inf and not est.identified


def test_mle_matches_affine_inversion_oracle():
    rng = np.random.default_rng(1)
    for _ in range(100):
        n = int(rng.integers(1, 40))
        v, b = rng.uniform(size=(2, n))
        r = rng.uniform(-0.2, 0.8, n)
        T, delta = 1000, 0.05
        # uniform G: G(b) = b and I(b) = b^2 / 2 written out by hand
        num = r.sum() - np.sum((v - b) * b)
        den = np.sum(b * b / 2)
        oracle = min(max(num / den, 0.0), 1.0)
        est = mle_alpha_known_g(v, b, r, Uniform01(), horizon=T, delta=delta)
        assert est.alpha == pytest.approx(oracle, abs=1e-10)
        assert est.width == pytest.approx(2 * math.sqrt(2 * n * math.log(2 * T / delta)) / den, rel=1e-12)


# -- unknown G, bandit -----------------------------------------------------


def test_alpha_from_loss_example():
    x, b, c = [1, 1], [1.0, 0.8], [0.6, 0.56]
    assert alpha_from_loss(x, b, c, 0.1) == pytest.approx(0.4, abs=1e-8)


def test_alpha_from_loss_zero_competing_bid():
    a0, b = 0.35, 0.7
    assert alpha_from_loss([1], [b], [(1 - a0) * b], 0.1) == pytest.approx(a0, abs=1e-8)


def test_alpha_from_loss_empty():
    assert alpha_from_loss([], [], [], 0.2) == 0.2
    assert alpha_from_loss([0, 0], [0.3, 0.4], [0.0, 0.0], 0.2) == 0.2


def test_alpha_from_loss_rejects_bad_floor():
    with pytest.raises(ValueError):
        alpha_from_loss([1], [1.0], [0.5], 0.0)


def test_alpha_from_loss_random_histories():
    rng = np.random.default_rng(2)
    for _ in range(500):
        n = int(rng.integers(0, 30))
        a0, low = rng.uniform(0.05, 1.0), rng.uniform(0.01, 0.5)
        b, d = rng.uniform(size=(2, n))
        b[rng.uniform(size=n) < 0.1] = 0.0
        x = (b >= d).astype(int)
        c = x * (a0 * d + (1 - a0) * b)
        # closed form: max over wins with b > 0 of 1 - c/b, clamped into [low, 1]
        ratios = [1 - ci / bi for xi, bi, ci in zip(x, b, c) if xi and bi > 0]
        oracle = min(max(max(ratios, default=low), low), 1.0)
        assert alpha_from_loss(x, b, c, low) == pytest.approx(oracle, abs=1e-8)


def test_empirical_cdf_examples():
    assert empirical_cdf([0.2, 0.4], 0.3) == 0.5
    assert empirical_cdf([0.2, 0.4], 0.4) == 1.0
    assert empirical_cdf([0.2, 0.4], 0.9) == 1.0
    assert empirical_cdf([0.2, 0.4], 0.1) == 0.0


def test_empirical_cdf_cold():
    g = EmpiricalCdf([])
    assert g.cold
    assert g(0.5) == 0.0 and g(10.0) == 0.0
    assert g.integral(0.7) == 0.0


def test_empirical_cdf_integral_exact():
    rng = np.random.default_rng(4)
    s = rng.uniform(-0.2, 1.1, 25)
    g = EmpiricalCdf(s)
    for b in np.linspace(0, 1, 41):
        # sum of (b - max(s_i, 0)) over samples at or below b, written out directly
        oracle = sum(b - max(si, 0.0) for si in s if si <= b) / s.size
        assert g.integral(b) == pytest.approx(oracle, abs=1e-12)
