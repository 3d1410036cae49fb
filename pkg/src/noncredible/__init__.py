"""Online bidding against non-credible second-price auctions."""

from .clairvoyant import RegretTrace, RewardQuery, expected_reward, optimal_bid, pseudo_regret, separation_gap
from .distributions import (
    Distribution,
    PiecewiseLinear,
    TruncatedNormal,
    TwoPoint,
    TwoPointParams,
    Uniform01,
    Variant,
    kl_and_tv,
    make_example_bad,
    make_two_point,
    parse_distribution,
)
from .env import (
    BanditFeedback,
    ConfigurationError,
    EnvConfig,
    EpisodeTrace,
    FeedbackMode,
    FullFeedback,
    RoundOutcome,
    project_feedback,
    run_episode,
    run_round,
)

__version__ = "0.1.0"
