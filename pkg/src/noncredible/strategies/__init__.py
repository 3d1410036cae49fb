from .base import Strategy, Truthful, bid_grid, largest_argmax, truthful_next_bid
from .elimination import Elimination, EliminationState, elimination_step
from .estimators import (
    AlphaEstimate,
    EmpiricalCdf,
    NotApplicableError,
    alpha_from_loss,
    cross_learn_reward,
    empirical_cdf,
    infer_highest_bid,
    mle_alpha_known_g,
)
from .known_g import KnownG
from .ucb import UcbCrossLearning, UcbTable, ucb_cl_step
from .unknown_both import (
    BanditUnknownBoth,
    Exp3Ensemble,
    Exp3State,
    default_eta,
    exp3_sample_and_bid,
    exp3_update,
)

__all__ = [
    "AlphaEstimate",
    "BanditUnknownBoth",
    "Elimination",
    "EliminationState",
    "EmpiricalCdf",
    "Exp3Ensemble",
    "Exp3State",
    "KnownG",
    "NotApplicableError",
    "Strategy",
    "Truthful",
    "UcbCrossLearning",
    "UcbTable",
    "alpha_from_loss",
    "bid_grid",
    "cross_learn_reward",
    "default_eta",
    "elimination_step",
    "empirical_cdf",
    "exp3_sample_and_bid",
    "exp3_update",
    "infer_highest_bid",
    "largest_argmax",
    "mle_alpha_known_g",
    "truthful_next_bid",
    "ucb_cl_step",
]
