from .config import ExperimentConfig, build_config, read_config_file
from .lower_bound import LowerBoundReport, verify_lower_bound
from .runner import SummaryRow, make_strategy, run_experiment, run_seed
from .slope import fit_regret_slope

__all__ = [
    "ExperimentConfig",
    "LowerBoundReport",
    "SummaryRow",
    "build_config",
    "fit_regret_slope",
    "make_strategy",
    "read_config_file",
    "run_experiment",
    "run_seed",
    "verify_lower_bound",
]
