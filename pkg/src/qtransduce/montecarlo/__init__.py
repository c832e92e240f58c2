"""Monte Carlo validation of the distribution strategies."""
from .config import SAMPLE_CONFIG, dump_config, load_config, parse_config
from .engine import (
    ComparisonRow,
    NetworkConfig,
    TrialReport,
    compare_report,
    empirical_vs_analytic,
    link_success_prob,
    run_trials,
    teleport_after_distribution,
    wilson_interval,
)

__all__ = [
    "SAMPLE_CONFIG",
    "ComparisonRow",
    "NetworkConfig",
    "TrialReport",
    "compare_report",
    "dump_config",
    "empirical_vs_analytic",
    "link_success_prob",
    "load_config",
    "parse_config",
    "run_trials",
    "teleport_after_distribution",
    "wilson_interval",
]
