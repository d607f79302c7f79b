"""Adversaries, comparators, regret accounting and the experiment runner."""

from .adversaries import AdversarySpec
from .comparators import ComparatorSpec, realize
from .experiment import ConfigError, ExperimentConfig, RegretReport, run_experiment
from .regret import Trace, best_swap_comparator, quantile_regret, regret_of

__all__ = [
    "AdversarySpec",
    "ComparatorSpec",
    "realize",
    "ConfigError",
    "ExperimentConfig",
    "RegretReport",
    "run_experiment",
    "Trace",
    "best_swap_comparator",
    "quantile_regret",
    "regret_of",
]
