"""Adaptive phi-regret minimisation for prediction with expert advice."""

from .baselines import MWU, BlumMansour, InternalMWU
from .fixed_point import FixedPointConfig, NoConvergence, stationary_fixed_point
from .learner import OutOfOrderCall, PhiLearner
from .relabel import Relabeling, build_default
from .scalar import GradientOutOfRange, ScalarLearner
from .simplex import self_degree, uniformity, validate_stochastic

__all__ = [
    "MWU",
    "BlumMansour",
    "InternalMWU",
    "FixedPointConfig",
    "NoConvergence",
    "stationary_fixed_point",
    "OutOfOrderCall",
    "PhiLearner",
    "Relabeling",
    "build_default",
    "GradientOutOfRange",
    "ScalarLearner",
    "self_degree",
    "uniformity",
    "validate_stochastic",
]

__version__ = "0.1.0"
