"""Cardinality-constrained monotone submodular maximization over streams."""

from .core import DataPoint, RunCounters, Summary, as_points, relative_performance, summary_push
from .objectives import Coverage, LogDet, RbfKernel, logdet_singleton_bound, rbf_eval
from .thresholds import RuleOfThreeConfig, ThresholdGrid, grid_make, rule_of_three_T

__version__ = "0.1.0"
