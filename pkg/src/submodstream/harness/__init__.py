"""Data, oracles, experiment grids and report output."""

from .data import (
    CsvParseError,
    DimensionInconsistencyError,
    SyntheticSpec,
    drift_stream,
    generate,
    iid_mixture,
    load_csv,
    write_csv,
)
from .experiment import (
    AlgorithmSpec,
    ConfigurationError,
    ExperimentResult,
    ExperimentSpec,
    default_length_scale,
    make_objective,
    run_experiment,
)
from .oracle import MAX_SUBSETS, InstanceTooLargeError, brute_force_opt, max_singleton
from .report import COLUMNS, emit_report, records, render

__all__ = [
    "AlgorithmSpec",
    "COLUMNS",
    "ConfigurationError",
    "CsvParseError",
    "DimensionInconsistencyError",
    "ExperimentResult",
    "ExperimentSpec",
    "InstanceTooLargeError",
    "MAX_SUBSETS",
    "SyntheticSpec",
    "brute_force_opt",
    "default_length_scale",
    "drift_stream",
    "emit_report",
    "generate",
    "iid_mixture",
    "load_csv",
    "make_objective",
    "max_singleton",
    "records",
    "render",
    "run_experiment",
    "write_csv",
]
