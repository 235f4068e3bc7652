"""Experiment orchestration, seed derivation and reporting."""

from .experiment import (
    RESULTS_HEADER,
    ConfigError,
    ExperimentConfig,
    RunRecord,
    prepare_data,
    read_results,
    resample_split,
    run_cell,
    run_experiment,
)
from .report import compute_tables, emit_report, write_stats_tables
from .seeds import derive_cell_seed, l_milli

__all__ = [
    "RESULTS_HEADER",
    "ConfigError",
    "ExperimentConfig",
    "RunRecord",
    "compute_tables",
    "derive_cell_seed",
    "emit_report",
    "l_milli",
    "prepare_data",
    "read_results",
    "resample_split",
    "run_cell",
    "run_experiment",
    "write_stats_tables",
]
