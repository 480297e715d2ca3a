"""Experiment configuration, execution, and report serialization."""

from .config import (
    EXPERIMENT_NAMES,
    ConfigValidationError,
    ExperimentConfig,
    describe_experiments,
    parse_config,
    serialize_config,
)
from .experiments import derive_seed, run_experiment
from .report import ExperimentReport, write_report

__all__ = [
    "EXPERIMENT_NAMES",
    "ConfigValidationError",
    "ExperimentConfig",
    "ExperimentReport",
    "derive_seed",
    "describe_experiments",
    "parse_config",
    "run_experiment",
    "serialize_config",
    "write_report",
]
