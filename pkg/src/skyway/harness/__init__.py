"""Benchmark harness: configuration, experiment runner and CSV reports."""

from .config import ExperimentConfig, load_config
from .experiment import MetricsRecord, load_inputs, run_experiment
from .report import emit_report, read_metrics, read_summary

__all__ = [
    "ExperimentConfig",
    "MetricsRecord",
    "emit_report",
    "load_config",
    "load_inputs",
    "read_metrics",
    "read_summary",
    "run_experiment",
]
