"""Tracked runs plus the smoke and performance protocols."""

from .experiment import CHECKPOINT_ARTIFACT, STREAM_ARTIFACT, RunResult, experiment_name_for, run_experiment
from .perf import PerfReport, run_perf
from .smoke import SmokeCase, SmokeReport, run_smoke, run_smoke_case

__all__ = [
    "CHECKPOINT_ARTIFACT",
    "STREAM_ARTIFACT",
    "RunResult",
    "experiment_name_for",
    "run_experiment",
    "PerfReport",
    "run_perf",
    "SmokeCase",
    "SmokeReport",
    "run_smoke",
    "run_smoke_case",
]
