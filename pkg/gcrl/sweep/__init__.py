"""Hyperparameter studies with a repeat-and-prune scheduler."""

from .launcher import TrainingLauncher, TrialRequest, TrialResult
from .loader import StudyDefinition, find_study_file, load_study_file, parse_study
from .report import StudyReport
from .runner import execute_trial, run_study
from .space import SearchEntry, SearchSpace
from .study import (
    StudyConfig,
    StudyDone,
    StudyState,
    Trial,
    TrialPlan,
    TrialStatus,
    WaitForResults,
    mark_interrupted,
    plan_next_trial,
    record_result,
)

__all__ = [
    "TrainingLauncher",
    "TrialRequest",
    "TrialResult",
    "StudyDefinition",
    "find_study_file",
    "load_study_file",
    "parse_study",
    "StudyReport",
    "execute_trial",
    "run_study",
    "SearchEntry",
    "SearchSpace",
    "StudyConfig",
    "StudyDone",
    "StudyState",
    "Trial",
    "TrialPlan",
    "TrialStatus",
    "WaitForResults",
    "mark_interrupted",
    "plan_next_trial",
    "record_result",
]
