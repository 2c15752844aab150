"""Trial execution: requests, results and the in-process training launcher."""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from ..config.centralized_config import ConfigManager
from ..config.loader import resolve_config
from ..exceptions import StateError
from ..harness.experiment import run_experiment
from ..track.file_store import FileTracker
from .study import MAXIMIZE

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrialRequest:
    trial_id: int
    params: Dict[str, Any]
    seed: int
    tokens: List[str] = field(default_factory=list)


@dataclass(frozen=True)
class TrialResult:
    objective: float
    run_id: Optional[str] = None


class TrainingLauncher:
    """Runs one tracked training run per trial.

    Instances hold only plain data so they can be sent to worker processes.
    """

    def __init__(self, base_tokens: List[str], track_root: Union[str, Path],
                 experiment_name: str, objective_metric: str = "success_rate",
                 objective_mode: str = "final", direction: str = MAXIMIZE,
                 config_dir: Union[str, Path, None] = None):
        self.base_tokens = list(base_tokens)
        self.track_root = str(track_root)
        self.experiment_name = experiment_name
        self.objective_metric = objective_metric
        self.objective_mode = objective_mode
        self.direction = direction
        self.config_dir = None if config_dir is None else str(config_dir)

    def tokens_for(self, request: TrialRequest) -> List[str]:
        return self.base_tokens + list(request.tokens) + [f"algorithm.seed={request.seed}"]

    def __call__(self, request: TrialRequest) -> TrialResult:
        if self.config_dir is not None:
            ConfigManager.set_base_config_dir(self.config_dir)
        tree = resolve_config(self.tokens_for(request))
        tracker = FileTracker(self.track_root)
        result = run_experiment(tree, tracker, self.experiment_name,
                                run_name=f"trial-{request.trial_id}")
        return TrialResult(self._objective(tracker, result.run_id), result.run_id)

    def _objective(self, tracker: FileTracker, run_id: str) -> float:
        history = tracker.read_history(run_id, self.objective_metric)
        if not history:
            raise StateError(f"Run {run_id} logged no '{self.objective_metric}' values")
        if self.objective_mode == "final":
            return history[-1].value
        values = [p.value for p in history]
        return max(values) if self.direction == MAXIMIZE else min(values)
