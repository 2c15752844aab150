"""Study bookkeeping, the repeat-and-prune scheduler and the trial journal.

Scheduling: while some configuration has fewer than
``min_trials_per_param`` trials, the least-tried one is planned (lowest
index first), which is a round robin. Afterwards each new trial goes to the
configuration with the best mean objective among those below
``max_trials_per_param``. Failed and pruned trials use budget but never
enter a mean.
"""

import json
import logging
import math
from dataclasses import asdict, dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Dict, IO, List, Optional, Union

import numpy as np

from ..exceptions import ConfigError, NotFoundError, StateError
from .space import SearchSpace

logger = logging.getLogger(__name__)

MAXIMIZE = "maximize"
MINIMIZE = "minimize"


@dataclass
class StudyConfig:
    study_name: str
    max_trials: int
    n_jobs: int = 1
    direction: str = MAXIMIZE
    min_trials_per_param: int = 1
    max_trials_per_param: Optional[int] = None
    objective_metric: str = "success_rate"
    objective_mode: str = "final"

    def __post_init__(self) -> None:
        if self.max_trials_per_param is None:
            self.max_trials_per_param = self.max_trials
        if self.direction not in (MAXIMIZE, MINIMIZE):
            raise ConfigError(f"direction must be maximize or minimize, got {self.direction!r}")
        if self.objective_mode not in ("final", "best"):
            raise ConfigError(f"objective_mode must be final or best, got {self.objective_mode!r}")
        if self.n_jobs < 1:
            raise ConfigError(f"n_jobs must be >= 1, got {self.n_jobs}")
        if not 1 <= self.min_trials_per_param <= self.max_trials_per_param:
            raise ConfigError(
                "need 1 <= min_trials_per_param <= max_trials_per_param, got "
                f"{self.min_trials_per_param} and {self.max_trials_per_param}"
            )
        if self.max_trials < self.min_trials_per_param:
            raise ConfigError(
                f"max_trials ({self.max_trials}) is below min_trials_per_param "
                f"({self.min_trials_per_param})"
            )

    def better(self, a: float, b: float) -> bool:
        """True if objective ``a`` is strictly better than ``b``."""
        return a > b if self.direction == MAXIMIZE else a < b


class TrialStatus(str, Enum):
    RUNNING = "running"
    COMPLETE = "complete"
    FAILED = "failed"
    PRUNED = "pruned"


@dataclass
class Trial:
    trial_id: int
    config_index: int
    params: Dict[str, Any]
    seed: int
    status: TrialStatus = TrialStatus.RUNNING
    objective: Optional[float] = None
    run_id: Optional[str] = None
    message: str = ""


@dataclass(frozen=True)
class TrialPlan:
    config_index: int
    params: Dict[str, Any]
    seed: int


class StudyDone:
    """Returned by :func:`plan_next_trial` when no further trial may start."""

    def __repr__(self) -> str:
        return "StudyDone()"


class WaitForResults:
    """Returned when the next choice depends on trials still running."""

    def __repr__(self) -> str:
        return "WaitForResults()"


class StudyState:
    """Trials of one study plus an optional append-only journal."""

    def __init__(self, config: StudyConfig, space: SearchSpace,
                 journal_path: Union[str, Path, None] = None):
        self.config = config
        self.space = space
        self.trials: List[Trial] = []
        self.journal_path = Path(journal_path) if journal_path else None
        self._journal: Optional[IO[str]] = None
        if self.journal_path is not None:
            fresh = not self.journal_path.exists() or self.journal_path.stat().st_size == 0
            self.journal_path.parent.mkdir(parents=True, exist_ok=True)
            self._journal = open(self.journal_path, "a", encoding="utf-8")
            if fresh:
                self._write_event({
                    "event": "study",
                    "config": asdict(config),
                    "space": space.to_mapping(),
                })

    def close(self) -> None:
        if self._journal is not None:
            self._journal.close()
            self._journal = None

    def _write_event(self, event: Dict[str, Any]) -> None:
        if self._journal is not None:
            self._journal.write(json.dumps(event, separators=(",", ":")) + "\n")
            self._journal.flush()

    def trial_counts(self) -> List[int]:
        counts = [0] * len(self.space)
        for trial in self.trials:
            counts[trial.config_index] += 1
        return counts

    def objectives(self, config_index: int) -> List[float]:
        return [
            t.objective for t in self.trials
            if t.config_index == config_index and t.status is TrialStatus.COMPLETE
        ]

    def mean_objective(self, config_index: int) -> Optional[float]:
        values = self.objectives(config_index)
        if not values:
            return None
        return math.fsum(values) / len(values)

    @property
    def n_running(self) -> int:
        return sum(t.status is TrialStatus.RUNNING for t in self.trials)

    def get_trial(self, trial_id: int) -> Trial:
        if not 0 <= trial_id < len(self.trials):
            raise NotFoundError(f"Unknown trial id {trial_id}")
        return self.trials[trial_id]

    def start_trial(self, plan: TrialPlan, run_id: Optional[str] = None) -> Trial:
        trial = Trial(
            trial_id=len(self.trials),
            config_index=plan.config_index,
            params=dict(plan.params),
            seed=plan.seed,
            run_id=run_id,
        )
        self.trials.append(trial)
        self._write_event({
            "event": "start",
            "trial_id": trial.trial_id,
            "config_index": trial.config_index,
            "params": trial.params,
            "seed": trial.seed,
        })
        logger.info("Trial %d started: %s", trial.trial_id, self.space.describe(trial.params))
        return trial

    @classmethod
    def load(cls, journal_path: Union[str, Path]) -> "StudyState":
        """Rebuild a study by replaying its journal; new events append to it."""
        journal_path = Path(journal_path)
        if not journal_path.exists():
            raise NotFoundError(f"Journal not found: {journal_path}")
        lines = journal_path.read_text(encoding="utf-8").split("\n")
        events = [json.loads(line) for line in lines[:-1] if line.strip()]
        if not events or events[0].get("event") != "study":
            raise StateError(f"{journal_path} does not start with a study header")
        config = StudyConfig(**events[0]["config"])
        space = SearchSpace.from_mapping(events[0]["space"])

        state = cls(config, space)
        for event in events[1:]:
            if event["event"] == "start":
                state.trials.append(Trial(
                    trial_id=event["trial_id"],
                    config_index=event["config_index"],
                    params=event["params"],
                    seed=event["seed"],
                ))
            elif event["event"] == "finish":
                trial = state.get_trial(event["trial_id"])
                trial.status = TrialStatus(event["status"])
                trial.objective = event.get("objective")
                trial.run_id = event.get("run_id")
                trial.message = event.get("message", "")
        state.journal_path = journal_path
        state._journal = open(journal_path, "a", encoding="utf-8")
        return state

    def summary(self) -> Dict[str, Any]:
        """Plain comparable snapshot of the bookkeeping."""
        return {
            "config": asdict(self.config),
            "trials": [
                {**asdict(t), "status": t.status.value} for t in self.trials
            ],
        }


def plan_next_trial(state: StudyState, rng: np.random.Generator
                    ) -> Union[TrialPlan, StudyDone, WaitForResults]:
    """Next :class:`TrialPlan`, or :class:`StudyDone` / :class:`WaitForResults`."""
    cfg = state.config
    if len(state.space) == 0:
        raise ConfigError("Search space is empty")
    if len(state.trials) >= cfg.max_trials:
        return StudyDone()

    counts = state.trial_counts()
    under_min = [i for i, c in enumerate(counts) if c < cfg.min_trials_per_param]
    if under_min:
        choice = min(under_min, key=lambda i: (counts[i], i))
    else:
        uncapped = [i for i, c in enumerate(counts) if c < cfg.max_trials_per_param]
        if not uncapped:
            return StudyDone()
        scored = [(i, state.mean_objective(i)) for i in uncapped]
        scored = [(i, m) for i, m in scored if m is not None]
        if scored:
            choice, best = scored[0]
            for i, mean in scored[1:]:
                if cfg.better(mean, best):
                    choice, best = i, mean
        elif state.n_running:
            return WaitForResults()
        else:
            choice = min(uncapped, key=lambda i: (counts[i], i))

    seed = int(rng.integers(0, 2**31 - 1))
    return TrialPlan(config_index=choice, params=state.space[choice], seed=seed)


def record_result(state: StudyState, trial_id: int, objective: Optional[float] = None,
                  status: TrialStatus = TrialStatus.COMPLETE, message: str = "",
                  run_id: Optional[str] = None) -> StudyState:
    """Finish a running trial and journal the event before returning."""
    trial = state.get_trial(trial_id)
    if trial.status is not TrialStatus.RUNNING:
        raise StateError(f"Trial {trial_id} already finished with status {trial.status.value}")
    if status is TrialStatus.RUNNING:
        raise StateError("A trial cannot be finished with status 'running'")
    if status is TrialStatus.COMPLETE:
        if objective is None or not math.isfinite(objective):
            status, message, objective = TrialStatus.FAILED, f"invalid objective {objective!r}", None
    else:
        objective = None

    trial.status = status
    trial.objective = None if objective is None else float(objective)
    trial.message = message
    if run_id is not None:
        trial.run_id = run_id
    state._write_event({
        "event": "finish",
        "trial_id": trial_id,
        "status": status.value,
        "objective": trial.objective,
        "run_id": trial.run_id,
        "message": message,
    })
    logger.info("Trial %d %s (objective=%s)", trial_id, status.value, trial.objective)
    return state


def mark_interrupted(state: StudyState) -> int:
    """Fail every trial still running, e.g. after a crash; returns how many."""
    running = [t.trial_id for t in state.trials if t.status is TrialStatus.RUNNING]
    for trial_id in running:
        record_result(state, trial_id, status=TrialStatus.FAILED, message="interrupted")
    return len(running)
