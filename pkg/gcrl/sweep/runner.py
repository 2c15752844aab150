"""Study coordinator: plans trials, runs them on workers, journals results."""

import logging
import math
from concurrent.futures import FIRST_COMPLETED, Executor, ProcessPoolExecutor, ThreadPoolExecutor, wait
from pathlib import Path
from typing import Callable, Dict, Optional, Tuple, Union

import numpy as np

from ..exceptions import TrialPruned
from .launcher import TrialRequest, TrialResult
from .report import StudyReport
from .space import SearchSpace
from .study import (
    StudyConfig,
    StudyState,
    TrialPlan,
    TrialStatus,
    plan_next_trial,
    record_result,
)

logger = logging.getLogger(__name__)

Launcher = Callable[[TrialRequest], Union[float, TrialResult]]
Outcome = Tuple[TrialStatus, Optional[float], Optional[str], str]


def execute_trial(launcher: Launcher, request: TrialRequest) -> Outcome:
    """Run one trial and fold any failure into an outcome tuple."""
    try:
        result = launcher(request)
    except TrialPruned as e:
        return TrialStatus.PRUNED, None, None, str(e) or "pruned"
    except Exception as e:  # noqa: BLE001 - a failing trial never stops the study
        logger.warning("Trial %d failed: %s", request.trial_id, e)
        return TrialStatus.FAILED, None, None, f"{type(e).__name__}: {e}"
    if not isinstance(result, TrialResult):
        result = TrialResult(float(result))
    if not math.isfinite(result.objective):
        return TrialStatus.FAILED, None, result.run_id, f"non-finite objective {result.objective}"
    return TrialStatus.COMPLETE, float(result.objective), result.run_id, ""


def _request(state: StudyState, trial_id: int) -> TrialRequest:
    trial = state.get_trial(trial_id)
    return TrialRequest(trial.trial_id, dict(trial.params), trial.seed,
                        SearchSpace.to_tokens(trial.params))


def _finish(state: StudyState, trial_id: int, outcome: Outcome) -> None:
    status, objective, run_id, message = outcome
    record_result(state, trial_id, objective, status, message, run_id)


def run_study(
    config: StudyConfig,
    space: SearchSpace,
    launcher: Launcher,
    journal_path: Union[str, Path, None] = None,
    seed: int = 0,
    state: Optional[StudyState] = None,
    executor: str = "process",
) -> StudyReport:
    """Run trials until the scheduler reports the study done.

    ``state`` continues an existing (e.g. resumed) study. With ``n_jobs > 1``
    trials run on a process pool, or a thread pool when ``executor="thread"``.
    """
    if state is None:
        state = StudyState(config, space, journal_path)
    rng = np.random.default_rng([seed, len(state.trials)])
    logger.info("Study %s: %d configurations, budget %d, %d job(s)",
                config.study_name, len(space), config.max_trials, config.n_jobs)
    try:
        if config.n_jobs == 1:
            _run_inline(state, launcher, rng)
        else:
            pool_cls = ThreadPoolExecutor if executor == "thread" else ProcessPoolExecutor
            with pool_cls(max_workers=config.n_jobs) as pool:
                _run_pool(state, launcher, rng, pool)
    finally:
        state.close()
    return StudyReport.from_state(state)


def _run_inline(state: StudyState, launcher: Launcher, rng: np.random.Generator) -> None:
    while True:
        plan = plan_next_trial(state, rng)
        if not isinstance(plan, TrialPlan):
            # nothing runs concurrently, so waiting cannot help
            return
        trial = state.start_trial(plan)
        _finish(state, trial.trial_id, execute_trial(launcher, _request(state, trial.trial_id)))


def _run_pool(state: StudyState, launcher: Launcher, rng: np.random.Generator,
              pool: Executor) -> None:
    pending: Dict = {}
    while True:
        while len(pending) < state.config.n_jobs:
            plan = plan_next_trial(state, rng)
            if not isinstance(plan, TrialPlan):
                break
            trial = state.start_trial(plan)
            future = pool.submit(execute_trial, launcher, _request(state, trial.trial_id))
            pending[future] = trial.trial_id
        if not pending:
            return
        done, _ = wait(pending, return_when=FIRST_COMPLETED)
        for future in sorted(done, key=lambda f: pending[f]):
            trial_id = pending.pop(future)
            try:
                outcome = future.result()
            except Exception as e:  # noqa: BLE001 - e.g. a worker process died
                outcome = (TrialStatus.FAILED, None, None, f"{type(e).__name__}: {e}")
            _finish(state, trial_id, outcome)
