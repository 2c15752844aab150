"""Smoke protocol: every algorithm on every environment for a few hundred steps."""

import logging
import time
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

import numpy as np
import pandas as pd

from ..algorithms.sac_var import SacVarAgent
from ..config.centralized_config import ConfigManager, get_config_manager
from ..config.loader import list_algorithms, resolve_config
from ..envs.registry import get_env_registry
from ..exceptions import NumericError
from ..livemetrics.channel import DropPolicy, MetricChannel
from .experiment import run_experiment

logger = logging.getLogger(__name__)


@dataclass
class SmokeCase:
    algorithm: str
    env: str
    passed: bool
    seconds: float
    message: str = ""
    kind: str = "ok"  # ok | check | numeric | error


@dataclass
class SmokeReport:
    cases: List[SmokeCase] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.cases) and all(case.passed for case in self.cases)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [vars(case) for case in self.cases],
            columns=["algorithm", "env", "passed", "seconds", "kind", "message"],
        )


def _check_run(agent: SacVarAgent, success_rate: float, channel: MetricChannel,
               total_steps: int) -> List[str]:
    problems = []
    if agent.n_updates < 1:
        problems.append("no gradient step was taken")
    if not 0.0 <= success_rate <= 1.0:
        problems.append(f"success_rate {success_rate} outside [0, 1]")
    if not np.all(np.isfinite(agent.parameter_vector())):
        problems.append("non-finite parameters after training")
    frames = channel.drain()
    if len(frames) + channel.dropped != total_steps:
        problems.append(
            f"expected {total_steps} live frames, got {len(frames)} (+{channel.dropped} dropped)"
        )
    elif frames and frames[-1].step != total_steps:
        problems.append(f"last live frame at step {frames[-1].step}, expected {total_steps}")
    return problems


def run_smoke_case(algorithm: str, env: str, manager: Optional[ConfigManager] = None,
                   prepare_agent: Optional[Callable[[SacVarAgent], None]] = None) -> SmokeCase:
    manager = manager or get_config_manager()
    settings = manager.load_config("tests", "smoke")
    total_steps = int(settings["total_steps"])
    tokens = [f"algorithm={algorithm}", f"env={env}", f"algorithm.total_steps={total_steps}"]
    tokens += list(settings.get("overrides") or [])
    channel = MetricChannel(int(settings.get("channel_capacity", 256)), DropPolicy.DROP_OLDEST)

    start = time.perf_counter()
    try:
        tree = resolve_config(tokens, manager)
        result = run_experiment(tree, live_channel=channel, prepare_agent=prepare_agent)
        problems = _check_run(result.agent, result.success_rate, channel, total_steps)
    except NumericError as e:
        logger.debug("Smoke %s/%s numeric failure: %s", algorithm, env, e.diagnostics)
        return SmokeCase(algorithm, env, False, time.perf_counter() - start, str(e), "numeric")
    except Exception as e:  # noqa: BLE001 - reported per combination
        return SmokeCase(algorithm, env, False, time.perf_counter() - start,
                         f"{type(e).__name__}: {e}", "error")
    finally:
        channel.close()

    seconds = time.perf_counter() - start
    if problems:
        return SmokeCase(algorithm, env, False, seconds, "; ".join(problems), "check")
    return SmokeCase(algorithm, env, True, seconds)


def run_smoke(manager: Optional[ConfigManager] = None,
              algorithms: Optional[Sequence[str]] = None,
              envs: Optional[Sequence[str]] = None,
              prepare_agent: Optional[Callable[[SacVarAgent], None]] = None) -> SmokeReport:
    """Run the smoke protocol for each algorithm x environment combination once."""
    manager = manager or get_config_manager()
    algorithms = list(algorithms) if algorithms is not None else list_algorithms(manager)
    envs = list(envs) if envs is not None else get_env_registry().names()

    report = SmokeReport()
    for algorithm in algorithms:
        for env in envs:
            case = run_smoke_case(algorithm, env, manager, prepare_agent)
            logger.info("smoke %s/%s: %s (%.1fs)", algorithm, env,
                        "pass" if case.passed else f"FAIL {case.message}", case.seconds)
            report.cases.append(case)
    return report
