"""Performance gate: plain SAC must keep solving PointReach on pinned seeds."""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from ..config.centralized_config import ConfigManager, get_config_manager
from ..config.loader import resolve_config
from ..track.file_store import FileTracker
from .experiment import run_experiment

logger = logging.getLogger(__name__)

PERF_EXPERIMENT = "perf"


@dataclass
class PerfReport:
    algorithm: str
    env: str
    threshold: float
    seeds: List[int] = field(default_factory=list)
    success_rates: List[float] = field(default_factory=list)

    @property
    def median(self) -> float:
        return float(np.median(self.success_rates))

    @property
    def passed(self) -> bool:
        return bool(self.success_rates) and self.median >= self.threshold

    def describe(self) -> str:
        rates = ", ".join(f"seed {s}: {r:.3f}" for s, r in zip(self.seeds, self.success_rates))
        verdict = "PASS" if self.passed else "FAIL"
        return (f"{verdict} {self.algorithm} on {self.env}: median success_rate "
                f"{self.median:.3f} (threshold {self.threshold}) [{rates}]")


def run_perf(manager: Optional[ConfigManager] = None, overrides: Sequence[str] = (),
             tracker: Optional[FileTracker] = None,
             total_steps: Optional[int] = None) -> PerfReport:
    """Train once per pinned seed; ``overrides`` are applied last."""
    manager = manager or get_config_manager()
    settings = manager.load_config("tests", "perf")
    steps = int(total_steps if total_steps is not None else settings["total_steps"])
    report = PerfReport(
        algorithm=settings["algorithm"],
        env=settings["env"],
        threshold=float(settings["threshold"]),
    )
    for seed in settings["seeds"]:
        tokens = [
            f"algorithm={report.algorithm}",
            f"env={report.env}",
            f"algorithm.total_steps={steps}",
            f"algorithm.seed={int(seed)}",
        ]
        tokens += list(settings.get("overrides") or []) + list(overrides)
        tree = resolve_config(tokens, manager)
        result = run_experiment(tree, tracker, PERF_EXPERIMENT, run_name=f"perf-seed-{seed}")
        report.seeds.append(int(seed))
        report.success_rates.append(result.success_rate)
        logger.info("perf seed %s: success_rate=%.3f", seed, result.success_rate)
    return report
