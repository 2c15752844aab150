"""Study reports: per-configuration table, best configuration, trial records."""

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
import pandas as pd
from scipy import stats
from tabulate import tabulate

from .study import MAXIMIZE, StudyState, TrialStatus

REPORT_FILE = "report.json"
SUMMARY_FILE = "summary.csv"
RANKING_FILE = "ranking.md"

POLICY_DESCRIPTION = (
    "repeat-and-prune: {min} trial(s) per configuration round-robin, then the best "
    "mean {metric} ({mode}, {direction}) until {max} per configuration or {budget} total; "
    "ties go to the lowest configuration index; failed trials use budget only"
)

SUMMARY_COLUMNS = [
    "config_index", "params", "n_trials", "n_complete", "n_failed", "n_pruned", "mean", "sem",
]


def _format_score(value: float) -> str:
    return "-" if math.isnan(value) else f"{value:.4f}"


def _json_value(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, (np.floating, np.integer)):
        return _json_value(value.item())
    return value


@dataclass
class StudyReport:
    study_name: str
    direction: str
    policy: str
    summary: pd.DataFrame
    trials: List[Dict[str, Any]] = field(default_factory=list)
    best_index: Optional[int] = None
    best_params: Optional[Dict[str, Any]] = None

    @classmethod
    def from_state(cls, state: StudyState) -> "StudyReport":
        cfg = state.config
        rows = []
        for index, params in enumerate(state.space.configurations()):
            trials = [t for t in state.trials if t.config_index == index]
            values = state.objectives(index)
            rows.append({
                "config_index": index,
                "params": state.space.describe(params),
                "n_trials": len(trials),
                "n_complete": len(values),
                "n_failed": sum(t.status is TrialStatus.FAILED for t in trials),
                "n_pruned": sum(t.status is TrialStatus.PRUNED for t in trials),
                "mean": math.fsum(values) / len(values) if values else float("nan"),
                "sem": float(stats.sem(values)) if len(values) >= 2 else float("nan"),
            })
        summary = pd.DataFrame(rows, columns=SUMMARY_COLUMNS)

        best_index = None
        for index in range(len(state.space)):
            mean = state.mean_objective(index)
            if mean is None:
                continue
            if best_index is None or cfg.better(mean, state.mean_objective(best_index)):
                best_index = index

        policy = POLICY_DESCRIPTION.format(
            min=cfg.min_trials_per_param, max=cfg.max_trials_per_param, budget=cfg.max_trials,
            metric=cfg.objective_metric, mode=cfg.objective_mode, direction=cfg.direction,
        )
        return cls(
            study_name=cfg.study_name,
            direction=cfg.direction,
            policy=policy,
            summary=summary,
            trials=[{**asdict(t), "status": t.status.value} for t in state.trials],
            best_index=best_index,
            best_params=None if best_index is None else state.space[best_index],
        )

    def ranked(self) -> pd.DataFrame:
        """Configurations that ran, best mean first (unscored ones last)."""
        ran = self.summary[self.summary["n_trials"] > 0]
        return ran.sort_values(
            by=["mean", "config_index"],
            ascending=[self.direction != MAXIMIZE, True],
            na_position="last",
            kind="mergesort",
        )

    def to_table(self) -> str:
        lines = [f"Study {self.study_name} ({len(self.trials)} trials)", self.policy, ""]
        lines.append(self.ranked().to_string(index=False, float_format=lambda v: f"{v:.4f}"))
        if self.best_params is not None:
            lines.append("")
            lines.append(f"Best configuration [{self.best_index}]: " + ", ".join(
                f"{k.lstrip('+')}={v}" for k, v in self.best_params.items()))
        return "\n".join(lines)

    def to_markdown(self) -> str:
        """Ranked configurations as a Markdown table, for pasting into the docs."""
        rows = [
            [rank, row.params, row.n_trials, row.n_complete, _format_score(row.mean),
             _format_score(row.sem)]
            for rank, row in enumerate(self.ranked().itertuples(index=False), start=1)
        ]
        table = tabulate(rows, headers=["rank", "configuration", "trials", "complete",
                                        "mean", "sem"], tablefmt="github",
                         disable_numparse=True)
        return f"{self.policy}\n\n{table}\n"

    def to_dict(self) -> Dict[str, Any]:
        configurations = [
            {k: _json_value(v) for k, v in row.items()}
            for row in self.summary.to_dict(orient="records")
        ]
        return {
            "study_name": self.study_name,
            "direction": self.direction,
            "policy": self.policy,
            "best_index": self.best_index,
            "best_params": self.best_params,
            "configurations": configurations,
            "trials": [{k: _json_value(v) for k, v in t.items()} for t in self.trials],
        }

    def save(self, directory: Union[str, Path]) -> Path:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        (directory / REPORT_FILE).write_text(
            json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
        self.summary.to_csv(directory / SUMMARY_FILE, index=False)
        (directory / RANKING_FILE).write_text(self.to_markdown(), encoding="utf-8")
        return directory
