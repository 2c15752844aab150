"""Learning-curve plots over tracked runs."""

import logging
from pathlib import Path
from typing import List, Optional, Union

import matplotlib.pyplot as plt
import pandas as pd
from natsort import natsorted
from scipy import stats

from ..track.file_store import FileTracker, RunStatus

logger = logging.getLogger(__name__)

DEFAULT_GROUP_BY = "algorithm.weight_critic_var"
MISSING_GROUP = "default"


class CurvePlotter:
    """Mean ± standard error curves of one metric, one curve per parameter value."""

    @staticmethod
    def collect_curves(tracker: FileTracker, experiment_name: Optional[str], metric: str,
                       group_by: str = DEFAULT_GROUP_BY,
                       finished_only: bool = True) -> pd.DataFrame:
        """Long frame with columns ``run_id, group, step, value``."""
        frames: List[pd.DataFrame] = []
        for run in tracker.list_runs(experiment_name):
            if finished_only and run.status is not RunStatus.FINISHED:
                continue
            history = tracker.history_frame(run.run_id, [metric])
            if history.empty:
                continue
            group = tracker.read_params(run.run_id).get(group_by, MISSING_GROUP)
            frames.append(pd.DataFrame({
                "run_id": run.run_id,
                "group": group,
                "step": history["step"].to_numpy(),
                "value": history["value"].to_numpy(),
            }))
        if not frames:
            return pd.DataFrame(columns=["run_id", "group", "step", "value"])
        return pd.concat(frames, ignore_index=True)

    @staticmethod
    def curve_statistics(curves: pd.DataFrame) -> pd.DataFrame:
        """Per group and step: ``mean``, ``sem`` (0 for a single run) and ``n``."""
        grouped = curves.groupby(["group", "step"])["value"]
        table = grouped.agg(
            mean="mean",
            sem=lambda v: float(stats.sem(v)) if len(v) > 1 else 0.0,
            n="count",
        ).reset_index()
        return table

    @staticmethod
    def plot_learning_curves(table: pd.DataFrame, metric: str, group_by: str = DEFAULT_GROUP_BY,
                             ax: Optional[plt.Axes] = None, show_grid: bool = True) -> plt.Axes:
        if ax is None:
            ax = plt.gca()
        for group in natsorted(table["group"].unique()):
            part = table[table["group"] == group].sort_values("step")
            steps = part["step"].to_numpy()
            mean = part["mean"].to_numpy()
            sem = part["sem"].to_numpy()
            line, = ax.plot(steps, mean, label=f"{group_by.split('.')[-1]}={group}")
            ax.fill_between(steps, mean - sem, mean + sem, color=line.get_color(), alpha=0.2)
        ax.set_xlabel("environment steps")
        ax.set_ylabel(metric)
        ax.grid(show_grid)
        if len(table):
            ax.legend()
        return ax

    @staticmethod
    def plot_learning_curves_to_file(tracker: FileTracker, experiment_name: Optional[str],
                                     metric: str = "success_rate",
                                     group_by: str = DEFAULT_GROUP_BY,
                                     save: bool = False, show: bool = False,
                                     output_path: Union[str, Path, None] = None) -> pd.DataFrame:
        """Plot, then save and/or show; returns the statistics table."""
        curves = CurvePlotter.collect_curves(tracker, experiment_name, metric, group_by)
        table = CurvePlotter.curve_statistics(curves) if len(curves) else pd.DataFrame(
            columns=["group", "step", "mean", "sem", "n"])
        fig, ax = plt.subplots(figsize=(8, 5))
        CurvePlotter.plot_learning_curves(table, metric, group_by, ax)
        ax.set_title(f"{experiment_name or 'all experiments'}: {metric}")

        if save:
            output_path = Path(output_path or f"{experiment_name or 'runs'}_{metric}.png")
            output_path.parent.mkdir(parents=True, exist_ok=True)
            fig.savefig(output_path, dpi=300, bbox_inches="tight")
            logger.info("Saved learning curves to %s", output_path)
        if show:
            plt.show()
        plt.close(fig)
        return table

    @staticmethod
    def final_values(curves: pd.DataFrame) -> pd.DataFrame:
        """Last logged value per run, e.g. for ranking groups."""
        if curves.empty:
            return curves
        last = curves.sort_values("step").groupby("run_id").tail(1)
        return last.sort_values(["group", "run_id"]).reset_index(drop=True)
