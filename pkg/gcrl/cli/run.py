"""Training commands."""

import threading
from typing import Any, Dict, List, Optional, Sequence, Tuple

import click

from ..algorithms.training import METRIC_NAMES
from ..config.loader import resolve_config
from ..config.tree import ConfigTree
from ..exceptions import UnknownMetricError
from ..harness.experiment import RunResult, run_experiment
from ..livemetrics.channel import DropPolicy, MetricChannel
from ..livemetrics.dashboard import watch_channel
from ..track.file_store import FileTracker
from .utils import get_tracker, handle_error

LIVE_METRICS = METRIC_NAMES + ("q_variance",)


def parse_metric_names(metrics: Optional[str]) -> Optional[List[str]]:
    if not metrics:
        return None
    return [name.strip() for name in metrics.split(",") if name.strip()]


def _run_live(tree: ConfigTree, tracker: FileTracker, experiment: Optional[str],
              save_checkpoint: bool, metric_names: Optional[Sequence[str]]) -> RunResult:
    """Train on a worker thread while the dashboard reads the channel."""
    if metric_names:
        unknown = [name for name in metric_names if name not in LIVE_METRICS]
        if unknown:
            raise UnknownMetricError(unknown, list(LIVE_METRICS))
    channel = MetricChannel(policy=DropPolicy.DROP_OLDEST)
    outcome: Dict[str, Any] = {}

    def target() -> None:
        try:
            outcome["result"] = run_experiment(tree, tracker, experiment,
                                               save_checkpoint=save_checkpoint,
                                               live_channel=channel)
        except Exception as e:  # noqa: BLE001 - re-raised on the main thread
            outcome["error"] = e
        finally:
            channel.close()

    worker = threading.Thread(target=target, name="gcrl-train", daemon=True)
    worker.start()
    watch_channel(channel, metric_names)
    worker.join()
    if "error" in outcome:
        raise outcome["error"]
    return outcome["result"]


@click.command(name="run")
@click.argument("overrides", nargs=-1)
@click.option("--experiment", help="Experiment name (default: <algorithm>_<env>)")
@click.option("--save-checkpoint/--no-save-checkpoint", default=True,
              help="Save networks and optimizer states as a run artifact")
@click.option("--live", is_flag=True, help="Show the live dashboard while training")
@click.option("--metrics", help="Comma-separated metrics for the live dashboard")
@click.pass_context
def run_command(ctx: click.Context, overrides: Tuple[str, ...], experiment: Optional[str],
                save_checkpoint: bool, live: bool, metrics: Optional[str]) -> None:
    """Train one agent.

    \b
    Examples:
      gcrl run algorithm=sac_var env=PointReach-v0 algorithm.total_steps=1000
      gcrl run env=PlanarPush-v0 ++algorithm.weight_critic_var=0.75
    """
    debug = ctx.obj.get("DEBUG", False)
    try:
        tree = resolve_config(overrides)
        tracker = get_tracker(ctx)
        if live:
            result = _run_live(tree, tracker, experiment, save_checkpoint,
                               parse_metric_names(metrics))
        else:
            result = run_experiment(tree, tracker, experiment, save_checkpoint=save_checkpoint)
    except Exception as e:
        ctx.exit(handle_error(e, debug, "run"))

    click.echo(f"run_id: {result.run_id}")
    click.echo(f"run_dir: {result.path}")
    click.echo(f"success_rate: {result.success_rate:.4f}")
