"""Browse tracked runs."""

from typing import Optional

import click
import pandas as pd

from .utils import get_tracker, handle_error


@click.group(name="runs")
def runs_commands() -> None:
    """Tracked run commands."""
    pass


@runs_commands.command(name="list")
@click.option("--experiment", help="Only runs of this experiment")
@click.option("--metric", default="success_rate", show_default=True,
              help="Metric whose last value is shown")
@click.pass_context
def list_runs(ctx: click.Context, experiment: Optional[str], metric: str) -> None:
    """List runs with status and the last value of a metric."""
    debug = ctx.obj.get("DEBUG", False)
    try:
        tracker = get_tracker(ctx)
        names = {e.experiment_id: e.name for e in tracker.experiments()}
        rows = []
        for run in tracker.list_runs(experiment):
            history = tracker.read_history(run.run_id, metric)
            rows.append({
                "experiment": names.get(run.experiment_id, run.experiment_id),
                "run_id": run.run_id,
                "run_name": run.run_name,
                "status": run.status.name,
                metric: history[-1].value if history else float("nan"),
            })
    except Exception as e:
        ctx.exit(handle_error(e, debug, "runs list"))

    if not rows:
        click.echo(f"No runs under {tracker.root}")
        return
    click.echo(pd.DataFrame(rows).to_string(index=False))
