"""Plotting commands."""

from pathlib import Path
from typing import Optional

import click
import matplotlib.pyplot as plt

from ..visualization.plotters import DEFAULT_GROUP_BY, CurvePlotter
from .utils import get_tracker, handle_error


@click.group(name="plot")
def plotting_commands() -> None:
    """Visualization commands."""
    pass


@plotting_commands.command()
@click.option("--experiment", help="Experiment (or study) name; all runs if omitted")
@click.option("--metric", default="success_rate", show_default=True, help="Metric to plot")
@click.option("--group-by", default=DEFAULT_GROUP_BY, show_default=True,
              help="Parameter whose values form the curves")
@click.option("--save", is_flag=True, help="Save the plot")
@click.option("--show", is_flag=True, help="Show the plot")
@click.option("--output", type=click.Path(), help="Output file for --save")
@click.option("--style", default="default", help="Matplotlib style")
@click.pass_context
def curves(ctx: click.Context, experiment: Optional[str], metric: str, group_by: str, save: bool,
           show: bool, output: Optional[str], style: str) -> None:
    """Learning curves (mean ± standard error over runs) per parameter value."""
    debug = ctx.obj.get("DEBUG", False)
    if style != "default":
        plt.style.use(style)
    try:
        table = CurvePlotter.plot_learning_curves_to_file(
            get_tracker(ctx), experiment, metric, group_by, save=save, show=show,
            output_path=Path(output) if output else None,
        )
    except Exception as e:
        ctx.exit(handle_error(e, debug, "plot curves"))

    if table.empty:
        click.echo(f"No finished runs with metric '{metric}'")
        return
    last = table.sort_values("step").groupby("group").tail(1)
    click.echo(last.to_string(index=False))
