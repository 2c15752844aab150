"""Smoke and performance protocols."""

from typing import Optional, Tuple

import click

from ..harness.perf import run_perf
from ..harness.smoke import run_smoke
from .utils import EXIT_FAILURE, get_tracker, handle_error


@click.group(name="test")
def test_commands() -> None:
    """Smoke and performance protocols."""
    pass


@test_commands.command()
@click.option("--algorithm", "algorithms", multiple=True, help="Restrict to these algorithms")
@click.option("--env", "envs", multiple=True, help="Restrict to these environments")
@click.pass_context
def smoke(ctx: click.Context, algorithms: Tuple[str, ...], envs: Tuple[str, ...]) -> None:
    """Short training run for every algorithm x environment combination."""
    debug = ctx.obj.get("DEBUG", False)
    try:
        report = run_smoke(algorithms=algorithms or None, envs=envs or None)
    except Exception as e:
        ctx.exit(handle_error(e, debug, "smoke"))

    frame = report.to_frame()
    frame["seconds"] = frame["seconds"].map(lambda s: f"{s:.1f}")
    click.echo(frame.to_string(index=False))
    n_failed = sum(not case.passed for case in report.cases)
    if n_failed:
        click.echo(f"\n{n_failed} of {len(report.cases)} combination(s) failed", err=True)
        ctx.exit(EXIT_FAILURE)
    click.echo(f"\nAll {len(report.cases)} combinations passed")


@test_commands.command()
@click.argument("overrides", nargs=-1)
@click.option("--total-steps", type=int, help="Override the pinned step budget")
@click.pass_context
def perf(ctx: click.Context, overrides: Tuple[str, ...], total_steps: Optional[int]) -> None:
    """Train plain SAC on the pinned seeds and check the median success rate.

    OVERRIDES are applied after the pinned settings, e.g. algorithm.gamma=0.
    """
    debug = ctx.obj.get("DEBUG", False)
    try:
        report = run_perf(overrides=overrides, tracker=get_tracker(ctx), total_steps=total_steps)
    except Exception as e:
        ctx.exit(handle_error(e, debug, "perf"))

    click.echo(report.describe())
    if not report.passed:
        ctx.exit(EXIT_FAILURE)
