#!/usr/bin/env python3
"""
Entry point for the gcrl CLI application.
"""

import os
from typing import Optional

import click

from ..config.centralized_config import CONFIG_DIR_ENV, ConfigManager
from ..track.file_store import TRACK_ROOT_ENV, default_track_root
from .plotting import plotting_commands
from .run import run_command
from .runs import runs_commands
from .sweep import sweep_command
from .testing import test_commands
from .utils import configure_logging
from .view import view_command


@click.group()
@click.option("--debug", is_flag=True, help="Enable debug mode")
@click.option("--track-root", type=click.Path(file_okay=False),
              help=f"Tracking directory (default: ${TRACK_ROOT_ENV} or ./mlruns)")
@click.option("--config-dir", type=click.Path(exists=True, file_okay=False),
              help=f"Config directory (default: ${CONFIG_DIR_ENV} or the shipped configs)")
@click.pass_context
def cli(ctx: click.Context, debug: bool, track_root: Optional[str],
        config_dir: Optional[str]) -> None:
    """gcrl - goal-conditioned SAC with a critic-variance exploration bonus.

    Available commands:

    \b
    run       - Train one agent from layered config overrides
    sweep     - Run a hyperparameter study
    view      - Live or recorded training dashboard
    test      - Smoke and performance protocols
    plot      - Learning curves of tracked runs
    runs      - List tracked runs
    version   - Show version information

    Use 'gcrl COMMAND --help' for detailed help on each command.

    \b
    Exit codes: 0 success, 1 test failure, 2 configuration error,
    3 numeric error, 4 other error.
    """
    ctx.ensure_object(dict)
    ctx.obj["DEBUG"] = debug
    ctx.obj["TRACK_ROOT"] = track_root or str(default_track_root())
    ctx.obj["CONFIG_DIR"] = config_dir or os.environ.get(CONFIG_DIR_ENV)
    if config_dir:
        ConfigManager.set_base_config_dir(config_dir)
    configure_logging(debug)


cli.add_command(run_command)
cli.add_command(sweep_command)
cli.add_command(view_command)
cli.add_command(test_commands)
cli.add_command(plotting_commands)
cli.add_command(runs_commands)


@cli.command()
def version() -> None:
    """Show version information."""
    from .. import __version__

    click.echo(f"gcrl v{__version__}")


if __name__ == "__main__":
    cli()
