"""Common utilities for CLI commands."""

import logging

import click
from rich.console import Console
from rich.logging import RichHandler

from ..exceptions import ConfigError, NumericError
from ..track.file_store import FileTracker

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_ERROR = 4


def configure_logging(debug: bool = False) -> None:
    """Route ``gcrl`` loggers to a rich handler on stderr."""
    logger = logging.getLogger("gcrl")
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
    handler = RichHandler(console=Console(stderr=True), show_path=debug, rich_tracebacks=debug)
    handler.setFormatter(logging.Formatter("%(message)s", datefmt="[%X]"))
    logger.addHandler(handler)
    logger.setLevel(logging.DEBUG if debug else logging.INFO)
    logger.propagate = False


def exit_code_for(e: BaseException) -> int:
    if isinstance(e, ConfigError):
        return EXIT_CONFIG
    if isinstance(e, NumericError):
        return EXIT_NUMERIC
    return EXIT_ERROR


def handle_error(e: Exception, debug: bool = False, context: str = "") -> int:
    """Standardized error reporting; returns the exit code for ``e``."""
    if context:
        click.echo(f"  Error in {context}: {e}", err=True)
    else:
        click.echo(f"  Error: {e}", err=True)

    if isinstance(e, NumericError) and e.diagnostics:
        for key, value in e.diagnostics.items():
            click.echo(f"    {key}: {value}", err=True)

    if debug:
        import traceback

        click.echo(traceback.format_exc(), err=True)
    return exit_code_for(e)


def get_tracker(ctx: click.Context) -> FileTracker:
    return FileTracker(ctx.obj["TRACK_ROOT"])
