"""Live and recorded dashboards."""

from pathlib import Path
from typing import Optional

import click

from ..exceptions import NotFoundError, UnknownMetricError
from ..harness.experiment import STREAM_ARTIFACT
from ..livemetrics.channel import read_stream_file
from ..livemetrics.dashboard import (
    DEFAULT_WINDOW,
    available_metrics,
    dashboard_at,
    follow_stream,
    replay_stream,
)
from ..track.file_store import FileTracker
from .run import parse_metric_names
from .utils import get_tracker, handle_error


def find_stream(target: str, tracker: FileTracker) -> Path:
    """A stream file, a run directory, or a run id under the tracker root."""
    path = Path(target)
    if path.is_file():
        return path
    if path.is_dir():
        for candidate in (path / "artifacts" / STREAM_ARTIFACT, path / STREAM_ARTIFACT):
            if candidate.exists():
                return candidate
        # a run that is still starting up may not have written it yet
        return path / "artifacts" / STREAM_ARTIFACT
    return tracker.find_run(target).path / "artifacts" / STREAM_ARTIFACT


@click.command(name="view")
@click.argument("target")
@click.option("--follow", "mode", flag_value="follow", help="Tail a stream that is being written")
@click.option("--replay", "mode", flag_value="replay", default=True,
              help="Play back a recorded stream (default)")
@click.option("--metrics", help="Comma-separated metric names to show")
@click.option("--window", type=int, default=DEFAULT_WINDOW, show_default=True,
              help="Sparkline history in steps")
@click.option("--refresh-hz", type=float, help="Redraw rate")
@click.option("--idle-timeout", type=float, help="Stop following after this many idle seconds")
@click.option("--snapshot", is_flag=True, help="Print the last frame's dashboard and exit")
@click.pass_context
def view_command(ctx: click.Context, target: str, mode: str, metrics: Optional[str],
                 window: int, refresh_hz: Optional[float], idle_timeout: Optional[float],
                 snapshot: bool) -> None:
    """Show the dashboard of a run's live stream.

    TARGET is a run id, a run directory or an NDJSON stream file.
    """
    debug = ctx.obj.get("DEBUG", False)
    metric_names = parse_metric_names(metrics)
    try:
        path = find_stream(target, get_tracker(ctx))
        if mode == "follow":
            follow_stream(path, metric_names, refresh_hz or 4.0, window,
                          idle_timeout=idle_timeout)
            return
        if not path.exists():
            raise NotFoundError(f"No recorded stream at {path} (run with algorithm.record_stream=true)")
        frames = read_stream_file(path)
        if metric_names and frames:
            known = available_metrics(frames)
            unknown = [name for name in metric_names if name not in known]
            if unknown:
                raise UnknownMetricError(unknown, known)
        if snapshot:
            if frames:
                click.echo(dashboard_at(frames, len(frames) - 1, metric_names, window).render_text())
            else:
                click.echo(f"{path}: empty stream")
            return
        replay_stream(frames, metric_names, refresh_hz or 10.0, window)
    except Exception as e:
        ctx.exit(handle_error(e, debug, "view"))
