"""Step-synchronized live metrics: frames, channels, stream files and the dashboard."""

from .channel import DropPolicy, MetricChannel, StreamFileWriter, read_stream_file, tail_stream
from .dashboard import (
    Dashboard,
    ReplayController,
    available_metrics,
    dashboard_at,
    follow_stream,
    render_grid,
    render_replay,
    replay_stream,
    sparkline,
    watch_channel,
)
from .frames import SyncFrame, deserialize_stream, parse_frame, serialize_frame, serialize_stream

__all__ = [
    "DropPolicy",
    "MetricChannel",
    "StreamFileWriter",
    "read_stream_file",
    "tail_stream",
    "Dashboard",
    "ReplayController",
    "available_metrics",
    "dashboard_at",
    "follow_stream",
    "render_grid",
    "render_replay",
    "replay_stream",
    "sparkline",
    "watch_channel",
    "SyncFrame",
    "deserialize_stream",
    "parse_frame",
    "serialize_frame",
    "serialize_stream",
]
