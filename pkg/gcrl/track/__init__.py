"""File-based experiment tracking in the MLflow FileStore layout."""

from .file_store import (
    DEFAULT_TRACK_ROOT,
    TRACK_ROOT_ENV,
    Experiment,
    FileTracker,
    MetricPoint,
    Run,
    RunInfo,
    RunStatus,
    default_track_root,
    parse_metric_lines,
    read_history,
)

__all__ = [
    "DEFAULT_TRACK_ROOT",
    "TRACK_ROOT_ENV",
    "Experiment",
    "FileTracker",
    "MetricPoint",
    "Run",
    "RunInfo",
    "RunStatus",
    "default_track_root",
    "parse_metric_lines",
    "read_history",
]
