"""Experiment tracking on the local file system.

Layout (MLflow FileStore convention)::

    <root>/<experiment_id>/meta.yaml
    <root>/<experiment_id>/<run_id>/meta.yaml
    <root>/<experiment_id>/<run_id>/params/<flattened.key>
    <root>/<experiment_id>/<run_id>/metrics/<name>
    <root>/<experiment_id>/<run_id>/artifacts/

Metric files hold one ``"<timestamp_ms> <value> <step>\\n"`` line per point.
"""

import logging
import os
import time
import uuid
from dataclasses import dataclass
from enum import IntEnum
from pathlib import Path
from types import TracebackType
from typing import Any, Dict, IO, List, Mapping, Optional, Type, Union

import pandas as pd
import yaml
from natsort import natsorted

from ..config.overrides import format_literal
from ..config.tree import ConfigTree
from ..exceptions import NotFoundError, OrderingError, StateError

logger = logging.getLogger(__name__)

TRACK_ROOT_ENV = "GCRL_TRACK_ROOT"
DEFAULT_TRACK_ROOT = "mlruns"
CONFIG_ARTIFACT = "config.yaml"


class RunStatus(IntEnum):
    RUNNING = 1
    SCHEDULED = 2
    FINISHED = 3
    FAILED = 4
    KILLED = 5


def now_ms() -> int:
    return int(time.time() * 1000)


def default_track_root() -> Path:
    return Path(os.getenv(TRACK_ROOT_ENV, DEFAULT_TRACK_ROOT))


@dataclass(frozen=True)
class MetricPoint:
    name: str
    value: float
    step: int
    timestamp: int


@dataclass(frozen=True)
class Experiment:
    experiment_id: str
    name: str
    path: Path


@dataclass(frozen=True)
class RunInfo:
    run_id: str
    experiment_id: str
    run_name: str
    status: RunStatus
    start_time: int
    end_time: Optional[int]
    path: Path


def _write_yaml(path: Path, data: Mapping[str, Any]) -> None:
    with open(path, "w", encoding="utf-8") as f:
        yaml.safe_dump(dict(data), f, sort_keys=False)


def _read_yaml(path: Path) -> Dict[str, Any]:
    with open(path, "r", encoding="utf-8") as f:
        return yaml.safe_load(f) or {}


def parse_metric_lines(text: str, name: str) -> List[MetricPoint]:
    """Parse a metric file body; an unterminated last line is skipped."""
    lines = text.split("\n")
    # everything after the last newline is an in-progress write
    points = []
    for line in lines[:-1]:
        if not line.strip():
            continue
        timestamp, value, step = line.split()
        points.append(MetricPoint(name, float(value), int(step), int(timestamp)))
    return points


class Run:
    """An active run; use as a context manager or call :meth:`end`."""

    def __init__(self, info: RunInfo, meta: Dict[str, Any]):
        self.info = info
        self._meta = meta
        self._handles: Dict[str, IO[str]] = {}
        self._last_steps: Dict[str, int] = {}
        self._active = True

    @property
    def run_id(self) -> str:
        return self.info.run_id

    @property
    def path(self) -> Path:
        return self.info.path

    @property
    def artifacts_dir(self) -> Path:
        return self.info.path / "artifacts"

    @property
    def active(self) -> bool:
        return self._active

    def log_metric(self, name: str, value: float, step: int,
                   timestamp: Optional[int] = None) -> None:
        """Append one metric point as a whole ``<timestamp> <value> <step>`` line.

        :meth:`log_point` takes the same data as a :class:`MetricPoint`.
        """
        if not self._active:
            raise StateError(f"Run {self.run_id} has ended")
        step = int(step)
        if step < 0:
            raise OrderingError(f"Metric '{name}' step must be nonnegative, got {step}")
        if step < self._last_steps.get(name, 0):
            raise OrderingError(
                f"Metric '{name}' step {step} precedes logged step {self._last_steps[name]}"
            )
        handle = self._handles.get(name)
        if handle is None:
            handle = open(self.path / "metrics" / name, "a", encoding="utf-8")
            self._handles[name] = handle
        ts = now_ms() if timestamp is None else int(timestamp)
        handle.write(f"{ts} {float(value)!r} {step}\n")
        handle.flush()
        self._last_steps[name] = step

    def log_point(self, point: MetricPoint) -> None:
        """Append a :class:`MetricPoint`, keeping its timestamp."""
        self.log_metric(point.name, point.value, point.step, timestamp=point.timestamp)

    def log_metrics(self, metrics: Mapping[str, float], step: int) -> None:
        for name, value in metrics.items():
            self.log_metric(name, value, step)

    def log_text(self, relative_path: str, text: str) -> Path:
        """Store a text artifact under ``artifacts/``."""
        path = self.artifacts_dir / relative_path
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        return path

    def flush(self) -> None:
        for handle in self._handles.values():
            handle.flush()

    def end(self, status: RunStatus = RunStatus.FINISHED) -> None:
        if not self._active:
            return
        for handle in self._handles.values():
            handle.close()
        self._handles.clear()
        self._active = False
        self._meta["status"] = int(status)
        self._meta["end_time"] = now_ms()
        _write_yaml(self.path / "meta.yaml", self._meta)
        logger.info("Run %s ended with status %s", self.run_id, status.name)

    def __enter__(self) -> "Run":
        return self

    def __exit__(self, exc_type: Optional[Type[BaseException]], exc: Optional[BaseException],
                 tb: Optional[TracebackType]) -> None:
        self.end(RunStatus.FINISHED if exc_type is None else RunStatus.FAILED)


class FileTracker:
    """Creates and reads runs under one tracking root."""

    def __init__(self, root: Union[str, Path, None] = None):
        self.root = Path(root) if root is not None else default_track_root()

    def experiments(self) -> List[Experiment]:
        if not self.root.exists():
            return []
        found = []
        for meta_path in self.root.glob("*/meta.yaml"):
            meta = _read_yaml(meta_path)
            found.append(Experiment(str(meta["experiment_id"]), meta["name"], meta_path.parent))
        return natsorted(found, key=lambda e: e.experiment_id)

    def get_experiment(self, name: str) -> Experiment:
        for experiment in self.experiments():
            if experiment.name == name:
                return experiment
        raise NotFoundError(f"No experiment named '{name}' under {self.root}")

    def get_or_create_experiment(self, name: str) -> Experiment:
        try:
            return self.get_experiment(name)
        except NotFoundError:
            pass
        ids = [int(e.experiment_id) for e in self.experiments() if e.experiment_id.isdigit()]
        experiment_id = str(max(ids) + 1 if ids else 0)
        path = self.root / experiment_id
        path.mkdir(parents=True, exist_ok=False)
        created = now_ms()
        _write_yaml(
            path / "meta.yaml",
            {
                "artifact_location": (path.resolve()).as_uri(),
                "creation_time": created,
                "experiment_id": experiment_id,
                "last_update_time": created,
                "lifecycle_stage": "active",
                "name": name,
            },
        )
        logger.info("Created experiment '%s' (%s)", name, experiment_id)
        return Experiment(experiment_id, name, path)

    def start_run(self, experiment_name: str, config: Union[ConfigTree, Mapping],
                  run_name: Optional[str] = None) -> Run:
        """Create the run directory, one param file per flattened config key and
        the full config as ``artifacts/config.yaml``."""
        tree = config if isinstance(config, ConfigTree) else ConfigTree(config)
        experiment = self.get_or_create_experiment(experiment_name)
        run_id = uuid.uuid4().hex
        path = experiment.path / run_id
        for sub in ("metrics", "params", "artifacts", "tags"):
            (path / sub).mkdir(parents=True, exist_ok=False)

        for key, value in tree.flatten().items():
            (path / "params" / key).write_text(format_literal(value), encoding="utf-8")
        (path / "artifacts" / CONFIG_ARTIFACT).write_text(tree.to_yaml(), encoding="utf-8")

        start = now_ms()
        run_name = run_name or run_id[:8]
        meta = {
            "artifact_uri": (path / "artifacts").resolve().as_uri(),
            "end_time": None,
            "entry_point_name": "",
            "experiment_id": experiment.experiment_id,
            "lifecycle_stage": "active",
            "run_id": run_id,
            "run_name": run_name,
            "run_uuid": run_id,
            "source_name": "",
            "source_type": 4,
            "source_version": "",
            "start_time": start,
            "status": int(RunStatus.RUNNING),
            "tags": [],
            "user_id": os.getenv("USER", "unknown"),
        }
        _write_yaml(path / "meta.yaml", meta)
        info = RunInfo(run_id, experiment.experiment_id, run_name, RunStatus.RUNNING, start, None,
                       path)
        logger.info("Started run %s in experiment '%s'", run_id, experiment_name)
        return Run(info, meta)

    def _run_info(self, path: Path) -> RunInfo:
        meta = _read_yaml(path / "meta.yaml")
        return RunInfo(
            run_id=meta["run_id"],
            experiment_id=str(meta["experiment_id"]),
            run_name=meta.get("run_name", ""),
            status=RunStatus(int(meta["status"])),
            start_time=int(meta["start_time"]),
            end_time=None if meta.get("end_time") is None else int(meta["end_time"]),
            path=path,
        )

    def list_runs(self, experiment_name: Optional[str] = None) -> List[RunInfo]:
        """Runs ordered by start time."""
        experiments = (
            [self.get_experiment(experiment_name)] if experiment_name else self.experiments()
        )
        runs = []
        for experiment in experiments:
            for meta_path in experiment.path.glob("*/meta.yaml"):
                runs.append(self._run_info(meta_path.parent))
        return sorted(runs, key=lambda r: (r.start_time, r.run_id))

    def find_run(self, run_id: str) -> RunInfo:
        for experiment in self.experiments():
            path = experiment.path / run_id
            if (path / "meta.yaml").exists():
                return self._run_info(path)
        raise NotFoundError(f"Unknown run '{run_id}' under {self.root}")

    def read_params(self, run_id: str) -> Dict[str, str]:
        params_dir = self.find_run(run_id).path / "params"
        return {p.name: p.read_text(encoding="utf-8") for p in natsorted(params_dir.iterdir())}

    def read_config(self, run_id: str) -> ConfigTree:
        path = self.find_run(run_id).path / "artifacts" / CONFIG_ARTIFACT
        return ConfigTree.from_yaml(path.read_text(encoding="utf-8"))

    def metric_names(self, run_id: str) -> List[str]:
        return natsorted(p.name for p in (self.find_run(run_id).path / "metrics").iterdir())

    def read_history(self, run_id: str, metric_name: str) -> List[MetricPoint]:
        path = self.find_run(run_id).path / "metrics" / metric_name
        if not path.exists():
            return []
        return parse_metric_lines(path.read_text(encoding="utf-8"), metric_name)

    def history_frame(self, run_id: str, metric_names: Optional[List[str]] = None) -> pd.DataFrame:
        """Long-format frame with columns ``metric, step, value, timestamp``."""
        names = metric_names or self.metric_names(run_id)
        rows = [
            {"metric": p.name, "step": p.step, "value": p.value, "timestamp": p.timestamp}
            for name in names
            for p in self.read_history(run_id, name)
        ]
        return pd.DataFrame(rows, columns=["metric", "step", "value", "timestamp"])


def read_history(root: Union[str, Path], run_id: str, metric_name: str) -> List[MetricPoint]:
    return FileTracker(root).read_history(run_id, metric_name)
