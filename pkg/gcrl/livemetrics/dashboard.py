"""Terminal dashboard: scene drawing on the left, metric sparklines on the right."""

import io
import logging
import queue
import sys
import threading
import time
from collections import deque
from pathlib import Path
from typing import Deque, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import click
import numpy as np
from rich.console import Console, Group
from rich.live import Live
from rich.panel import Panel
from rich.table import Table
from rich.text import Text

from ..envs.base import RenderFrame
from ..exceptions import UnknownMetricError
from .channel import MetricChannel, tail_stream
from .frames import SyncFrame

logger = logging.getLogger(__name__)

SPARK_CHARS = "▁▂▃▄▅▆▇█"
DEFAULT_WINDOW = 200
SPARK_WIDTH = 40
GRID_SIZE = (33, 17)


def sparkline(values: Sequence[float], width: int = SPARK_WIDTH) -> str:
    """Bucket ``values`` into at most ``width`` columns (bucket max) and draw them."""
    if len(values) == 0:
        return ""
    data = np.asarray(values, dtype=np.float64)
    if data.size > width:
        data = np.array([bucket.max() for bucket in np.array_split(data, width)])
    lo, hi = float(data.min()), float(data.max())
    span = hi - lo if hi != lo else 1.0
    return "".join(SPARK_CHARS[min(int((v - lo) / span * 7), 7)] for v in data)


def render_grid(frame: RenderFrame, size: Tuple[int, int] = GRID_SIZE) -> List[str]:
    """Character drawing of the scene.

    ``.`` platform, ``G`` goal, ``B`` block (``x`` once fallen), ``A`` agent.
    The view extends 20% beyond the platform on every side.
    """
    width, height = size
    lo, hi = frame.bounds
    margin = 0.2 * (hi - lo)
    view_lo, view_hi = lo - margin, hi + margin
    span = view_hi - view_lo

    def cell(x: float, y: float) -> Tuple[int, int]:
        col = int(round((x - view_lo) / span * (width - 1)))
        row = int(round((view_hi - y) / span * (height - 1)))
        return min(max(row, 0), height - 1), min(max(col, 0), width - 1)

    grid = []
    for row in range(height):
        y = view_hi - row / (height - 1) * span
        line = []
        for col in range(width):
            x = view_lo + col / (width - 1) * span
            line.append("." if lo <= x <= hi and lo <= y <= hi else " ")
        grid.append(line)

    def put(position: Optional[List[float]], glyph: str) -> None:
        if position is not None:
            row, col = cell(position[0], position[1])
            grid[row][col] = glyph

    put(frame.goal, "G")
    fallen = frame.block_z is not None and frame.block_z < 0.0
    put(frame.block, "x" if fallen else "B")
    put(frame.agent, "A")
    return ["".join(line) for line in grid]


def available_metrics(frames: Iterable[SyncFrame]) -> List[str]:
    for frame in frames:
        return sorted(frame.metrics)
    return []


class Dashboard:
    """Rolling state of one stream and its rich rendering."""

    def __init__(self, metric_names: Optional[Sequence[str]] = None,
                 window: int = DEFAULT_WINDOW, grid_size: Tuple[int, int] = GRID_SIZE):
        self.requested = list(metric_names or [])
        self.metric_names: List[str] = list(self.requested)
        self.window = window
        self.grid_size = grid_size
        self.history: Dict[str, Deque[float]] = {}
        self.frame: Optional[SyncFrame] = None

    def update(self, frame: SyncFrame) -> None:
        if self.frame is None:
            self._select_metrics(frame)
        self.frame = frame
        for name in self.metric_names:
            self.history[name].append(frame.metrics[name])

    def _select_metrics(self, frame: SyncFrame) -> None:
        available = sorted(frame.metrics)
        missing = [name for name in self.requested if name not in frame.metrics]
        if missing:
            raise UnknownMetricError(missing, available)
        self.metric_names = list(self.requested) or available
        self.history = {name: deque(maxlen=self.window) for name in self.metric_names}

    def reset(self) -> None:
        self.frame = None
        self.history = {}

    def renderable(self) -> Table:
        layout = Table.grid(padding=(0, 1))
        layout.add_column()
        layout.add_column()
        if self.frame is None:
            layout.add_row(Panel(Text("waiting for frames..."), title="scene"), Panel("", title="metrics"))
            return layout

        frame = self.frame
        scene = Text("\n".join(render_grid(frame.env_frame, self.grid_size)))
        scene.append(f"\nstep {frame.step}  episode {frame.episode}")
        lines = [Text(f"step {frame.step}")]
        label_width = max(len(name) for name in self.metric_names) if self.metric_names else 0
        for name in self.metric_names:
            values = self.history[name]
            lines.append(
                Text(f"{name:<{label_width}} {sparkline(list(values)):<{SPARK_WIDTH}} {values[-1]:.4g}")
            )
        layout.add_row(
            Panel(scene, title=f"{frame.env_frame.env} step {frame.step}"),
            Panel(Group(*lines), title=f"metrics step {frame.step} (last {self.window})"),
        )
        return layout

    def render_text(self, width: int = 140) -> str:
        """Plain-text capture of the current rendering."""
        console = Console(file=io.StringIO(), width=width, record=True, color_system=None)
        console.print(self.renderable())
        return console.export_text()


def render_replay(frames: Sequence[SyncFrame], metric_names: Optional[Sequence[str]] = None,
                  window: int = DEFAULT_WINDOW, width: int = 140) -> List[str]:
    """Text capture of every frame of a replay, in order."""
    dashboard = Dashboard(metric_names, window)
    outputs = []
    for frame in frames:
        dashboard.update(frame)
        outputs.append(dashboard.render_text(width))
    return outputs


def _refresh_loop(frames: Iterable[SyncFrame], dashboard: Dashboard, refresh_hz: float,
                  console: Optional[Console]) -> Dashboard:
    period = 1.0 / refresh_hz
    with Live(dashboard.renderable(), console=console, auto_refresh=False) as live:
        last = 0.0
        for frame in frames:
            dashboard.update(frame)
            if time.monotonic() - last >= period:
                live.update(dashboard.renderable(), refresh=True)
                last = time.monotonic()
        live.update(dashboard.renderable(), refresh=True)
    return dashboard


def follow_stream(path: Union[str, Path], metric_names: Optional[Sequence[str]] = None,
                  refresh_hz: float = 4.0, window: int = DEFAULT_WINDOW,
                  console: Optional[Console] = None,
                  idle_timeout: Optional[float] = None) -> Dashboard:
    """Live view of a stream file that is still being written."""
    frames = tail_stream(path, poll_interval=min(0.1, 1.0 / refresh_hz), idle_timeout=idle_timeout)
    return _refresh_loop(frames, Dashboard(metric_names, window), refresh_hz, console)


def watch_channel(channel: MetricChannel, metric_names: Optional[Sequence[str]] = None,
                  refresh_hz: float = 4.0, window: int = DEFAULT_WINDOW,
                  console: Optional[Console] = None) -> Dashboard:
    """Live view fed by an in-process channel until it is closed."""
    return _refresh_loop(iter(channel), Dashboard(metric_names, window), refresh_hz, console)


class ReplayController:
    """Playback position over a recorded stream.

    Keys: space pause/resume, ``.``/``,`` one frame forward/back, ``]``/``[``
    jump 100 frames, ``g``/``G`` first/last frame, ``q`` quit.
    """

    SEEK = 100

    def __init__(self, n_frames: int):
        self.n_frames = n_frames
        self.position = 0
        self.paused = False
        self.quit = False

    def _seek(self, delta: int) -> None:
        self.position = min(max(self.position + delta, 0), self.n_frames - 1)

    def handle_key(self, key: str) -> None:
        if key == " ":
            self.paused = not self.paused
        elif key == ".":
            self._seek(1)
        elif key == ",":
            self._seek(-1)
        elif key == "]":
            self._seek(self.SEEK)
        elif key == "[":
            self._seek(-self.SEEK)
        elif key == "g":
            self.position = 0
        elif key == "G":
            self.position = self.n_frames - 1
        elif key in ("q", "Q"):
            self.quit = True

    def tick(self) -> bool:
        """Advance when playing; False once playback is over."""
        if self.quit:
            return False
        if not self.paused:
            if self.position >= self.n_frames - 1:
                return False
            self.position += 1
        return True


def dashboard_at(frames: Sequence[SyncFrame], index: int, metric_names: Optional[Sequence[str]],
                 window: int = DEFAULT_WINDOW) -> Dashboard:
    """Dashboard state as it would be after playing ``frames[:index + 1]``."""
    dashboard = Dashboard(metric_names, window)
    for frame in frames[max(0, index - window + 1): index + 1]:
        dashboard.update(frame)
    return dashboard


def _key_reader(keys: "queue.Queue[str]", stop: threading.Event) -> None:
    while not stop.is_set():
        try:
            keys.put(click.getchar())
        except (EOFError, KeyboardInterrupt):
            keys.put("q")
            return


def replay_stream(frames: Sequence[SyncFrame], metric_names: Optional[Sequence[str]] = None,
                  refresh_hz: float = 10.0, window: int = DEFAULT_WINDOW,
                  console: Optional[Console] = None, interactive: Optional[bool] = None) -> Dashboard:
    """Play a recorded stream; keyboard navigation when attached to a terminal."""
    if not frames:
        return Dashboard(metric_names, window)
    Dashboard(metric_names, window).update(frames[0])  # validates metric names up front
    interactive = sys.stdin.isatty() if interactive is None else interactive
    controller = ReplayController(len(frames))
    keys: "queue.Queue[str]" = queue.Queue()
    stop = threading.Event()
    if interactive:
        threading.Thread(target=_key_reader, args=(keys, stop), daemon=True).start()

    dashboard = dashboard_at(frames, 0, metric_names, window)
    with Live(dashboard.renderable(), console=console, auto_refresh=False) as live:
        shown = 0
        while True:
            while not keys.empty():
                controller.handle_key(keys.get_nowait())
            if controller.position != shown:
                if controller.position == shown + 1:
                    dashboard.update(frames[controller.position])
                else:
                    dashboard = dashboard_at(frames, controller.position, metric_names, window)
                shown = controller.position
                live.update(dashboard.renderable(), refresh=True)
            if not controller.tick():
                break
            if controller.paused or interactive:
                time.sleep(1.0 / refresh_hz)
    stop.set()
    return dashboard
