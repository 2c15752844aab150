"""Bounded frame channel between a training loop and its consumers."""

import logging
import threading
import time
from collections import deque
from enum import Enum
from pathlib import Path
from types import TracebackType
from typing import Callable, Deque, Iterator, List, Optional, Type, Union

from ..exceptions import OrderingError, ShapeError, StateError
from .frames import SyncFrame, deserialize_stream, parse_frame, serialize_frame

logger = logging.getLogger(__name__)


class DropPolicy(Enum):
    BLOCK = "block"
    DROP_OLDEST = "drop_oldest"


class _StreamOrder:
    """Strictly increasing steps and a constant metric key set."""

    def __init__(self) -> None:
        self.last_step: Optional[int] = None
        self.keys: Optional[frozenset] = None

    def check(self, frame: SyncFrame) -> None:
        if self.last_step is not None and frame.step <= self.last_step:
            raise OrderingError(
                f"Frame step {frame.step} does not follow step {self.last_step}"
            )
        keys = frozenset(frame.metrics)
        if self.keys is not None and keys != self.keys:
            raise ShapeError(
                f"Metric names changed within a stream: {sorted(keys)} vs {sorted(self.keys)}"
            )
        self.last_step = frame.step
        self.keys = keys


class MetricChannel:
    """Single-producer, single-consumer queue of :class:`SyncFrame`.

    Under ``DROP_OLDEST`` the producer never waits: a full queue discards
    its oldest unconsumed frame. Under ``BLOCK`` the producer waits for room.
    """

    def __init__(self, capacity: int = 256, policy: DropPolicy = DropPolicy.DROP_OLDEST):
        if capacity < 1:
            raise ShapeError(f"Channel capacity must be >= 1, got {capacity}")
        self.capacity = capacity
        self.policy = policy
        self._queue: Deque[SyncFrame] = deque()
        self._cond = threading.Condition()
        self._order = _StreamOrder()
        self._closed = False
        self.dropped = 0

    @property
    def closed(self) -> bool:
        return self._closed

    def emit(self, frame: SyncFrame) -> None:
        with self._cond:
            if self._closed:
                raise StateError("Cannot emit on a closed channel")
            self._order.check(frame)
            if len(self._queue) >= self.capacity:
                if self.policy is DropPolicy.DROP_OLDEST:
                    self._queue.popleft()
                    self.dropped += 1
                else:
                    while len(self._queue) >= self.capacity and not self._closed:
                        self._cond.wait()
                    if self._closed:
                        raise StateError("Channel closed while waiting for room")
            self._queue.append(frame)
            self._cond.notify_all()

    def get(self, timeout: Optional[float] = None) -> Optional[SyncFrame]:
        """Next frame, or None after ``timeout`` seconds or once closed and empty."""
        with self._cond:
            if not self._cond.wait_for(lambda: self._queue or self._closed, timeout):
                return None
            if not self._queue:
                return None
            frame = self._queue.popleft()
            self._cond.notify_all()
            return frame

    def drain(self) -> List[SyncFrame]:
        with self._cond:
            frames = list(self._queue)
            self._queue.clear()
            self._cond.notify_all()
            return frames

    def close(self) -> None:
        with self._cond:
            self._closed = True
            self._cond.notify_all()

    def __iter__(self) -> Iterator[SyncFrame]:
        while True:
            frame = self.get()
            if frame is None:
                return
            yield frame

    def __len__(self) -> int:
        with self._cond:
            return len(self._queue)


class StreamFileWriter:
    """Appends frames to an NDJSON file, one flushed line per frame."""

    def __init__(self, path: Union[str, Path]):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._handle = open(self.path, "a", encoding="utf-8")
        self._order = _StreamOrder()

    def emit(self, frame: SyncFrame) -> None:
        self._order.check(frame)
        self._handle.write(serialize_frame(frame))
        self._handle.flush()

    def close(self) -> None:
        if not self._handle.closed:
            self._handle.close()

    def __enter__(self) -> "StreamFileWriter":
        return self

    def __exit__(self, exc_type: Optional[Type[BaseException]], exc: Optional[BaseException],
                 tb: Optional[TracebackType]) -> None:
        self.close()


def read_stream_file(path: Union[str, Path]) -> List[SyncFrame]:
    return deserialize_stream(Path(path).read_bytes())


def tail_stream(
    path: Union[str, Path],
    poll_interval: float = 0.1,
    idle_timeout: Optional[float] = None,
    should_stop: Optional[Callable[[], bool]] = None,
) -> Iterator[SyncFrame]:
    """Yield frames as complete lines are appended to ``path``.

    Stops after ``idle_timeout`` seconds without new lines, or when
    ``should_stop()`` returns True.
    """
    path = Path(path)
    pending = b""
    position = 0
    last_data = time.monotonic()
    while True:
        if should_stop is not None and should_stop():
            return
        if path.exists():
            with open(path, "rb") as f:
                f.seek(position)
                chunk = f.read()
                position = f.tell()
            if chunk:
                last_data = time.monotonic()
                pending += chunk
                *complete, pending = pending.split(b"\n")
                for line in complete:
                    if line.strip():
                        yield parse_frame(line.decode("utf-8"))
                continue
        if idle_timeout is not None and time.monotonic() - last_data > idle_timeout:
            return
        time.sleep(poll_interval)
