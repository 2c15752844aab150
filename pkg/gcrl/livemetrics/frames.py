"""Step-synchronized frames and their NDJSON encoding.

Each line is one compact JSON object with keys in the order
``step, episode, env_frame, metrics``; metric names are sorted.
"""

import json
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Union

from ..envs.base import RenderFrame


@dataclass
class SyncFrame:
    """Render state and metric values produced at one global step."""

    step: int
    episode: int
    env_frame: RenderFrame
    metrics: Dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "step": self.step,
            "episode": self.episode,
            "env_frame": self.env_frame.to_dict(),
            "metrics": {name: float(self.metrics[name]) for name in sorted(self.metrics)},
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SyncFrame":
        return cls(
            step=int(data["step"]),
            episode=int(data["episode"]),
            env_frame=RenderFrame.from_dict(data["env_frame"]),
            metrics={str(k): float(v) for k, v in data["metrics"].items()},
        )


def serialize_frame(frame: SyncFrame) -> str:
    """One NDJSON line including the trailing newline."""
    return json.dumps(frame.to_dict(), separators=(",", ":")) + "\n"


def serialize_stream(frames: Iterable[SyncFrame]) -> bytes:
    return "".join(serialize_frame(frame) for frame in frames).encode("utf-8")


def parse_frame(line: str) -> SyncFrame:
    return SyncFrame.from_dict(json.loads(line))


def deserialize_stream(data: Union[bytes, str]) -> List[SyncFrame]:
    """Decode complete lines; an unterminated trailing line is ignored."""
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    lines = text.split("\n")
    return [parse_frame(line) for line in lines[:-1] if line.strip()]
