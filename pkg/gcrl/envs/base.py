"""Goal-conditioned sense-act interface shared by all environments."""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np

from ..exceptions import ShapeError

logger = logging.getLogger(__name__)


def _as_vector(value: Any, name: str) -> np.ndarray:
    vec = np.asarray(value, dtype=np.float64).reshape(-1)
    if not np.all(np.isfinite(vec)):
        raise ShapeError(f"{name} contains non-finite values: {vec.tolist()}")
    return vec


@dataclass
class GoalObservation:
    """Observation together with the achieved and the desired goal."""

    observation: np.ndarray
    achieved_goal: np.ndarray
    desired_goal: np.ndarray

    def __post_init__(self) -> None:
        self.observation = _as_vector(self.observation, "observation")
        self.achieved_goal = _as_vector(self.achieved_goal, "achieved_goal")
        self.desired_goal = _as_vector(self.desired_goal, "desired_goal")
        if self.achieved_goal.shape != self.desired_goal.shape:
            raise ShapeError(
                f"Goal lengths differ: achieved {self.achieved_goal.size}, "
                f"desired {self.desired_goal.size}"
            )

    def flatten(self) -> np.ndarray:
        """Learner input: observation followed by the desired goal."""
        return np.concatenate([self.observation, self.desired_goal])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GoalObservation):
            return NotImplemented
        return (
            np.array_equal(self.observation, other.observation)
            and np.array_equal(self.achieved_goal, other.achieved_goal)
            and np.array_equal(self.desired_goal, other.desired_goal)
        )


@dataclass
class StepResult:
    obs: GoalObservation
    reward: float
    done: bool
    is_success: bool
    # done because of the step limit rather than success
    truncated: bool = False


@dataclass(frozen=True)
class EnvSpec:
    """Static description of an environment."""

    name: str
    obs_dim: int
    goal_dim: int
    action_dim: int
    max_episode_steps: int
    success_threshold: float = 0.05

    def __post_init__(self) -> None:
        for attr in ("obs_dim", "goal_dim", "action_dim", "max_episode_steps"):
            if getattr(self, attr) < 1:
                raise ShapeError(f"EnvSpec.{attr} must be >= 1, got {getattr(self, attr)}")


@dataclass
class RenderFrame:
    """Serializable snapshot of the scene for 2-D drawing.

    Coordinates are plain floats so the frame survives a JSON round trip.
    """

    env: str
    step: int
    agent: List[float]
    goal: List[float]
    block: Optional[List[float]] = None
    block_z: Optional[float] = None
    bounds: Tuple[float, float] = (0.0, 1.0)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "env": self.env,
            "step": self.step,
            "agent": list(self.agent),
            "goal": list(self.goal),
            "block": None if self.block is None else list(self.block),
            "block_z": self.block_z,
            "bounds": list(self.bounds),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RenderFrame":
        block = data.get("block")
        block_z = data.get("block_z")
        return cls(
            env=str(data["env"]),
            step=int(data["step"]),
            agent=[float(v) for v in data["agent"]],
            goal=[float(v) for v in data["goal"]],
            block=None if block is None else [float(v) for v in block],
            block_z=None if block_z is None else float(block_z),
            bounds=tuple(float(v) for v in data.get("bounds", (0.0, 1.0))),
        )


class GoalEnv(ABC):
    """Base class for goal-conditioned environments with sparse rewards.

    Subclasses implement the state update and observation; this class owns
    seeding, action validation, step counting and the reward rule. The
    reward returned by :meth:`step` always equals
    ``compute_reward(obs.achieved_goal, obs.desired_goal)``.
    """

    spec: EnvSpec

    def __init__(self) -> None:
        self._rng = np.random.default_rng()
        self._elapsed_steps = 0

    @property
    def elapsed_steps(self) -> int:
        return self._elapsed_steps

    def reset(self, seed: Optional[int] = None) -> GoalObservation:
        """Start a fresh episode, reseeding the environment rng if ``seed`` is given."""
        if seed is not None:
            self._rng = np.random.default_rng(seed)
        self._elapsed_steps = 0
        self._reset_state(self._rng)
        return self._observe()

    def step(self, action: np.ndarray) -> StepResult:
        """Advance the scene by one tick; out-of-range actions are clipped."""
        action = np.asarray(action, dtype=np.float64).reshape(-1)
        if action.size != self.spec.action_dim:
            raise ShapeError(
                f"{self.spec.name} expects {self.spec.action_dim} action components, got {action.size}"
            )
        action = np.clip(action, -1.0, 1.0)
        self._apply_action(action)
        self._elapsed_steps += 1

        obs = self._observe()
        reward = float(self.compute_reward(obs.achieved_goal, obs.desired_goal))
        is_success = reward == 0.0
        truncated = not is_success and self._elapsed_steps >= self.spec.max_episode_steps
        return StepResult(
            obs=obs,
            reward=reward,
            done=is_success or truncated,
            is_success=is_success,
            truncated=truncated,
        )

    def compute_reward(
        self, achieved_goal: np.ndarray, desired_goal: np.ndarray
    ) -> Union[float, np.ndarray]:
        """Sparse reward: 0 within ``success_threshold`` (inclusive), else -1.

        Accepts single goals or batches of goals along the last axis.
        """
        achieved = np.asarray(achieved_goal, dtype=np.float64)
        desired = np.asarray(desired_goal, dtype=np.float64)
        if achieved.shape != desired.shape:
            raise ShapeError(
                f"Goal shapes differ: achieved {achieved.shape}, desired {desired.shape}"
            )
        distance = np.linalg.norm(achieved - desired, axis=-1)
        reward = np.where(distance <= self.spec.success_threshold, 0.0, -1.0)
        return float(reward) if reward.ndim == 0 else reward

    @abstractmethod
    def _reset_state(self, rng: np.random.Generator) -> None:
        """Sample a new initial state and desired goal."""
        pass

    @abstractmethod
    def _apply_action(self, action: np.ndarray) -> None:
        """Apply a clipped action to the internal state."""
        pass

    @abstractmethod
    def _observe(self) -> GoalObservation:
        pass

    @abstractmethod
    def render_state(self) -> RenderFrame:
        """Snapshot of the current scene."""
        pass

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}({self.spec.name})"
