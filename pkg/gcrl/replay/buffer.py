"""Episode replay storage with hindsight goal relabeling.

Transitions live in flat ring arrays. Whole episodes are written
contiguously and evicted oldest-first, so the valid rows are always the
last ``size`` rows written. Each row remembers how many steps remain in its
episode, which is all the "future" relabeling strategy needs.
"""

import logging
from collections import deque
from dataclasses import dataclass
from typing import Callable, Deque, List, Sequence, Tuple

import numpy as np

from ..envs.base import GoalObservation
from ..exceptions import ShapeError, StateError, UsageError

logger = logging.getLogger(__name__)

RewardFn = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass
class Transition:
    """One environment step as collected by the training loop."""

    obs: GoalObservation
    action: np.ndarray
    reward: float
    next_obs: GoalObservation
    done: bool


@dataclass
class SampledBatch:
    """Columnar training batch; goals are already appended to observations."""

    observations: np.ndarray
    actions: np.ndarray
    rewards: np.ndarray
    next_observations: np.ndarray
    dones: np.ndarray
    achieved_goals: np.ndarray
    desired_goals: np.ndarray
    relabeled: np.ndarray
    episode_ids: np.ndarray
    steps: np.ndarray
    goal_steps: np.ndarray

    def __len__(self) -> int:
        return self.rewards.shape[0]


class ReplayBuffer:
    """FIFO episode store sampled with the "future" HER strategy.

    Args:
        capacity: maximum number of stored transitions.
        obs_dim, goal_dim, action_dim: vector sizes.
        compute_reward: the environment's reward rule, used for relabeled rows.
    """

    def __init__(
        self,
        capacity: int,
        obs_dim: int,
        goal_dim: int,
        action_dim: int,
        compute_reward: RewardFn,
    ):
        if capacity < 1:
            raise ShapeError(f"Replay capacity must be >= 1, got {capacity}")
        self.capacity = int(capacity)
        self.obs_dim = obs_dim
        self.goal_dim = goal_dim
        self.action_dim = action_dim
        self.compute_reward = compute_reward

        self._obs = np.zeros((capacity, obs_dim))
        self._next_obs = np.zeros((capacity, obs_dim))
        self._desired = np.zeros((capacity, goal_dim))
        self._next_achieved = np.zeros((capacity, goal_dim))
        self._actions = np.zeros((capacity, action_dim))
        self._rewards = np.zeros(capacity)
        self._steps = np.zeros(capacity, dtype=np.int64)
        self._steps_left = np.zeros(capacity, dtype=np.int64)
        self._episode_ids = np.zeros(capacity, dtype=np.int64)

        # (episode_id, length), oldest first
        self._episodes: Deque[Tuple[int, int]] = deque()
        self._write_pos = 0
        self._size = 0
        self._next_episode_id = 0

    @property
    def size(self) -> int:
        return self._size

    def __len__(self) -> int:
        return self._size

    @property
    def n_episodes(self) -> int:
        return len(self._episodes)

    @property
    def episode_ids(self) -> List[int]:
        """Ids of the stored episodes in insertion order."""
        return [episode_id for episode_id, _ in self._episodes]

    def store_episode(self, episode: Sequence[Transition]) -> int:
        """Append a finished episode and return its id."""
        length = len(episode)
        if length == 0:
            raise ShapeError("Cannot store an empty episode")
        if length > self.capacity:
            raise ShapeError(
                f"Episode of {length} steps exceeds replay capacity {self.capacity}"
            )
        if not episode[-1].done:
            raise UsageError("Episode must end with a terminal or truncated step")

        while self._size + length > self.capacity:
            evicted_id, evicted_len = self._episodes.popleft()
            self._size -= evicted_len
            logger.debug("Evicted episode %d (%d steps)", evicted_id, evicted_len)

        episode_id = self._next_episode_id
        self._next_episode_id += 1
        rows = (self._write_pos + np.arange(length)) % self.capacity
        for t, (row, transition) in enumerate(zip(rows, episode)):
            action = np.asarray(transition.action, dtype=np.float64).reshape(-1)
            if action.size != self.action_dim:
                raise ShapeError(
                    f"Action has {action.size} components, expected {self.action_dim}"
                )
            self._obs[row] = transition.obs.observation
            self._desired[row] = transition.obs.desired_goal
            self._next_obs[row] = transition.next_obs.observation
            self._next_achieved[row] = transition.next_obs.achieved_goal
            self._actions[row] = action
            self._rewards[row] = transition.reward
            self._steps[row] = t
            self._steps_left[row] = length - 1 - t
            self._episode_ids[row] = episode_id

        self._write_pos = int((self._write_pos + length) % self.capacity)
        self._size += length
        self._episodes.append((episode_id, length))
        return episode_id

    def sample_her(
        self, batch_size: int, her_ratio: float, rng: np.random.Generator
    ) -> SampledBatch:
        """Sample ``batch_size`` rows, relabeling each with probability ``her_ratio``.

        A relabeled row gets as desired goal the achieved goal reached after a
        uniformly chosen step ``j`` with ``t <= j <= T - 1`` of its own
        episode, and its reward is recomputed for that goal.
        """
        if self._size == 0:
            raise StateError("Cannot sample from an empty replay buffer")
        if not 0.0 <= her_ratio <= 1.0:
            raise ShapeError(f"her_ratio must lie in [0, 1], got {her_ratio}")

        oldest = self._write_pos - self._size
        rows = (oldest + rng.integers(0, self._size, size=batch_size)) % self.capacity
        relabeled = rng.random(batch_size) < her_ratio
        offsets = np.floor(rng.random(batch_size) * (self._steps_left[rows] + 1)).astype(np.int64)
        offsets = np.where(relabeled, offsets, 0)
        goal_rows = (rows + offsets) % self.capacity

        desired = self._desired[rows].copy()
        desired[relabeled] = self._next_achieved[goal_rows[relabeled]]
        achieved = self._next_achieved[rows]

        rewards = self._rewards[rows].copy()
        if np.any(relabeled):
            rewards[relabeled] = self.compute_reward(achieved[relabeled], desired[relabeled])

        return SampledBatch(
            observations=np.concatenate([self._obs[rows], desired], axis=1),
            actions=self._actions[rows].copy(),
            rewards=rewards,
            next_observations=np.concatenate([self._next_obs[rows], desired], axis=1),
            # terminal for the (possibly relabeled) goal; time limits never terminate
            dones=(rewards == 0.0).astype(np.float64),
            achieved_goals=achieved.copy(),
            desired_goals=desired,
            relabeled=relabeled,
            episode_ids=self._episode_ids[rows].copy(),
            steps=self._steps[rows].copy(),
            goal_steps=np.where(relabeled, self._steps[goal_rows], self._steps[rows]),
        )
