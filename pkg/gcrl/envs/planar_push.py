"""PlanarPush: a point agent pushes a block to a goal on a square platform.

Kinematics, applied once per step:

1. The agent moves by ``action * step_size``, clipped to ``agent_bounds``.
2. If the block is on the platform and the agent is closer than
   ``contact_radius`` to it, the block is displaced along the contact normal
   (agent to block) by ``push_gain * (contact_radius - distance)``. When the
   two positions coincide the normal is the action direction.
3. A block whose centre leaves the platform ``[0, 1]^2`` falls: its height
   becomes -1 and it no longer moves for the rest of the episode.

Observation: ``[agent_x, agent_y, block_x, block_y, block_z, dx, dy]`` with
``(dx, dy) = block - agent``. The achieved goal is the block position.
"""

import logging
from typing import Tuple

import numpy as np

from .base import EnvSpec, GoalEnv, GoalObservation, RenderFrame

logger = logging.getLogger(__name__)

PLATFORM = (0.0, 1.0)
FALLEN_HEIGHT = -1.0


class PlanarPushEnv(GoalEnv):
    def __init__(
        self,
        step_size: float = 0.05,
        contact_radius: float = 0.06,
        push_gain: float = 1.0,
        max_episode_steps: int = 100,
        success_threshold: float = 0.05,
        agent_bounds: Tuple[float, float] = (-0.2, 1.2),
    ) -> None:
        super().__init__()
        self.spec = EnvSpec(
            name="PlanarPush-v0",
            obs_dim=7,
            goal_dim=2,
            action_dim=2,
            max_episode_steps=max_episode_steps,
            success_threshold=success_threshold,
        )
        self.step_size = step_size
        self.contact_radius = contact_radius
        self.push_gain = push_gain
        self.agent_bounds = tuple(agent_bounds)
        self.agent = np.zeros(2)
        self.block = np.zeros(2)
        self.block_z = 0.0
        self.goal = np.zeros(2)

    @property
    def fallen(self) -> bool:
        return self.block_z == FALLEN_HEIGHT

    def _reset_state(self, rng: np.random.Generator) -> None:
        self.block = rng.uniform(0.25, 0.75, size=2)
        self.block_z = 0.0
        self.goal = rng.uniform(0.1, 0.9, size=2)
        while np.linalg.norm(self.goal - self.block) < 0.15:
            self.goal = rng.uniform(0.1, 0.9, size=2)
        self.agent = rng.uniform(0.1, 0.9, size=2)
        while np.linalg.norm(self.agent - self.block) < 0.1:
            self.agent = rng.uniform(0.1, 0.9, size=2)

    def _apply_action(self, action: np.ndarray) -> None:
        lo, hi = self.agent_bounds
        self.agent = np.clip(self.agent + action * self.step_size, lo, hi)
        if self.fallen:
            return

        offset = self.block - self.agent
        distance = float(np.linalg.norm(offset))
        if distance >= self.contact_radius:
            return
        if distance > 0.0:
            normal = offset / distance
        else:
            norm = float(np.linalg.norm(action))
            if norm == 0.0:
                return
            normal = action / norm
        self.block = self.block + normal * self.push_gain * (self.contact_radius - distance)

        if np.any(self.block < PLATFORM[0]) or np.any(self.block > PLATFORM[1]):
            self.block_z = FALLEN_HEIGHT
            logger.debug("Block fell off the platform at %s", self.block.tolist())

    def _observe(self) -> GoalObservation:
        observation = np.concatenate(
            [self.agent, self.block, [self.block_z], self.block - self.agent]
        )
        return GoalObservation(
            observation=observation,
            achieved_goal=self.block.copy(),
            desired_goal=self.goal.copy(),
        )

    def render_state(self) -> RenderFrame:
        return RenderFrame(
            env=self.spec.name,
            step=self.elapsed_steps,
            agent=[float(v) for v in self.agent],
            goal=[float(v) for v in self.goal],
            block=[float(v) for v in self.block],
            block_z=float(self.block_z),
            bounds=PLATFORM,
        )
