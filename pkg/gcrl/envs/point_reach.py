"""PointReach: a point mass driven by velocity commands toward a goal."""

import numpy as np

from .base import EnvSpec, GoalEnv, GoalObservation, RenderFrame


class PointReachEnv(GoalEnv):
    """2-D point in the unit square.

    The action is a velocity command; the position moves by
    ``action * step_size`` and is clipped to the arena. The observation and
    the achieved goal are both the position.
    """

    def __init__(self, step_size: float = 0.05, max_episode_steps: int = 50,
                 success_threshold: float = 0.05):
        super().__init__()
        self.spec = EnvSpec(
            name="PointReach-v0",
            obs_dim=2,
            goal_dim=2,
            action_dim=2,
            max_episode_steps=max_episode_steps,
            success_threshold=success_threshold,
        )
        self.step_size = step_size
        self.position = np.zeros(2)
        self.goal = np.zeros(2)

    def _reset_state(self, rng: np.random.Generator) -> None:
        self.position = rng.uniform(0.0, 1.0, size=2)
        self.goal = rng.uniform(0.0, 1.0, size=2)
        while np.linalg.norm(self.goal - self.position) <= self.spec.success_threshold:
            self.goal = rng.uniform(0.0, 1.0, size=2)

    def _apply_action(self, action: np.ndarray) -> None:
        self.position = np.clip(self.position + action * self.step_size, 0.0, 1.0)

    def _observe(self) -> GoalObservation:
        return GoalObservation(
            observation=self.position.copy(),
            achieved_goal=self.position.copy(),
            desired_goal=self.goal.copy(),
        )

    def greedy_action(self) -> np.ndarray:
        """Scripted policy that moves straight toward the goal."""
        return np.clip((self.goal - self.position) / self.step_size, -1.0, 1.0)

    def render_state(self) -> RenderFrame:
        return RenderFrame(
            env=self.spec.name,
            step=self.elapsed_steps,
            agent=[float(v) for v in self.position],
            goal=[float(v) for v in self.goal],
        )
