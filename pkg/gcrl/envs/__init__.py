"""Goal-conditioned environments."""

from .base import EnvSpec, GoalEnv, GoalObservation, RenderFrame, StepResult
from .planar_push import PlanarPushEnv
from .point_reach import PointReachEnv
from .registry import EnvRegistry, get_env_registry, make_env

__all__ = [
    "EnvSpec",
    "GoalEnv",
    "GoalObservation",
    "RenderFrame",
    "StepResult",
    "PlanarPushEnv",
    "PointReachEnv",
    "EnvRegistry",
    "get_env_registry",
    "make_env",
]
