"""Environment lookup by name."""

from typing import Any, Callable, Dict, List, Optional

from natsort import natsorted

from ..exceptions import UnknownComponentError
from .base import GoalEnv
from .planar_push import PlanarPushEnv
from .point_reach import PointReachEnv


class EnvRegistry:
    """Maps environment names (``env=<name>`` config values) to factories."""

    def __init__(self) -> None:
        self._factories: Dict[str, Callable[..., GoalEnv]] = {}
        self._register_built_in_envs()

    def _register_built_in_envs(self) -> None:
        self.register("PointReach-v0", PointReachEnv)
        self.register("PlanarPush-v0", PlanarPushEnv)

    def register(self, name: str, factory: Callable[..., GoalEnv]) -> None:
        self._factories[name] = factory

    def names(self) -> List[str]:
        return natsorted(self._factories)

    def __contains__(self, name: str) -> bool:
        return name in self._factories

    def make(self, name: str, **kwargs: Any) -> GoalEnv:
        if name not in self._factories:
            raise UnknownComponentError("environment", name, self.names())
        return self._factories[name](**kwargs)


_global_registry: Optional[EnvRegistry] = None


def get_env_registry() -> EnvRegistry:
    global _global_registry
    if _global_registry is None:
        _global_registry = EnvRegistry()
    return _global_registry


def make_env(name: str, **kwargs: Any) -> GoalEnv:
    return get_env_registry().make(name, **kwargs)
