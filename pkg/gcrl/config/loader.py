"""Resolve algorithm defaults, algorithm@env overlays and overrides into one tree."""

import logging
from typing import Iterable, List, Optional, Sequence, Tuple

from ..envs.registry import get_env_registry
from ..exceptions import ConfigError, UnknownComponentError
from .centralized_config import ConfigManager, get_config_manager, load_yaml_file
from .overrides import OverrideDirective, OverrideMode, apply_overrides, coerce_tree, parse_overrides
from .tree import ConfigTree

logger = logging.getLogger(__name__)

DEFAULT_ALGORITHM = "sac_var"
DEFAULT_ENV = "PointReach-v0"
OVERLAY_SEPARATOR = "@"


def list_algorithms(manager: Optional[ConfigManager] = None) -> List[str]:
    """Algorithm names with a default file (overlays excluded)."""
    manager = manager or get_config_manager()
    return [n for n in manager.list_configs("algorithm") if OVERLAY_SEPARATOR not in n]


def _load_layer(manager: ConfigManager, name: str) -> dict:
    path = manager.get_config_path("algorithm", name)
    data = load_yaml_file(path)
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a mapping at top level")
    return coerce_tree(data)


def load_defaults(algorithm_name: str, env_name: str,
                  manager: Optional[ConfigManager] = None) -> ConfigTree:
    """Merge ``<algorithm>.yaml`` with the optional ``<algorithm>@<env>.yaml``."""
    manager = manager or get_config_manager()
    if not manager.get_config_path("algorithm", algorithm_name).exists():
        raise UnknownComponentError("algorithm", algorithm_name, list_algorithms(manager))

    tree = ConfigTree({"algorithm": _load_layer(manager, algorithm_name), "env": env_name})
    overlay_name = f"{algorithm_name}{OVERLAY_SEPARATOR}{env_name}"
    if manager.get_config_path("algorithm", overlay_name).exists():
        logger.debug("Applying overlay %s", overlay_name)
        tree = tree.merge({"algorithm": _load_layer(manager, overlay_name)})
    return tree


def split_selectors(
    directives: Sequence[OverrideDirective],
) -> Tuple[Optional[str], Optional[str], List[OverrideDirective]]:
    """Pull ``algorithm=<name>`` and ``env=<name>`` out of the directive list."""
    algorithm = env = None
    rest = []
    for directive in directives:
        if directive.mode is OverrideMode.REPLACE and directive.path == "algorithm":
            algorithm = str(directive.value)
        elif directive.mode is OverrideMode.REPLACE and directive.path == "env":
            env = str(directive.value)
        else:
            rest.append(directive)
    return algorithm, env, rest


def resolve_config(tokens: Iterable[str], manager: Optional[ConfigManager] = None,
                   default_algorithm: str = DEFAULT_ALGORITHM,
                   default_env: str = DEFAULT_ENV) -> ConfigTree:
    """Resolve command-line tokens such as ``algorithm=sac_var env=PointReach-v0``."""
    algorithm, env, rest = split_selectors(parse_overrides(tokens))
    algorithm = algorithm or default_algorithm
    env = env or default_env

    registry = get_env_registry()
    if env not in registry:
        raise UnknownComponentError("environment", env, registry.names())

    tree = apply_overrides(load_defaults(algorithm, env, manager), rest)
    logger.debug("Resolved config: %s", tree.to_dict())
    return tree
