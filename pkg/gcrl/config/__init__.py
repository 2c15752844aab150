"""Layered configuration: YAML defaults, overlays and command-line overrides."""

from .centralized_config import ConfigManager, ConfigPaths, get_config_manager, load_yaml_file
from .loader import list_algorithms, load_defaults, resolve_config, split_selectors
from .overrides import (
    OverrideDirective,
    OverrideMode,
    apply_overrides,
    coerce_literal,
    parse_override,
    parse_overrides,
)
from .tree import ConfigTree, deep_merge

__all__ = [
    "ConfigManager",
    "ConfigPaths",
    "get_config_manager",
    "load_yaml_file",
    "list_algorithms",
    "load_defaults",
    "resolve_config",
    "split_selectors",
    "OverrideDirective",
    "OverrideMode",
    "apply_overrides",
    "coerce_literal",
    "parse_override",
    "parse_overrides",
    "ConfigTree",
    "deep_merge",
]
