"""Centralized configuration paths with an environment-variable override."""

import logging
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import yaml
from natsort import natsorted

from ..exceptions import ConfigParseError, NotFoundError

logger = logging.getLogger(__name__)

CONFIG_DIR_ENV = "GCRL_CONFIG_DIR"


@dataclass
class ConfigPaths:
    """Where the YAML configuration files live."""

    DEFAULT_BASE_DIR = Path(__file__).parent / "conf"

    base_dir: Path
    algorithm_dir: Path
    sweep_dir: Path
    tests_dir: Path

    @classmethod
    def from_environment(cls) -> "ConfigPaths":
        """Create ConfigPaths from ``GCRL_CONFIG_DIR`` or the packaged defaults."""
        return cls.from_base_dir(os.getenv(CONFIG_DIR_ENV, cls.DEFAULT_BASE_DIR))

    @classmethod
    def from_base_dir(cls, base_dir: Union[str, Path]) -> "ConfigPaths":
        base_dir = Path(base_dir)
        return cls(
            base_dir=base_dir,
            algorithm_dir=base_dir / "algorithm",
            sweep_dir=base_dir / "sweep",
            tests_dir=base_dir / "tests",
        )

    def directory(self, config_type: str) -> Path:
        dirs = {"algorithm": self.algorithm_dir, "sweep": self.sweep_dir, "tests": self.tests_dir}
        if config_type not in dirs:
            raise NotFoundError(f"Unknown config type: {config_type}")
        return dirs[config_type]


def load_yaml_file(path: Union[str, Path]) -> Any:
    """``yaml.safe_load`` a file; syntax errors carry the 1-based line number."""
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            return yaml.safe_load(f)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        line = mark.line + 1 if mark is not None else None
        problem = getattr(e, "problem", None) or str(e)
        raise ConfigParseError(problem, str(path), line) from e


class ConfigManager:
    """Central configuration manager with user-configurable paths."""

    _instance: Optional["ConfigManager"] = None
    _config_paths: Optional[ConfigPaths] = None

    def __new__(cls) -> "ConfigManager":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __init__(self) -> None:
        if not hasattr(self, "initialized"):
            self._config_cache: Dict[str, Any] = {}
            self.initialized = True

    @classmethod
    def initialize(cls, config_paths: Optional[ConfigPaths] = None) -> "ConfigManager":
        """Initialize the config manager with specific paths."""
        cls._config_paths = config_paths or ConfigPaths.from_environment()
        instance = cls()
        instance._config_cache.clear()
        logger.debug("Config directory: %s", cls._config_paths.base_dir)
        return instance

    @classmethod
    def set_base_config_dir(cls, base_dir: Union[str, Path]) -> "ConfigManager":
        return cls.initialize(ConfigPaths.from_base_dir(base_dir))

    @property
    def config_paths(self) -> ConfigPaths:
        if self._config_paths is None:
            type(self)._config_paths = ConfigPaths.from_environment()
        return self._config_paths

    def get_config_path(self, config_type: str, config_name: str) -> Path:
        return self.config_paths.directory(config_type) / f"{config_name}.yaml"

    def list_configs(self, config_type: str) -> List[str]:
        """Names of the YAML files of one type, in natural order."""
        directory = self.config_paths.directory(config_type)
        if not directory.exists():
            return []
        return natsorted(p.stem for p in directory.glob("*.yaml"))

    def load_config(self, config_type: str, config_name: str, use_cache: bool = True) -> Any:
        """Load one YAML file; missing files raise :class:`NotFoundError`."""
        cache_key = f"{config_type}:{config_name}"
        if use_cache and cache_key in self._config_cache:
            return self._config_cache[cache_key]
        path = self.get_config_path(config_type, config_name)
        if not path.exists():
            raise NotFoundError(f"Config file not found: {path}")
        data = load_yaml_file(path)
        if use_cache:
            self._config_cache[cache_key] = data
        return data

    def clear_cache(self) -> None:
        self._config_cache.clear()

    def get_config_info(self) -> Dict[str, Any]:
        paths = self.config_paths
        return {
            "base_dir": str(paths.base_dir),
            "algorithms": self.list_configs("algorithm"),
            "sweeps": self.list_configs("sweep"),
            "tests": self.list_configs("tests"),
        }


def get_config_manager() -> ConfigManager:
    return ConfigManager()
