"""
gcrl: goal-conditioned soft actor-critic with a critic-ensemble variance bonus,
hindsight relabeling, hyperparameter studies and local experiment tracking.
"""

from typing import Any

from .exceptions import (
    ConfigError,
    GcrlError,
    NumericError,
    ShapeError,
)

try:
    from ._version import __version__
except ImportError:  # not installed from a build
    __version__ = "0.1.0"

__license__ = "MIT"


# Lazy imports keep `import gcrl` light
def __getattr__(name: str) -> Any:
    """Lazy loading of the main entry points."""
    if name == "SacVarAgent":
        from .algorithms.sac_var import SacVarAgent

        return SacVarAgent
    elif name == "train":
        from .algorithms.training import train

        return train
    elif name == "make_env":
        from .envs.registry import make_env

        return make_env
    elif name == "resolve_config":
        from .config.loader import resolve_config

        return resolve_config
    elif name == "FileTracker":
        from .track.file_store import FileTracker

        return FileTracker
    elif name == "run_study":
        from .sweep.runner import run_study

        return run_study
    elif name == "CurvePlotter":
        from .visualization.plotters import CurvePlotter

        return CurvePlotter
    elif name == "env_registry":
        from .envs.registry import get_env_registry

        return get_env_registry()
    else:
        raise AttributeError(f"module '{__name__}' has no attribute '{name}'")


__all__ = [
    "SacVarAgent",
    "train",
    "make_env",
    "resolve_config",
    "FileTracker",
    "run_study",
    "CurvePlotter",
    "GcrlError",
    "ShapeError",
    "NumericError",
    "ConfigError",
    "__version__",
]
