"""Study definition files.

Two shapes are accepted: the sweeper block nested as ``hydra.sweeper`` or
the same keys at top level. ``env``, ``algorithm`` and ``overrides`` at top
level become base tokens shared by every trial.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Union

from ..config.centralized_config import ConfigManager, get_config_manager, load_yaml_file
from ..exceptions import ConfigError, NotFoundError, UnknownKeyError
from .space import SearchSpace
from .study import StudyConfig

logger = logging.getLogger(__name__)

STUDY_KEYS = (
    "study_name",
    "max_trials",
    "n_jobs",
    "direction",
    "min_trials_per_param",
    "max_trials_per_param",
    "objective_metric",
    "objective_mode",
)
# keys selecting components for every trial
BASE_KEYS = ("env", "algorithm", "overrides")
# hydra plugin keys that carry no scheduling meaning here
HYDRA_SWEEPER_KEYS = ("_target_", "sampler", "storage")


def _reject_unknown(keys: Iterable[str], allowed: Iterable[str], where: str) -> None:
    unknown = sorted(set(keys) - set(allowed))
    if unknown:
        raise UnknownKeyError(
            f"Unknown {where} key(s): {', '.join(unknown)}; "
            f"expected one of {', '.join(sorted(allowed))}"
        )


@dataclass
class StudyDefinition:
    config: StudyConfig
    space: SearchSpace
    base_tokens: List[str] = field(default_factory=list)
    path: Optional[Path] = None


def find_study_file(name_or_path: Union[str, Path],
                    manager: Optional[ConfigManager] = None) -> Path:
    """A path as given, else ``sweep/<name>.yaml`` in the config directory."""
    path = Path(name_or_path)
    if path.is_file():
        return path
    manager = manager or get_config_manager()
    candidate = manager.get_config_path("sweep", str(name_or_path))
    if candidate.is_file():
        return candidate
    raise NotFoundError(
        f"Study file '{name_or_path}' not found; shipped studies: "
        f"{', '.join(manager.list_configs('sweep'))}"
    )


def parse_study(data: Dict[str, Any], default_name: str = "study") -> StudyDefinition:
    if not isinstance(data, dict):
        raise ConfigError("Study file must contain a mapping")
    sweeper = data.get("hydra", {}).get("sweeper") if "hydra" in data else data
    if not isinstance(sweeper, dict):
        raise ConfigError("Study file has no 'hydra.sweeper' mapping")
    if "search_space" not in sweeper:
        raise ConfigError("Study file has no 'search_space'")
    if "max_trials" not in sweeper:
        raise ConfigError("Study file has no 'max_trials'")

    study_keys = STUDY_KEYS + ("search_space",)
    if sweeper is data:
        _reject_unknown(data, study_keys + BASE_KEYS, "study")
    else:
        _reject_unknown(data, BASE_KEYS + ("hydra",), "study")
        _reject_unknown(sweeper, study_keys + HYDRA_SWEEPER_KEYS, "hydra.sweeper")
        ignored = sorted(set(sweeper) & set(HYDRA_SWEEPER_KEYS))
        if ignored:
            logger.debug("Ignoring sweeper keys: %s", ", ".join(ignored))

    kwargs = {key: sweeper[key] for key in STUDY_KEYS if key in sweeper}
    kwargs.setdefault("study_name", default_name)
    try:
        config = StudyConfig(**kwargs)
    except TypeError as e:
        raise ConfigError(f"Invalid study settings: {e}") from e
    space = SearchSpace.from_mapping(sweeper["search_space"] or {})

    base_tokens = []
    if data.get("algorithm") is not None:
        base_tokens.append(f"algorithm={data['algorithm']}")
    if data.get("env") is not None:
        base_tokens.append(f"env={data['env']}")
    overrides = data.get("overrides") or []
    if not isinstance(overrides, list):
        raise ConfigError("'overrides' must be a list of override tokens")
    base_tokens.extend(str(token) for token in overrides)
    return StudyDefinition(config, space, base_tokens)


def load_study_file(name_or_path: Union[str, Path],
                    manager: Optional[ConfigManager] = None) -> StudyDefinition:
    path = find_study_file(name_or_path, manager)
    definition = parse_study(load_yaml_file(path), default_name=path.stem)
    definition.path = path
    return definition
