"""Search spaces over config keys and their enumeration as configurations."""

import itertools
from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Sequence

import numpy as np

from ..config.overrides import format_literal, parse_override
from ..exceptions import ConfigError

CATEGORICAL = "categorical"
UNIFORM = "uniform"
LOGUNIFORM = "loguniform"


@dataclass(frozen=True)
class SearchEntry:
    """Choices for one override key such as ``++algorithm.weight_critic_var``."""

    key: str
    choices: tuple

    @classmethod
    def from_mapping(cls, key: str, spec: Mapping[str, Any]) -> "SearchEntry":
        kind = spec.get("type", CATEGORICAL)
        if kind == CATEGORICAL:
            choices = list(spec.get("choices") or [])
        elif kind in (UNIFORM, LOGUNIFORM):
            try:
                low, high, n_points = float(spec["low"]), float(spec["high"]), int(spec["n_points"])
            except KeyError as e:
                raise ConfigError(f"Search entry '{key}' of type {kind} needs {e.args[0]}") from e
            if n_points < 1 or high < low:
                raise ConfigError(f"Search entry '{key}': invalid range [{low}, {high}] x {n_points}")
            if kind == UNIFORM:
                grid = np.linspace(low, high, n_points)
            else:
                if low <= 0.0:
                    raise ConfigError(f"Search entry '{key}': loguniform needs low > 0")
                grid = np.geomspace(low, high, n_points)
            choices = [float(v) for v in grid]
        else:
            raise ConfigError(f"Search entry '{key}': unsupported type '{kind}'")
        if not choices:
            raise ConfigError(f"Search entry '{key}' has no choices")
        # validates the key as an override target
        parse_override(f"{key}={format_literal(choices[0])}")
        return cls(key, tuple(choices))


class SearchSpace:
    """Cartesian product of entries; the last entry varies fastest.

    A configuration's index in :meth:`configurations` is its tie-break rank.
    """

    def __init__(self, entries: Sequence[SearchEntry]):
        if not entries:
            raise ConfigError("Search space is empty")
        self.entries = list(entries)
        self._configurations = [
            dict(zip(self.keys, values))
            for values in itertools.product(*(entry.choices for entry in self.entries))
        ]

    @classmethod
    def from_mapping(cls, data: Mapping[str, Mapping[str, Any]]) -> "SearchSpace":
        if not data:
            raise ConfigError("Search space is empty")
        return cls([SearchEntry.from_mapping(str(key), spec) for key, spec in data.items()])

    @property
    def keys(self) -> List[str]:
        return [entry.key for entry in self.entries]

    def configurations(self) -> List[Dict[str, Any]]:
        return [dict(c) for c in self._configurations]

    def __len__(self) -> int:
        return len(self._configurations)

    def __getitem__(self, index: int) -> Dict[str, Any]:
        return dict(self._configurations[index])

    def index_of(self, params: Mapping[str, Any]) -> int:
        return self._configurations.index(dict(params))

    def to_mapping(self) -> Dict[str, Dict[str, Any]]:
        return {entry.key: {"type": CATEGORICAL, "choices": list(entry.choices)} for entry in self.entries}

    @staticmethod
    def to_tokens(params: Mapping[str, Any]) -> List[str]:
        """Override tokens for one configuration."""
        return [f"{key}={format_literal(value)}" for key, value in params.items()]

    @staticmethod
    def describe(params: Mapping[str, Any]) -> str:
        return ", ".join(f"{key.lstrip('+')}={format_literal(value)}" for key, value in params.items())
