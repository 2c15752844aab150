"""Immutable nested configuration with dot-key access."""

import copy
from collections.abc import Mapping
from typing import Any, Dict, Iterator, Optional

import yaml

_MISSING = object()


def deep_merge(base: Dict[str, Any], overlay: Mapping) -> Dict[str, Any]:
    """Recursive merge where ``overlay`` wins per leaf and sibling keys survive."""
    result = copy.deepcopy(base)
    for key, value in overlay.items():
        if isinstance(value, Mapping) and isinstance(result.get(key), dict):
            result[key] = deep_merge(result[key], value)
        else:
            result[key] = copy.deepcopy(_plain(value))
    return result


def _plain(value: Any) -> Any:
    if isinstance(value, Mapping):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


class ConfigTree(Mapping):
    """Resolved configuration, e.g. ``{"algorithm": {...}, "env": "PointReach-v0"}``.

    Values are never mutated in place; :meth:`merge` and :meth:`with_value`
    return new trees. Item access returns copies.
    """

    def __init__(self, data: Optional[Mapping] = None):
        self._data: Dict[str, Any] = _plain(data or {})

    def __getitem__(self, key: str) -> Any:
        return copy.deepcopy(self._data[key])

    def __iter__(self) -> Iterator[str]:
        return iter(self._data)

    def __len__(self) -> int:
        return len(self._data)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, ConfigTree):
            return self._data == other._data
        if isinstance(other, Mapping):
            return self._data == _plain(other)
        return NotImplemented

    def __repr__(self) -> str:
        return f"ConfigTree({self._data!r})"

    def _lookup(self, path: str) -> Any:
        node: Any = self._data
        for part in path.split("."):
            if not isinstance(node, dict) or part not in node:
                return _MISSING
            node = node[part]
        return node

    def contains(self, path: str) -> bool:
        return self._lookup(path) is not _MISSING

    def get(self, path: str, default: Any = None) -> Any:
        """Value at dot key ``path`` (e.g. ``algorithm.gamma``)."""
        value = self._lookup(path)
        return default if value is _MISSING else copy.deepcopy(value)

    def with_value(self, path: str, value: Any) -> "ConfigTree":
        data = copy.deepcopy(self._data)
        parts = path.split(".")
        node = data
        for part in parts[:-1]:
            if not isinstance(node.get(part), dict):
                node[part] = {}
            node = node[part]
        node[parts[-1]] = _plain(value)
        return ConfigTree(data)

    def merge(self, overlay: Mapping) -> "ConfigTree":
        return ConfigTree(deep_merge(self._data, overlay))

    def flatten(self) -> Dict[str, Any]:
        """Leaves keyed by their dot path; lists are leaves."""
        flat: Dict[str, Any] = {}

        def walk(prefix: str, node: Any) -> None:
            if isinstance(node, dict) and node:
                for key, value in node.items():
                    walk(f"{prefix}.{key}" if prefix else key, value)
            else:
                flat[prefix] = copy.deepcopy(node)

        for key, value in self._data.items():
            walk(key, value)
        return flat

    def to_dict(self) -> Dict[str, Any]:
        return copy.deepcopy(self._data)

    def to_yaml(self) -> str:
        return yaml.safe_dump(self._data, sort_keys=False, default_flow_style=False)

    @classmethod
    def from_yaml(cls, text: str) -> "ConfigTree":
        from .overrides import coerce_tree

        return cls(coerce_tree(yaml.safe_load(text) or {}))
