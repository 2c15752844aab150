"""Command-line override tokens: ``key=value`` (replace) and ``++key=value`` (add)."""

import re
from dataclasses import dataclass
from enum import Enum
from typing import Any, Iterable, List, Mapping, Sequence

from ..exceptions import ConfigError, DuplicateKeyError, UnknownKeyError
from .tree import ConfigTree

_INT_RE = re.compile(r"^[+-]?\d+$")
_FLOAT_RE = re.compile(r"^[+-]?(\d+\.\d*|\.\d+|\d+)([eE][+-]?\d+)?$|^[+-]?(inf|nan)$", re.IGNORECASE)
_KEY_RE = re.compile(r"^[A-Za-z_][\w-]*(\.[A-Za-z_][\w-]*)*$")


class OverrideMode(Enum):
    REPLACE = "replace"
    ADD = "add"


@dataclass(frozen=True)
class OverrideDirective:
    path: str
    value: Any
    mode: OverrideMode = OverrideMode.REPLACE

    def to_token(self) -> str:
        prefix = "++" if self.mode is OverrideMode.ADD else ""
        return f"{prefix}{self.path}={format_literal(self.value)}"


def _split_list(body: str) -> List[str]:
    body = body.strip()
    if not body:
        return []
    return [item.strip() for item in body.split(",")]


def coerce_literal(text: str) -> Any:
    """Type a literal by its syntax.

    ``true``/``false`` become bool, ``null`` None, integer literals int,
    decimal or scientific literals float, ``[a, b]`` a list of coerced
    items, quoted text a string without the quotes; anything else stays a
    string.
    """
    s = text.strip()
    lowered = s.lower()
    if lowered == "true":
        return True
    if lowered == "false":
        return False
    if lowered in ("null", "~"):
        return None
    if _INT_RE.match(s):
        return int(s)
    if _FLOAT_RE.match(s):
        return float(s)
    if s.startswith("[") and s.endswith("]"):
        return [coerce_literal(item) for item in _split_list(s[1:-1])]
    if len(s) >= 2 and s[0] == s[-1] and s[0] in "'\"":
        return s[1:-1]
    return s


def format_literal(value: Any) -> str:
    """Inverse of :func:`coerce_literal` for values it produces."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "null"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(format_literal(v) for v in value) + "]"
    return str(value)


def coerce_tree(node: Any) -> Any:
    """Coerce numeric-looking string leaves of a YAML document (e.g. ``3e-4``)."""
    if isinstance(node, Mapping):
        return {str(k): coerce_tree(v) for k, v in node.items()}
    if isinstance(node, list):
        return [coerce_tree(v) for v in node]
    if isinstance(node, str) and (_INT_RE.match(node.strip()) or _FLOAT_RE.match(node.strip())):
        return coerce_literal(node)
    return node


def parse_override(token: str) -> OverrideDirective:
    """Parse one ``[++]key=value`` token."""
    mode = OverrideMode.REPLACE
    body = token.strip()
    if body.startswith("++"):
        mode = OverrideMode.ADD
        body = body[2:]
    if "=" not in body:
        raise ConfigError(f"Override '{token}' is not of the form key=value")
    path, _, raw = body.partition("=")
    path = path.strip()
    if not _KEY_RE.match(path):
        raise ConfigError(f"Invalid override key '{path}' in '{token}'")
    return OverrideDirective(path=path, value=coerce_literal(raw), mode=mode)


def parse_overrides(tokens: Iterable[str]) -> List[OverrideDirective]:
    return [parse_override(token) for token in tokens]


def apply_overrides(tree: ConfigTree, directives: Sequence[OverrideDirective]) -> ConfigTree:
    """Apply directives left to right.

    Replace mode requires the key to exist; add mode requires it to be absent.
    """
    for directive in directives:
        exists = tree.contains(directive.path)
        if directive.mode is OverrideMode.REPLACE and not exists:
            raise UnknownKeyError(
                f"Unknown config key '{directive.path}' "
                f"(use '++{directive.path}=...' to add a new key)"
            )
        if directive.mode is OverrideMode.ADD and exists:
            raise DuplicateKeyError(
                f"Config key '{directive.path}' already exists; drop the '++' prefix to replace it"
            )
        tree = tree.with_value(directive.path, directive.value)
    return tree
