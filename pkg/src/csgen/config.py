"""Model configuration files.

The format is line oriented: ``key: value value ...``. Blank lines and
lines starting with ``#`` are ignored. Repeating a list key extends it.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

from .core import Lang

ENV_VAR = "CSGEN_CONFIG"

_LIST_KEYS = {"deny", "deny_l1", "deny_l2", "aux_lexicon_l1", "aux_lexicon_l2", "substitutable"}
_BOOL_KEYS = {"include_monolingual", "deny_composite_functional"}
_CHOICE_KEYS = {
    "dedup": ("strings", "trees"),
    "matrix_ml0": ("l1", "l2", "both"),
    "matrix_nested": ("l1", "l2", "both"),
}
_TRUE = {"true", "yes", "on", "1"}
_FALSE = {"false", "no", "off", "0"}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class MLConfig:
    """Deny lists, substitution categories and counting switches.

    ``deny_l1`` blocks switching a constituent out of L1 (into L2) and
    ``deny_l2`` the reverse. The root is never switchable regardless.
    """

    deny_l1: frozenset[str] = frozenset()
    deny_l2: frozenset[str] = frozenset()
    aux_lexicon_l1: frozenset[str] = frozenset()
    aux_lexicon_l2: frozenset[str] = frozenset()
    substitutable: frozenset[str] = frozenset()
    include_monolingual: bool = True
    deny_composite_functional: bool = True
    dedup: str = "strings"
    matrix_ml0: str = "l1"
    matrix_nested: str = "both"

    def deny(self, lang: Lang) -> frozenset[str]:
        return self.deny_l1 if lang is Lang.L1 else self.deny_l2

    def aux_lexicon(self, lang: Lang) -> frozenset[str]:
        return self.aux_lexicon_l1 if lang is Lang.L1 else self.aux_lexicon_l2

    def with_deny(self, categories) -> "MLConfig":
        cats = frozenset(categories)
        return replace(self, deny_l1=cats, deny_l2=cats)


def parse_config(text: str) -> MLConfig:
    lists: dict[str, set[str]] = {k: set() for k in _LIST_KEYS}
    values: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition(":")
        key = key.strip().lower()
        if not sep:
            raise ConfigError(f"line {lineno}: expected 'key: value', got {raw.strip()!r}")
        words = value.split()
        if key in _LIST_KEYS:
            if key.startswith("aux"):
                # lexicon entries match tokens case-insensitively
                words = [w.lower() for w in words]
            lists[key].update(words)
        elif key in _BOOL_KEYS:
            word = value.strip().lower()
            if word not in _TRUE | _FALSE:
                raise ConfigError(f"line {lineno}: {key} expects true/false, got {value.strip()!r}")
            values[key] = word in _TRUE
        elif key in _CHOICE_KEYS:
            word = value.strip().lower()
            if word not in _CHOICE_KEYS[key]:
                raise ConfigError(f"line {lineno}: {key} must be one of {_CHOICE_KEYS[key]}")
            values[key] = word
        else:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
    shared = lists.pop("deny")
    return MLConfig(
        deny_l1=frozenset(shared | lists.pop("deny_l1")),
        deny_l2=frozenset(shared | lists.pop("deny_l2")),
        **{k: frozenset(v) for k, v in lists.items()},
        **values,
    )


def default_config_text() -> str:
    return resources.files("csgen").joinpath("data", "default.cfg").read_text("utf-8")


def default_config() -> MLConfig:
    return parse_config(default_config_text())


def load_config(path: str | os.PathLike | None = None) -> MLConfig:
    """Load ``path``, else ``$CSGEN_CONFIG``, else the shipped default."""
    if path is None:
        path = os.environ.get(ENV_VAR) or None
    if path is None:
        return default_config()
    return parse_config(Path(path).read_text(encoding="utf-8"))
