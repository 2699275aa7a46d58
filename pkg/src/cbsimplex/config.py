"""Flat ``key = value`` config files for :class:`GameConfig`.

Nested fields use dotted keys, e.g. ``market.sigma = 0.2`` or
``simplex.k = 3``.  Blank lines and ``#`` comments are ignored; any key left
out keeps its basic-set default.
"""

from __future__ import annotations

import dataclasses
from pathlib import Path
from typing import Any

from cbsimplex.minmax import GameConfig

_NESTED = ("market", "terms", "simplex")


def _parse_value(raw: str, default: Any) -> Any:
    if isinstance(default, bool):
        lowered = raw.lower()
        if lowered in ("true", "1", "yes", "on"):
            return True
        if lowered in ("false", "0", "no", "off"):
            return False
        raise ValueError(f"not a boolean: {raw!r}")
    if isinstance(default, int):
        return int(raw)
    if isinstance(default, float):
        return float(raw)
    return raw


def flatten_config(cfg: GameConfig) -> dict[str, Any]:
    flat = {}
    for f in dataclasses.fields(cfg):
        value = getattr(cfg, f.name)
        if f.name in _NESTED:
            for sub in dataclasses.fields(value):
                flat[f"{f.name}.{sub.name}"] = getattr(value, sub.name)
        else:
            flat[f.name] = value
    return flat


def config_keys() -> list[str]:
    return list(flatten_config(GameConfig()))


def config_from_dict(values: dict[str, str]) -> GameConfig:
    defaults = flatten_config(GameConfig())
    unknown = set(values) - set(defaults)
    if unknown:
        raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
    merged = dict(defaults)
    for key, raw in values.items():
        merged[key] = raw if not isinstance(raw, str) else _parse_value(raw, defaults[key])

    base = GameConfig()
    nested = {}
    for name in _NESTED:
        part = getattr(base, name)
        kwargs = {f.name: merged[f"{name}.{f.name}"] for f in dataclasses.fields(part)}
        nested[name] = type(part)(**kwargs)
    top = {k: v for k, v in merged.items() if "." not in k}
    return GameConfig(**top, **nested)


def parse_config(text: str) -> GameConfig:
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value'")
        key, raw = (part.strip() for part in line.split("=", 1))
        if key in values:
            raise ValueError(f"line {lineno}: duplicate key {key!r}")
        values[key] = raw
    return config_from_dict(values)


def format_config(cfg: GameConfig) -> str:
    lines = []
    for key, value in flatten_config(cfg).items():
        if isinstance(value, bool):
            value = "true" if value else "false"
        elif isinstance(value, float):
            value = repr(value)
        lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n"


def load_config(path: str | Path) -> GameConfig:
    return parse_config(Path(path).read_text())


def save_config(cfg: GameConfig, path: str | Path) -> None:
    Path(path).write_text(format_config(cfg))
