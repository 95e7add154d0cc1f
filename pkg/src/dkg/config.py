"""Pipeline configuration: defaults, a flat TOML-style config file, flag overrides."""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, fields
from pathlib import Path

from dkg.deptree import MODIFYING_DEPENDENCIES

__all__ = ["PipelineConfig", "ConfigError", "load_config_file"]


class ConfigError(ValueError):
    """Raised for unreadable or out-of-range configuration."""


@dataclass
class PipelineConfig:
    corpus: str | None = None
    embeddings: str | None = None
    out: str | None = None
    theta_build: float = 0.5
    theta_rel: float = 0.5
    theta_rd: float = 0.6
    modifying_deps: frozenset[str] = MODIFYING_DEPENDENCIES
    max_hops: int = 3
    m: int = 5
    min_paths: int = 5
    seed: int = 0
    workers: int = field(default_factory=lambda: os.cpu_count() or 1)

    def validate(self) -> "PipelineConfig":
        for name in ("theta_build", "theta_rel", "theta_rd"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ConfigError(f"{name} must be in [0, 1], got {value}")
        if self.max_hops < 1:
            raise ConfigError(f"max_hops must be >= 1, got {self.max_hops}")
        if self.m < 0:
            raise ConfigError(f"m must be >= 0, got {self.m}")
        if self.min_paths < 0:
            raise ConfigError(f"min_paths must be >= 0, got {self.min_paths}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")
        return self

    def out_dir(self) -> Path:
        if not self.out:
            raise ConfigError("no output directory configured (use --out or the config file)")
        return Path(self.out)


_FIELD_TYPES = {f.name: f.type for f in fields(PipelineConfig)}


def _strip_comment(line: str) -> str:
    in_string = False
    for pos, ch in enumerate(line):
        if ch == '"':
            in_string = not in_string
        elif ch == "#" and not in_string:
            return line[:pos]
    return line


def load_config_file(path: str | Path) -> dict:
    """Parse the flat ``key = value`` subset of TOML the pipeline uses.

    Values are JSON-compatible scalars or string arrays, which covers TOML
    strings, numbers, booleans and string lists.
    """
    values: dict = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = _strip_comment(raw).strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw.rstrip()!r}")
            key, _, value_text = line.partition("=")
            key = key.strip()
            if key not in _FIELD_TYPES:
                raise ConfigError(f"{path}:{lineno}: unknown config key {key!r}")
            try:
                value = json.loads(value_text.strip())
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{path}:{lineno}: bad value for {key}: {exc}") from exc
            if key == "modifying_deps":
                if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
                    raise ConfigError(f"{path}:{lineno}: modifying_deps must be a list of strings")
                value = frozenset(value)
            values[key] = value
    return values
