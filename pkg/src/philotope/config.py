"""Experiment configuration.

Defaults are the published experiment's parameters: 115 sonnets per
poet, 150-dimensional skipgram trained for 250 epochs with a 10-word
window, cosine metric, 0-th homology, 100 trials.

Precedence: CLI flag > config file > default.  The config file is a
simple ``key = value`` format (strings, numbers, booleans, and
comma-separated lists; ``#`` comments).  PHILOTOPE_SEED overrides
``base_seed``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, fields
from pathlib import Path

DEFAULT_POETS = ("quevedo", "lope", "gongora")


class ConfigError(Exception):
    pass


@dataclass
class ExperimentConfig:
    corpus_root: str = "corpus"
    poets: tuple[str, ...] = DEFAULT_POETS
    sonnets_per_poet: int = 115
    dim: int = 150
    epochs: int = 250
    window: int = 10
    negatives: int = 5
    lr_start: float = 0.025
    lr_min: float = 1e-4
    metric: str = "cosine"
    homology_dim: int = 0
    trials: int = 100
    base_seed: int = 1
    workers: int = 1
    output_dir: str = "out"

    def __post_init__(self):
        if isinstance(self.poets, list):
            self.poets = tuple(self.poets)
        for name in ("sonnets_per_poet", "dim", "epochs", "window",
                     "negatives", "trials", "workers"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive")
        if len(self.poets) < 2:
            raise ConfigError("need at least 2 poets")
        if self.metric not in ("cosine", "euclidean"):
            raise ConfigError(f"unknown metric {self.metric!r}")
        if self.homology_dim < 0:
            raise ConfigError("homology_dim must be >= 0")


def _parse_value(text: str):
    text = text.strip()
    if text.startswith('"') and text.endswith('"') and len(text) >= 2:
        return text[1:-1]
    low = text.lower()
    if low in ("true", "false"):
        return low == "true"
    if "," in text:
        return [_parse_value(part) for part in text.split(",")]
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        pass
    return text


def load_config_file(path: str | Path) -> dict:
    """Parse a key = value config file into a dict of overrides."""
    known = {f.name for f in fields(ExperimentConfig)}
    out = {}
    for lineno, line in enumerate(
            Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if key not in known:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = _parse_value(value)
    return out


def build_config(file_path: str | Path | None = None,
                 **overrides) -> ExperimentConfig:
    """Merge config-file values and explicit overrides (flags win)."""
    values: dict = {}
    if file_path is not None:
        values.update(load_config_file(file_path))
    values.update({k: v for k, v in overrides.items() if v is not None})
    env_seed = os.environ.get("PHILOTOPE_SEED")
    if env_seed is not None:
        values["base_seed"] = int(env_seed)
    return ExperimentConfig(**values)
