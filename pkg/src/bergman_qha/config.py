"""Run configuration for the experiment suites.

Config files are plain ``key = value`` lines; ``#`` starts a comment and
keys left out take the defaults below::

    truncation_degree = 16
    cutoff = 0.999
    r_grid = 0.5, 0.7, 0.9
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, fields, replace
from pathlib import Path


class ConfigError(ValueError):
    """Unparsable config file or a value outside its documented range."""


@dataclass(frozen=True)
class RunConfig:
    truncation_degree: int = 16
    radial_order: int = 64
    angular_order: int = 128
    circle_order: int = 32
    cutoff: float = 0.999
    beta: float = 0.5
    r_grid: tuple = (0.5, 0.7, 0.9)
    seed: int = 42
    output_path: str = "results"

    def __post_init__(self):
        object.__setattr__(self, "r_grid", tuple(float(r) for r in self.r_grid))
        validate(self)

    def with_overrides(self, **kw):
        """Copy with the non-``None`` entries of ``kw`` replaced (and revalidated)."""
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


def validate(cfg):
    if cfg.truncation_degree < 0:
        raise ConfigError(f"truncation_degree must be >= 0, got {cfg.truncation_degree}")
    for name in ("radial_order", "angular_order", "circle_order"):
        if getattr(cfg, name) < 1:
            raise ConfigError(f"{name} must be a positive integer, got {getattr(cfg, name)}")
    if not 0.0 < cfg.cutoff < 1.0:
        raise ConfigError(f"cutoff must lie in (0, 1), got {cfg.cutoff}")
    if not 0.0 < cfg.beta < 1.0:
        raise ConfigError(f"beta must lie in (0, 1), got {cfg.beta}")
    if not cfg.r_grid:
        raise ConfigError("r_grid must contain at least one radius")
    if any(not 0.0 <= r < 1.0 for r in cfg.r_grid):
        raise ConfigError(f"r_grid entries must lie in [0, 1), got {cfg.r_grid}")
    if any(b <= a for a, b in zip(cfg.r_grid, cfg.r_grid[1:])):
        raise ConfigError(f"r_grid must be strictly increasing, got {cfg.r_grid}")


def parse_r_grid(text):
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise ConfigError(f"r_grid: expected comma-separated numbers, got {text!r}") from exc


_CONVERTERS = {int: int, float: float, str: str}


def load_config(path):
    """Parse and validate a config file; raises :class:`ConfigError`."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",), comment_prefixes=("#",),
                                       delimiters=("=",), interpolation=None)
    parser.optionxform = str
    try:
        parser.read_string("[run]\n" + text, source=str(path))
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from exc

    known = {f.name: f for f in fields(RunConfig)}
    values = {}
    for key, raw in parser["run"].items():
        if key not in known:
            raise ConfigError(f"{path}: unknown key {key!r}")
        if key == "r_grid":
            values[key] = parse_r_grid(raw)
            continue
        kind = type(known[key].default)
        try:
            values[key] = _CONVERTERS[kind](raw)
        except ValueError as exc:
            raise ConfigError(f"{path}: {key} = {raw!r} is not a valid {kind.__name__}") from exc
    return RunConfig(**values)
