"""Flat ``key = value`` run configuration.

Example::

    # two cycles, lambda = 1/6
    lambda = 1/6
    A = 1/2
    Delta = 3
    L = 8
    seed = 7
    graphs = c20.txt, c30.txt
    output_dir = out

Rationals are written ``p/q`` (decimals such as ``1e-6`` are converted
exactly). Graph paths are relative to the config file.
"""
from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .errors import ConfigError

_INT_KEYS = {"Delta", "L", "seed", "max_steps", "max_restarts", "threads", "cap"}
_FRACTION_KEYS = {"lambda", "A"}
_STR_KEYS = {"erase_policy", "output_dir"}
_LIST_KEYS = {"graphs"}
KEYS = _INT_KEYS | _FRACTION_KEYS | _STR_KEYS | _LIST_KEYS


@dataclass
class RunConfig:
    lam: Optional[Fraction] = None
    A: Optional[Fraction] = None
    Delta: int = 3
    L: Optional[int] = None
    seed: int = 0
    max_steps: int = 100_000
    max_restarts: int = 10
    erase_policy: str = "erase-path"
    graphs: list = field(default_factory=list)
    output_dir: str = "out"
    threads: int = 1
    cap: Optional[int] = None
    base_dir: Path = Path(".")

    def graph_paths(self) -> list[Path]:
        return [p if Path(p).is_absolute() else self.base_dir / p for p in map(Path, self.graphs)]

    def output_path(self) -> Path:
        p = Path(self.output_dir)
        return p if p.is_absolute() else self.base_dir / p

    def merged(self, **overrides) -> "RunConfig":
        valid = {f.name for f in fields(self)}
        return replace(self, **{k: v for k, v in overrides.items() if v is not None and k in valid})


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"not a rational number: {text!r}") from None


def parse_config(text: str, source: Optional[str] = None, base_dir: Optional[Path] = None) -> RunConfig:
    cfg = RunConfig(base_dir=base_dir or Path("."))
    seen = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {line!r}", lineno, source)
        key, value = (t.strip() for t in line.split("=", 1))
        if key not in KEYS:
            raise ConfigError(f"unknown key {key!r}", lineno, source)
        if key in seen:
            raise ConfigError(f"key {key!r} already set on line {seen[key]}", lineno, source)
        seen[key] = lineno
        try:
            if key in _INT_KEYS:
                setattr(cfg, key, int(value))
            elif key in _FRACTION_KEYS:
                setattr(cfg, "lam" if key == "lambda" else key, parse_fraction(value))
            elif key in _LIST_KEYS:
                cfg.graphs = [v.strip() for v in value.split(",") if v.strip()]
            else:
                setattr(cfg, key, value)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key!r}: {exc}", lineno, source) from None
    return cfg


def read_config(path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc.strerror}", None, str(path)) from None
    return parse_config(text, source=str(path), base_dir=path.parent)
