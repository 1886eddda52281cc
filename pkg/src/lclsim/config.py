"""Experiment configuration: a YAML document that round-trips exactly."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any

import yaml

from .algorithms import ALGORITHMS
from .graph import FAMILIES
from .lcl import PROBLEMS

KINDS = ("run", "adversary", "bridge", "shift", "rotation", "sweep")
EXTRA_ALGORITHMS = ("constant", "coin-flip")
SHIFT_RULES = ("three-coloring", "lifted")


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    """One experiment.  ``graph``, ``algorithm`` and ``problem`` are ``{"name": ..., **params}``."""

    kind: str = "run"
    graph: dict[str, Any] = field(default_factory=lambda: {"name": "cycle", "n": 64})
    algorithm: dict[str, Any] = field(default_factory=lambda: {"name": "linial", "d": 2})
    problem: dict[str, Any] = field(default_factory=lambda: {"name": "coloring", "k": 3})
    n_nominal: int | None = None
    seed: int = 0
    trials: int = 1
    jobs: int = 1
    id_source: str = "sequential"
    sweep: dict[str, Any] = field(default_factory=lambda: {"param": "n", "values": []})
    shift: dict[str, Any] = field(
        default_factory=lambda: {"rule": "three-coloring", "W": 10_000, "p_max": 64, "samples": 10, "span": 5000,
                         "certify": True, "certify_every": 1}
    )
    rotation: dict[str, Any] = field(
        default_factory=lambda: {"alphas": [], "count": 10, "x0": 0.1, "length": 100_000, "candidates": 1000}
    )
    bridge: dict[str, Any] = field(default_factory=lambda: {"r": None})
    out_dir: str = "out"

    def validate(self) -> "ExperimentConfig":
        if self.kind not in KINDS:
            raise ConfigError(f"unknown experiment kind {self.kind!r}; expected one of {KINDS}")
        for key, table in (("graph", FAMILIES), ("problem", PROBLEMS)):
            name = getattr(self, key).get("name")
            if name not in table:
                raise ConfigError(f"unknown {key} {name!r}; expected one of {sorted(table)}")
        name = self.algorithm.get("name")
        if name not in ALGORITHMS and name not in EXTRA_ALGORITHMS:
            raise ConfigError(f"unknown algorithm {name!r}; expected one of {sorted(ALGORITHMS)}")
        if self.shift.get("rule") not in SHIFT_RULES:
            raise ConfigError(f"unknown shift rule {self.shift.get('rule')!r}")
        if not isinstance(self.seed, int):
            raise ConfigError("seed must be an explicit integer")
        if self.trials < 1 or self.jobs < 1:
            raise ConfigError("trials and jobs must be >= 1")
        if self.id_source not in ("sequential", "random"):
            raise ConfigError(f"unknown id source {self.id_source!r}")
        return self

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        base = cls()
        merged = {}
        for f in fields(cls):
            value = data.get(f.name, getattr(base, f.name))
            default = getattr(base, f.name)
            if isinstance(default, dict) and isinstance(value, dict) and f.name in ("shift", "rotation", "sweep", "bridge"):
                value = {**default, **value}
            merged[f.name] = value
        return cls(**merged).validate()

    def dumps(self) -> str:
        return yaml.safe_dump(self.to_dict(), sort_keys=False)

    @classmethod
    def loads(cls, text: str) -> "ExperimentConfig":
        data = yaml.safe_load(text) or {}
        if not isinstance(data, dict):
            raise ConfigError("config must be a mapping")
        return cls.from_dict(data)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.dumps())

    @classmethod
    def load(cls, path: str | Path) -> "ExperimentConfig":
        try:
            return cls.loads(Path(path).read_text())
        except yaml.YAMLError as exc:
            raise ConfigError(f"cannot parse {path}: {exc}") from None


def split_named(entry: dict[str, Any]) -> tuple[str, dict[str, Any]]:
    params = dict(entry)
    return params.pop("name"), params
