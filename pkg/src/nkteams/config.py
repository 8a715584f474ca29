"""Scenario configuration and the flat key-value config file format."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from pathlib import Path

import yaml

# Value sets of the experimental design.
GRID_K = (3, 5, 11)
GRID_P = (0.0, 0.1, 0.2, 0.3, 0.4, 0.5)
GRID_TAU = (1, 20, 200)

TAU_LABELS = {1: "initial", 20: "moderate", 200: "high"}
MEMORY_UPDATES = ("independent", "paired")


class ConfigError(ValueError):
    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


@dataclass(frozen=True)
class ScenarioConfig:
    k: int = 3
    p: float = 0.1
    tau: int = 1
    t_horizon: int = 200
    n: int = 12
    m: int = 3
    alpha: float = 0.5
    beta: float = 0.5
    runs: int = 1500
    j: int = 5  # candidates per slot, population P = j * m
    q: int = 4  # initial memory size
    master_seed: int = 0
    offteam_learning: bool = True  # non-members also learn and forget
    memory_update: str = "paired"  # forget only right after learning; or "independent"

    def __post_init__(self):
        for key in ("k", "tau", "t_horizon", "n", "m", "runs", "j", "q", "master_seed"):
            value = getattr(self, key)
            if isinstance(value, bool) or not isinstance(value, int):
                raise ConfigError(key, f"expected an integer, got {value!r}")
        for key in ("p", "alpha", "beta"):
            value = getattr(self, key)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigError(key, f"expected a number, got {value!r}")
        if not isinstance(self.offteam_learning, bool):
            raise ConfigError("offteam_learning", "expected on/off")
        if self.memory_update not in MEMORY_UPDATES:
            raise ConfigError("memory_update", f"expected one of {MEMORY_UPDATES}")
        if self.n < 1 or self.m < 1:
            raise ConfigError("n", "n and m must be positive")
        if self.n % self.m:
            raise ConfigError("n", f"n={self.n} must be divisible by m={self.m}")
        if not 0 <= self.k <= self.n - 1:
            raise ConfigError("k", f"k={self.k} must lie in [0, n-1]")
        if not 0.0 <= self.p <= 1.0:
            raise ConfigError("p", f"p={self.p} must lie in [0, 1]")
        if self.tau < 1 or self.t_horizon < 1:
            raise ConfigError("tau", "tau and t_horizon must be positive")
        if self.t_horizon % self.tau:
            raise ConfigError("tau", f"t_horizon={self.t_horizon} must be divisible by tau={self.tau}")
        if abs(self.alpha + self.beta - 1.0) > 1e-9:
            raise ConfigError("alpha", "alpha+beta must equal 1")
        if self.master_seed < 0:
            raise ConfigError("master_seed", "master_seed must be non-negative")
        if self.runs < 1:
            raise ConfigError("runs", "runs must be at least 1")
        if self.j < 2:
            raise ConfigError("j", "j must be at least 2 (second price undefined)")
        if not 1 <= self.q < (1 << self.s):
            raise ConfigError("q", f"q={self.q} must satisfy 1 <= q < 2**{self.s}")

    @property
    def s(self) -> int:
        return self.n // self.m

    @property
    def population(self) -> int:
        return self.j * self.m

    def replace(self, **changes) -> "ScenarioConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


FIELDS = {f.name for f in dataclasses.fields(ScenarioConfig)}


def config_from_dict(data: dict | None) -> ScenarioConfig:
    data = dict(data or {})
    unknown = sorted(set(data) - FIELDS)
    if unknown:
        raise ConfigError(unknown[0], "unknown key")
    if isinstance(data.get("p"), int) and not isinstance(data.get("p"), bool):
        data["p"] = float(data["p"])
    return ScenarioConfig(**data)


def parse_config(path: str | Path) -> ScenarioConfig:
    """Read a flat ``key: value`` document; omitted keys take their defaults.

    ``offteam_learning`` accepts on/off (or true/false).
    """
    text = Path(path).read_text()
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError("<file>", f"malformed config: {exc}") from exc
    if data is not None and not isinstance(data, dict):
        raise ConfigError("<file>", "expected a flat key: value document")
    for key, value in (data or {}).items():
        if isinstance(value, (dict, list)):
            raise ConfigError(str(key), "nested values are not supported")
    return config_from_dict(data)
