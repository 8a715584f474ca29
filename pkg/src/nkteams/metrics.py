"""Normalisation against per-run optima, cross-run averaging, Manhattan distance."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np


@dataclass
class RunResult:
    performance_series: np.ndarray  # raw team performance for t = 1..T
    optimum: float
    run_seed: int
    implemented: list[int] | None = None
    trace: list[dict] | None = None
    auctions: list | None = None

    @property
    def normalized_series(self) -> np.ndarray:
        return self.performance_series / self.optimum

    @property
    def md(self) -> float:
        return manhattan_distance(self.normalized_series)


@dataclass
class ScenarioResult:
    mean_normalized_series: np.ndarray
    md: float
    n_runs: int
    config: dict = field(default_factory=dict)
    run_md: np.ndarray | None = None

    @property
    def md_se(self) -> float:
        """Standard error of ``md`` from the spread of per-run distances."""
        if self.run_md is None or len(self.run_md) < 2:
            return float("nan")
        return float(np.std(self.run_md, ddof=1) / math.sqrt(len(self.run_md)))


def normalize_and_average(results: Sequence[RunResult]) -> np.ndarray:
    """Per-timestep mean over runs of performance divided by the run's optimum.

    Runs are accumulated in the order given.
    """
    if not results:
        raise ValueError("no runs to average")
    length = len(results[0].performance_series)
    acc = np.zeros(length)
    for r in results:
        if len(r.performance_series) != length:
            raise ValueError("all runs must have series of the same length")
        if not r.optimum > 0:
            raise ValueError(f"run {r.run_seed}: optimum must be positive, got {r.optimum}")
        acc = acc + np.asarray(r.performance_series) / r.optimum
    return acc / len(results)


def manhattan_distance(series: Sequence[float]) -> float:
    """Total shortfall from the optimum, summed over timesteps."""
    return math.fsum(1.0 - float(x) for x in series)


def aggregate(results: Sequence[RunResult], config: dict | None = None) -> ScenarioResult:
    series = normalize_and_average(results)
    return ScenarioResult(
        mean_normalized_series=series,
        md=manhattan_distance(series),
        n_runs=len(results),
        config=dict(config or {}),
        run_md=np.array([r.md for r in results]),
    )
