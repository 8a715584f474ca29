"""Single-run event loop, scenario replication and the scenario grid.

Within each timestep the order is fixed: auction (on scheduled steps), then
learning and forgetting, then every team member chooses a sub-solution against
last period's implemented solution. Who adapts (members only, or everyone) and
whether forgetting is tied to learning are configuration switches.
"""

from __future__ import annotations

import csv
import os
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .agent import UtilityTable, add_neighbour, choose_solution, drop_worst, init_agent
from .auction import auction_times, run_auction
from .config import ScenarioConfig
from .landscape import InteractionMatrix, build_interaction_matrix, generate_landscape
from .metrics import RunResult, ScenarioResult, aggregate

WORKERS_ENV = "NKTEAMS_WORKERS"


def derive_seed(*words: int) -> int:
    """Hash non-negative integers into a 63-bit seed via ``numpy.random.SeedSequence``."""
    state = np.random.SeedSequence([int(w) for w in words]).generate_state(1, np.uint64)
    return int(state[0]) >> 1


def run_seed(master_seed: int, run_index: int) -> int:
    return derive_seed(master_seed, run_index)


def cell_seed(master_seed: int, k: int, p: float, tau: int) -> int:
    return derive_seed(master_seed, k, round(p * 1000), tau)


def cell_config(base: ScenarioConfig, k: int, p: float, tau: int) -> ScenarioConfig:
    return base.replace(k=k, p=float(p), tau=tau, master_seed=cell_seed(base.master_seed, k, p, tau))


@lru_cache(maxsize=None)
def _matrix(n: int, m: int, k: int) -> InteractionMatrix:
    return build_interaction_matrix(n, m, k)


def run_single(cfg: ScenarioConfig, seed: int, trace: bool = False) -> RunResult:
    rng = np.random.default_rng(seed)
    landscape = generate_landscape(_matrix(cfg.n, cfg.m, cfg.k), rng)
    table = UtilityTable(landscape, cfg.alpha, cfg.beta)
    part = landscape.partition
    s = part.s

    agents = [init_agent(i, i // cfg.j, rng, cfg.q, s) for i in range(cfg.population)]
    d_prev = int(rng.integers(1 << cfg.n))

    perf_all = landscape.team_performance_all()
    optimum = float(perf_all.max())
    perf = perf_all.tolist()

    schedule = set(auction_times(cfg.t_horizon, cfg.tau))
    members = []
    series = np.empty(cfg.t_horizon)
    history = []
    rows = [] if trace else None
    auctions = [] if trace else None
    shifts = [part.shift(slot) for slot in range(part.m)]
    sub_mask = (1 << s) - 1
    learning = cfg.p > 0.0
    paired = cfg.memory_update == "paired"

    for t in range(1, cfg.t_horizon + 1):
        held = t in schedule
        if held:
            outcome = run_auction(agents, d_prev, table, rng)
            members = [agents[w] for w in outcome.winners]
            if trace:
                auctions.append((t, outcome))
        if learning:
            # one Bernoulli(p) draw per adapting agent for learning, one for forgetting
            adapting = agents if cfg.offteam_learning else members
            learns = (rng.random(len(adapting)) < cfg.p).tolist()
            forgets = learns if paired else (rng.random(len(adapting)) < cfg.p).tolist()
            for a, learn_now, forget_now in zip(adapting, learns, forgets):
                if learn_now:
                    learned = add_neighbour(a, rng, s)
                    if paired and learned is None:
                        continue
                if forget_now:
                    drop_worst(a, d_prev, table, (d_prev >> shifts[a.slot]) & sub_mask)
        d = 0
        for a in members:
            d |= choose_solution(a, d_prev, table, rng) << shifts[a.slot]
        series[t - 1] = perf[d]
        history.append(d)
        if trace:
            rows.append({"t": t, "phi": perf[d], "roster": [a.id for a in members],
                         "auction": held, "solution": d})
        d_prev = d

    return RunResult(series, optimum, seed, implemented=history, trace=rows, auctions=auctions)


def _run_batch(cfg: ScenarioConfig, seeds: Sequence[int]) -> list[tuple[np.ndarray, float, int]]:
    out = []
    for seed in seeds:
        r = run_single(cfg, seed)
        out.append((r.performance_series, r.optimum, seed))
    return out


def default_workers() -> int:
    return max(1, int(os.environ.get(WORKERS_ENV, "1")))


def _execute(jobs: list[tuple[ScenarioConfig, list[int]]], workers: int) -> list[list[RunResult]]:
    """Run every (config, seeds) job; results come back in job and seed order."""
    chunk = 50
    tasks = []
    for job_index, (cfg, seeds) in enumerate(jobs):
        for start in range(0, len(seeds), chunk):
            tasks.append((job_index, cfg, seeds[start : start + chunk]))
    results: list[list[RunResult]] = [[] for _ in jobs]
    if workers <= 1:
        outputs: Iterable = (_run_batch(cfg, seeds) for _, cfg, seeds in tasks)
        for (job_index, _, _), batch in zip(tasks, outputs):
            results[job_index].extend(RunResult(*row) for row in batch)
        return results
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_run_batch, cfg, seeds) for _, cfg, seeds in tasks]
        for (job_index, _, _), fut in zip(tasks, futures):
            results[job_index].extend(RunResult(*row) for row in fut.result())
    return results


def run_scenario(cfg: ScenarioConfig, workers: int | None = None) -> ScenarioResult:
    seeds = [run_seed(cfg.master_seed, i) for i in range(cfg.runs)]
    (results,) = _execute([(cfg, seeds)], workers or default_workers())
    return aggregate(results, cfg.to_dict())


def run_grid(
    base: ScenarioConfig,
    ks: Sequence[int],
    ps: Sequence[float],
    taus: Sequence[int],
    workers: int | None = None,
) -> dict[tuple[int, float, int], ScenarioResult]:
    """One scenario per (k, p, tau) cell, each with its own derived master seed."""
    cells = [(k, float(p), tau) for k in ks for p in ps for tau in taus]
    cfgs = [cell_config(base, *cell) for cell in cells]
    jobs = [(cfg, [run_seed(cfg.master_seed, i) for i in range(cfg.runs)]) for cfg in cfgs]
    outputs = _execute(jobs, workers or default_workers())
    return {cell: aggregate(res, cfg.to_dict()) for cell, cfg, res in zip(cells, cfgs, outputs)}


def write_trace(result: RunResult, path: str | Path, n: int) -> None:
    """CSV with one row per timestep: performance, roster, auction flag, solution bits."""
    if result.trace is None:
        raise ValueError("run was executed without trace=True")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t", "phi", "roster", "auction", "solution"])
        for row in result.trace:
            writer.writerow([row["t"], repr(row["phi"]), " ".join(map(str, row["roster"])),
                             int(row["auction"]), format(row["solution"], f"0{n}b")])
