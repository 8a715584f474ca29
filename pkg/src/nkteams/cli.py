"""Command-line front end.

    nkteams run --mode grid --runs 10 --seed 42 --out out/

Exit codes: 0 success, 1 configuration error, 2 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path
from typing import Mapping, Sequence

from .auction import write_audit_log
from .config import GRID_K, GRID_P, GRID_TAU, TAU_LABELS, ConfigError, ScenarioConfig, parse_config
from .engine import cell_seed, run_grid, run_scenario, run_seed, run_single, write_trace
from .landscape import build_interaction_matrix, generate_landscape, write_landscape_csv
from .metrics import ScenarioResult

Grid = Mapping[tuple[int, float, int], ScenarioResult]


class IncompleteGridError(ValueError):
    pass


def tau_label(tau: int) -> str:
    return TAU_LABELS.get(tau, str(tau))


def emit_contour_grid(
    grid: Grid,
    out_dir: str | Path,
    base: ScenarioConfig,
    ks: Sequence[int] = GRID_K,
    ps: Sequence[float] = GRID_P,
    taus: Sequence[int] = GRID_TAU,
) -> None:
    """Write ``{K}/md_grid.csv`` per complexity level plus ``summary.json``."""
    missing = [(k, p, t) for k in ks for p in ps for t in taus if (k, float(p), t) not in grid]
    if missing:
        raise IncompleteGridError(f"grid is missing {len(missing)} cell(s): {missing}")
    out_dir = Path(out_dir)
    cells = []
    for k in ks:
        (out_dir / str(k)).mkdir(parents=True, exist_ok=True)
        with open(out_dir / str(k) / "md_grid.csv", "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["tau", "label", *(repr(float(p)) for p in ps)])
            for t in taus:
                writer.writerow([t, tau_label(t), *(repr(grid[(k, float(p), t)].md) for p in ps)])
        for p in ps:
            for t in taus:
                res = grid[(k, float(p), t)]
                cells.append({
                    "k": k, "p": float(p), "tau": t, "label": tau_label(t),
                    "seed": cell_seed(base.master_seed, k, p, t),
                    "md": res.md, "md_se": res.md_se, "n_runs": res.n_runs,
                })
    summary = {
        "config": base.to_dict(),
        "ks": list(ks), "ps": [float(p) for p in ps], "taus": list(taus),
        "cells": cells,
    }
    with open(out_dir / "summary.json", "w") as fh:
        json.dump(summary, fh, indent=1, sort_keys=True)
        fh.write("\n")


def read_md_csv(path: str | Path) -> dict[tuple[float, int], float]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    ps = [float(v) for v in rows[0][2:]]
    return {(p, int(row[0])): float(v) for row in rows[1:] for p, v in zip(ps, row[2:])}


def _write_scenario(res: ScenarioResult, out: Path) -> None:
    with open(out / "scenario.json", "w") as fh:
        json.dump({
            "config": res.config, "md": res.md, "md_se": res.md_se, "n_runs": res.n_runs,
            "mean_normalized_series": res.mean_normalized_series.tolist(),
            "run_md": res.run_md.tolist(),
        }, fh, indent=1, sort_keys=True)
        fh.write("\n")
    with open(out / "series.csv", "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t", "phi_tilde"])
        for t, v in enumerate(res.mean_normalized_series, start=1):
            writer.writerow([t, repr(float(v))])


def _write_traces(cfg: ScenarioConfig, indices: range, out: Path) -> None:
    traces = out / "traces"
    traces.mkdir(parents=True, exist_ok=True)
    for i in indices:
        r = run_single(cfg, run_seed(cfg.master_seed, i), trace=True)
        write_trace(r, traces / f"run_{i}.csv", cfg.n)
        write_audit_log(r.auctions, traces / f"auctions_{i}.csv")


def cmd_run(args: argparse.Namespace) -> int:
    try:
        cfg = parse_config(args.config) if args.config else ScenarioConfig()
        overrides = {}
        if args.seed is not None:
            overrides["master_seed"] = args.seed
        if args.runs is not None:
            overrides["runs"] = args.runs
        cfg = cfg.replace(**overrides)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return 2

    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        if args.mode == "single":
            seed = run_seed(cfg.master_seed, 0)
            r = run_single(cfg, seed)
            with open(out / "single.json", "w") as fh:
                json.dump({"config": cfg.to_dict(), "run_seed": seed, "optimum": r.optimum,
                           "md": r.md, "performance_series": r.performance_series.tolist()},
                          fh, indent=1, sort_keys=True)
                fh.write("\n")
            if args.trace:
                _write_traces(cfg, range(1), out)
            if args.dump_landscape:
                import numpy as np

                land = generate_landscape(build_interaction_matrix(cfg.n, cfg.m, cfg.k),
                                          np.random.default_rng(seed))
                write_landscape_csv(land, out / "landscape.csv")
        elif args.mode == "scenario":
            _write_scenario(run_scenario(cfg), out)
            if args.trace:
                _write_traces(cfg, range(cfg.runs), out)
        else:
            grid = run_grid(cfg, GRID_K, GRID_P, GRID_TAU)
            emit_contour_grid(grid, out, cfg)
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 2
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nkteams", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a single replication, a scenario, or the full grid")
    run.add_argument("--config", help="flat key: value config file")
    run.add_argument("--mode", choices=("single", "scenario", "grid"), default="scenario")
    run.add_argument("--seed", type=int, help="master seed (overrides config)")
    run.add_argument("--runs", type=int, help="replications per scenario (overrides config)")
    run.add_argument("--out", default="out", help="output directory")
    run.add_argument("--trace", action="store_true", help="write per-timestep trace CSVs")
    run.add_argument("--dump-landscape", action="store_true",
                     help="single mode: write the run's contribution tables as CSV")
    run.set_defaults(func=cmd_run)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
