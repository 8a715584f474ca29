"""Run the full (K, p, tau) grid and print the MD tables.

    python scripts/reproduce_grid.py --runs 1500 --out out/
    NKTEAMS_WORKERS=8 python scripts/reproduce_grid.py ...
"""

import argparse
import time

from nkteams.cli import emit_contour_grid
from nkteams.config import GRID_K, GRID_P, GRID_TAU, ScenarioConfig, parse_config
from nkteams.engine import run_grid


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--config")
    parser.add_argument("--runs", type=int, default=1500)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out")
    args = parser.parse_args()

    base = parse_config(args.config) if args.config else ScenarioConfig()
    base = base.replace(runs=args.runs, master_seed=args.seed)
    start = time.time()
    grid = run_grid(base, GRID_K, GRID_P, GRID_TAU)
    for k in GRID_K:
        print(f"K={k}" + "".join(f"{p:>14}" for p in GRID_P))
        for tau in GRID_TAU:
            cells = (grid[(k, p, tau)] for p in GRID_P)
            print(f"tau={tau:<4}" + "".join(f"{c.md:8.2f}±{c.md_se:4.2f}" for c in cells))
    print(f"{time.time() - start:.0f}s")
    if args.out:
        emit_contour_grid(grid, args.out, base)


if __name__ == "__main__":
    main()
