"""Score model variants against the ordering checks of the acceptance suite.

Sweeps memory-update rule, off-team learning, candidates per slot and initial
memory size on a reduced number of runs per cell.

    python scripts/calibration_sweep.py --runs 100
"""

import argparse
import itertools

from nkteams.config import GRID_K, GRID_P, GRID_TAU, ScenarioConfig
from nkteams.engine import run_grid


def score(grid):
    def md(k, p, t):
        return grid[(k, p, t)].md

    row = {p: md(11, p, 1) for p in GRID_P}
    p_min = min(row, key=row.get)
    return {
        "onset": sum(md(k, 0.0, t) > md(k, 0.1, t) for k in GRID_K for t in GRID_TAU),
        "k3_order": sum(md(3, p, 200) <= md(3, p, 20) <= md(3, p, 1) for p in (0.2, 0.3, 0.4, 0.5)),
        "k3_high": round(md(3, 0.5, 200), 2),
        "k5_tau20_best": sum(md(5, p, 20) == min(md(5, p, t) for t in GRID_TAU) for p in (0.1, 0.2, 0.3, 0.4)),
        "k5_high_p01": round(md(5, 0.1, 200), 1),
        "k5_inverted_u": md(5, 0.5, 200) > md(5, 0.1, 200),
        "k11_order": sum(md(11, p, 1) < md(11, p, 20) < md(11, p, 200) for p in (0.1, 0.2, 0.3, 0.4)),
        "k11_min": (p_min, round(row[p_min], 1)),
    }


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--runs", type=int, default=100)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    for mode, offteam, j, q in itertools.product(("independent", "paired"), (False, True), (2, 3, 5), (2, 4, 8)):
        base = ScenarioConfig(runs=args.runs, master_seed=args.seed, j=j, q=q,
                              offteam_learning=offteam, memory_update=mode)
        grid = run_grid(base, GRID_K, GRID_P, GRID_TAU)
        print(mode, "offteam" if offteam else "members", f"j={j} q={q}", score(grid), flush=True)


if __name__ == "__main__":
    main()
