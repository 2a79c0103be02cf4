#!/usr/bin/env python3
"""Benchmark the compiled kernels against the numpy fallback.

Runs the three hot kernels on the default 200x100 lattice of the bundled
scenario, checks both backends agree, and prints a timing table.

    python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from uavcell.data import paper_scenario_path
from uavcell.density import Grid
from uavcell.kernels import _fallback
from uavcell.model import load_scenario

try:
    from uavcell.kernels import _core
except ImportError:
    _core = None


def timeit(fn, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    scenario = load_scenario(paper_scenario_path())
    grid = Grid.from_spec(scenario.region, scenario.grid)
    env = scenario.env
    uav = scenario.uavs[0]
    fw = scenario.density.values(grid.x, grid.y) * grid.cell_area
    ncand = 24 * 24
    rng = np.random.default_rng(0)
    cx = rng.uniform(scenario.region.x_lo, scenario.region.x_hi, ncand)
    cy = rng.uniform(scenario.region.y_lo, scenario.region.y_hi, ncand)
    args = (env.c_env, env.d_env, env.eta, env.alpha)

    cases = [
        ("mean_loss_map (20k pts)",
         lambda m: m.mean_loss_map(grid.x, grid.y, uav.x, uav.y, uav.h, *args)),
        ("weighted_loss_sum (20k pts)",
         lambda m: m.weighted_loss_sum(grid.x, grid.y, fw, uav.x, uav.y,
                                       uav.h, *args)),
        (f"candidate_loss_sums ({ncand} cands x 20k pts)",
         lambda m: m.candidate_loss_sums(grid.x, grid.y, fw, cx, cy, uav.h,
                                         *args)),
    ]

    if _core is None:
        print("compiled kernels not built; showing numpy fallback only\n")
    print(f"{'kernel':44s} {'numpy':>10s} {'cython':>10s} {'speedup':>8s}")
    for name, call in cases:
        t_np = timeit(lambda: call(_fallback))
        if _core is not None:
            ref = np.atleast_1d(call(_fallback))
            got = np.atleast_1d(call(_core))
            assert np.allclose(ref, got, rtol=1e-12), f"{name}: backends disagree"
            t_cy = timeit(lambda: call(_core))
            print(f"{name:44s} {t_np*1e3:9.2f}ms {t_cy*1e3:9.2f}ms "
                  f"{t_np/t_cy:7.1f}x")
        else:
            print(f"{name:44s} {t_np*1e3:9.2f}ms {'-':>10s} {'-':>8s}")


if __name__ == "__main__":
    main()
