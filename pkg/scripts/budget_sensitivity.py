"""Selected k and sweep time as the per-k time budget shrinks.

    python3 scripts/budget_sensitivity.py --budgets 0.01 0.05 0.5 10 --seeds 0 1 2
"""
import argparse
import time
from collections import Counter

from topoclust.budget import TimeBudget
from topoclust.clustering import sweep
from topoclust.pipeline import ensemble_diagrams
from topoclust.selection import resolve_dimension, select_k
from topoclust.synthetic import generate_gaussians_ensemble


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--budgets", type=float, nargs="+", default=[0.01, 0.05, 0.1, 0.5, 10.0])
    ap.add_argument("--seeds", type=int, nargs="+", default=list(range(10)))
    ap.add_argument("--kmax", type=int, default=6)
    args = ap.parse_args()

    ensembles = {
        s: ensemble_diagrams(generate_gaussians_ensemble(30, 3, seed=s), "maxima") for s in args.seeds
    }
    print("t_max[s]  picks(aic/bic)                 converged k  slowest sweep[s]")
    for budget in args.budgets:
        picks, conv, slowest = Counter(), 0, 0.0
        for seed, ds in ensembles.items():
            t0 = time.perf_counter()
            results = sweep(ds, 1, args.kmax, budget_per_k=TimeBudget(budget), seed=seed, threads=1)
            slowest = max(slowest, time.perf_counter() - t0)
            rep = select_k(results, resolve_dimension("auto", ds))
            picks[f"{rep.selected_k_aic}/{rep.selected_k_bic}"] += 1
            conv += sum(r.converged for r in results)
        total = len(ensembles) * args.kmax
        text = ", ".join(f"{k}x{v}" for k, v in sorted(picks.items()))
        print(f"{budget:8.3f}  {text:30s} {conv:3d}/{total:<3d}      {slowest:.2f}")


if __name__ == "__main__":
    main()
