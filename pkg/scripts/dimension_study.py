"""How the effective dimension d moves the AIC/BIC choice on one set of sweeps.

Clusterings are computed once per seed and rescored for every d, so the only
thing that changes between columns is the likelihood model.

    python3 scripts/dimension_study.py --seeds 0 1 2 3 4
"""
import argparse
from collections import Counter

from topoclust.clustering import sweep
from topoclust.pipeline import ensemble_diagrams
from topoclust.selection import points_dimension, select_k
from topoclust.synthetic import generate_gaussians_ensemble


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, nargs="+", default=list(range(10)))
    ap.add_argument("--dims", default="1,2,4,8,16,points")
    ap.add_argument("--kmax", type=int, default=6)
    ap.add_argument("--patterns", type=int, default=3)
    args = ap.parse_args()

    dims = args.dims.split(",")
    tallies = {d: (Counter(), Counter()) for d in dims}
    for seed in args.seeds:
        ens = generate_gaussians_ensemble(30, args.patterns, seed=seed)
        ds = ensemble_diagrams(ens, "maxima")
        results = sweep(ds, 1, args.kmax, seed=seed, threads=1)
        for d in dims:
            value = points_dimension(ds) if d == "points" else float(d)
            rep = select_k(results, value)
            tallies[d][0][rep.selected_k_aic] += 1
            tallies[d][1][rep.selected_k_bic] += 1
        print(f"seed {seed}: mean points {sum(map(len, ds)) / len(ds):.1f}, "
              f"'points' d = {points_dimension(ds):.1f}")

    def fmt(c):
        return " ".join(f"k{k}:{v}" for k, v in sorted(c.items()))

    print(f"\nselected k over {len(args.seeds)} seeds (true k = {args.patterns})")
    for d in dims:
        aic, bic = tallies[d]
        print(f"d={d:>6}  AIC {fmt(aic):28s} BIC {fmt(bic)}")


if __name__ == "__main__":
    main()
