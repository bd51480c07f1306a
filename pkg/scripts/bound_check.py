"""Measure pipeline cost against the exact fair optimum on many small instances."""

import argparse
import numpy as np

from fairclust import (
    CostSpec,
    LSParams,
    brute_force_optimal,
    fair_k_clustering,
    fair_radii,
    fairness_ratio,
    random_instance,
)
from fairclust.errors import InfeasibleError


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--k", type=int, default=2)
    ap.add_argument("--max-n", type=int, default=12)
    ap.add_argument("--t", type=int, default=4)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    for p in (1.0, 2.0):
        ratios, fair, infeasible = [], [], 0
        for i in range(args.trials):
            n = int(rng.integers(args.k + 2, args.max_n + 1))
            alpha = float(rng.choice([1.0, 2.0]))
            ps = random_instance(n, int(rng.integers(1, 4)), args.k + 1, float(rng.choice([0.05, 0.2, 0.6])), i)
            spec = CostSpec(p, args.k)
            radii = fair_radii(ps, args.k)
            try:
                opt = brute_force_optimal(ps, args.k, spec, fairness=(alpha, radii))
            except InfeasibleError:
                infeasible += 1
                continue
            eps = 1 / (12 * args.k * p)
            sol, _, _ = fair_k_clustering(ps, args.k, alpha, spec, LSParams(t=args.t, epsilon=eps), radii=radii)
            ratios.append(sol.cost_value / opt.cost if opt.cost > 0 else 1.0)
            fair.append(fairness_ratio(ps, radii, sol.centers)[0] / alpha)
        r = np.array(ratios)
        print(f"p={p:g}: {r.size} instances ({infeasible} infeasible skipped)  cost/OPT mean {r.mean():.4f} "
              f"p95 {np.quantile(r, 0.95):.4f} max {r.max():.4f}  fairness/alpha max {max(fair):.3f}")


if __name__ == "__main__":
    main()
