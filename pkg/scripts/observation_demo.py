"""Show that the cost-optimal clustering can be arbitrarily unfair while the fair pipeline is not.

Sweeps R/r on the two-block instance and prints the fairness ratio of the
exact unconstrained optimum, of vanilla local search, and of the fair pipeline.
"""

import argparse

from fairclust import (
    AdversarialSpec,
    CostSpec,
    adversarial_instance,
    brute_force_optimal,
    fair_k_clustering,
    fair_radii,
    fairness_ratio,
    vanilla_local_search,
)
from fairclust.instances import adversarial_layout


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k", type=int, default=3)
    ap.add_argument("--n", type=int, default=12)
    ap.add_argument("--ratios", type=float, nargs="+", default=[5, 10, 100, 1000])
    args = ap.parse_args()

    print(f"{'R/r':>8} {'OPT ratio':>10} {'vanilla':>10} {'fair LS':>10} {'witness':>10}")
    for rr in args.ratios:
        spec = AdversarialSpec(k=args.k, n=args.n, r=1.0, R=rr)
        ps = adversarial_instance(spec)
        radii = fair_radii(ps, args.k)
        opt = brute_force_optimal(ps, args.k, CostSpec(1.0, args.k))
        van = vanilla_local_search(ps, args.k)
        fair, _, _ = fair_k_clustering(ps, args.k, 1.0)
        wit = adversarial_layout(spec).witness()
        vals = [fairness_ratio(ps, radii, s)[0] for s in (opt.centers, van.centers, fair.centers, wit)]
        print(f"{rr:8g} " + " ".join(f"{v:10.3f}" for v in vals))


if __name__ == "__main__":
    main()
