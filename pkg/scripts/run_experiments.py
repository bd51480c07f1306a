"""Cost/fairness comparison over the k grid on the three stand-in datasets (or real CSVs).

    python scripts/run_experiments.py --out results/
    python scripts/run_experiments.py --data-dir ~/uci --out results/ --p 2
"""

import argparse
import logging
from pathlib import Path

from fairclust import IngestSpec, LSParams, compare, emit, load_csv, standin_dataset
from fairclust.evaluation import ALGORITHMS, DEFAULT_K_GRID, summarize
from fairclust.geometry import parse_p

REAL_COLUMNS = {
    "diabetes": ["age", "time_in_hospital"],
    "bank": ["age", "balance", "duration"],
    "census": ["age", "fnlwgt", "education-num", "capital-gain", "hours-per-week"],
}


def load(name, data_dir, n, seed):
    if data_dir is not None:
        path = data_dir / f"{name}.csv"
        if path.is_file():
            logging.info("reading %s", path)
            return load_csv(IngestSpec(path, REAL_COLUMNS[name], n, seed)), "real"
    return standin_dataset(name, n, seed), "stand-in"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--data-dir", type=Path, default=None, help="folder holding diabetes.csv, bank.csv, census.csv")
    ap.add_argument("--datasets", nargs="+", default=list(REAL_COLUMNS))
    ap.add_argument("--n", type=int, default=1000)
    ap.add_argument("--p", default="1")
    ap.add_argument("--t", type=int, default=1)
    ap.add_argument("--cover", default="experiment")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", type=Path, default=Path("results"))
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    args.out.mkdir(parents=True, exist_ok=True)
    p = parse_p(args.p)
    for name in args.datasets:
        ps, source = load(name, args.data_dir, args.n, args.seed)
        rep = compare(ps, DEFAULT_K_GRID, ALGORITHMS, p, LSParams(t=args.t), args.cover, name, args.seed, timing=True)
        emit(rep, "csv", args.out / f"{name}.csv")
        emit(rep, "json", args.out / f"{name}.json")
        s = summarize(rep)[name]
        print(f"{name:9s} ({source}, n={ps.n}, d={ps.d}): FairKCenter cost / LS cost = {s['cost_factor']:.3f}, "
              f"LS fairness / FairKCenter fairness = {s['fair_factor']:.3f}")
        for k in DEFAULT_K_GRID:
            ls, ref = rep.get(name, k, "fair_local_search"), rep.get(name, k, "fair_k_center")
            print(f"  k={k:2d}  cost {ls.cost:12.6g} vs {ref.cost:12.6g}   fair_max {ls.fair_max:.3f} vs {ref.fair_max:.3f}"
                  f"   eta={ref.eta:.4f}")


if __name__ == "__main__":
    main()
