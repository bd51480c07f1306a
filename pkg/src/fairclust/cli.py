"""Command-line entry point: ``fairclust {radii,cluster,compare,gen}``.

Exit codes: 0 ok, 2 input error, 3 local search did not converge (output is
still written), 4 an enabled guarantee check failed.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from fairclust.baselines import fair_k_center_jung, greedy_baseline, vanilla_local_search
from fairclust.critical_balls import build_critical_balls
from fairclust.errors import FairClustError
from fairclust.evaluation import ALGORITHMS, DEFAULT_K_GRID, compare, emit, resolve_cover
from fairclust.fair_radius import fair_radii
from fairclust.geometry import CostSpec, PointSet, parse_p
from fairclust.instances import (
    STANDIN_SHAPES,
    AdversarialSpec,
    IngestSpec,
    adversarial_instance,
    load_csv,
    random_instance,
    points_to_csv,
    standin_dataset,
)
from fairclust.local_search import DELTA, GAMMA, LSParams, fair_k_clustering
from fairclust.oracle import brute_force_optimal, fairness_ratio

log = logging.getLogger("fairclust")

EXIT_OK, EXIT_INPUT, EXIT_NONCONVERGED, EXIT_ASSERT = 0, 2, 3, 4
DEFAULT_SUBSAMPLE = 1000
GEN_CHOICES = ("adversarial", "random", *sorted(STANDIN_SHAPES))


@dataclass
class RunConfig:
    command: str
    args: argparse.Namespace

    @property
    def p(self) -> float:
        return parse_p(self.args.p)


def _k_grid(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad k grid {text!r}") from exc


def _cover(text: str):
    if text in ("theory", "experiment"):
        return text
    try:
        return float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"--cover must be theory, experiment or a number, got {text!r}") from exc


def _add_input(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("input (exactly one of --input / --gen)")
    g.add_argument("--input", type=Path, help="CSV file of points")
    g.add_argument("--gen", choices=GEN_CHOICES, help="generate an instance instead of reading one")
    g.add_argument("--columns", help="comma-separated column names or indices to read")
    g.add_argument("--subsample", type=int, default=None,
                   help=f"rows to sample from --input (default: all rows, capped at {DEFAULT_SUBSAMPLE})")
    g.add_argument("--normalize", action="store_true", help="min-max scale each input column")
    g.add_argument("--n", type=int, default=200, help="points for --gen random / stand-ins")
    g.add_argument("--d", type=int, default=2, help="dimension for --gen random")
    g.add_argument("--clusters", type=int, default=None, help="mixture components for --gen random (default --k)")
    g.add_argument("--spread", type=float, default=0.05, help="std of --gen random components")
    g.add_argument("--r", type=float, default=1.0, help="ring radius for --gen adversarial")
    g.add_argument("--R", type=float, default=100.0, help="node half-spacing for --gen adversarial")
    g.add_argument("--separation", type=float, default=10.0, help="block separation factor for --gen adversarial")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, default=None, help="output file (default: stdout)")


def _add_algo(p: argparse.ArgumentParser, cover_default: str) -> None:
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--p", default="1", help="cost exponent: 1, 2, inf or any real >= 1")
    p.add_argument("--t", type=int, default=1, help="maximum swap size (1..4)")
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--max-iters", type=int, default=None)
    p.add_argument("--cover", type=_cover, default=cover_default,
                   help="coverage multiplier: theory (6*alpha), experiment (3) or a number")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fairclust", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("radii", help="per-point fair radii as CSV")
    _add_input(p)
    p.add_argument("--k", type=int, required=True)

    p = sub.add_parser("cluster", help="run one algorithm and write the solution as JSON")
    _add_input(p)
    _add_algo(p, "theory")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--algo", choices=ALGORITHMS, default="fair_local_search")
    p.add_argument("--oracle", action="store_true",
                   help="also solve the alpha-fair problem exactly and check the cost bound")

    p = sub.add_parser("compare", help="run the algorithm x k grid and emit a report")
    _add_input(p)
    _add_algo(p, "experiment")
    p.add_argument("--k-grid", type=_k_grid, default=list(DEFAULT_K_GRID))
    p.add_argument("--k", type=int, default=None, help="single k (overrides --k-grid)")
    p.add_argument("--algo", action="append", choices=ALGORITHMS, default=None,
                   help="restrict to these algorithms (repeatable)")
    p.add_argument("--dataset", default=None, help="dataset label in the report")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--timing", action="store_true", help="fill wall_time_ms (makes output non-reproducible)")

    p = sub.add_parser("gen", help="write a generated instance as CSV")
    _add_input(p)
    p.add_argument("--k", type=int, default=3)
    return parser


def load_points(args: argparse.Namespace) -> PointSet:
    if (args.input is None) == (args.gen is None):
        raise FairClustError("give exactly one of --input or --gen")
    if args.input is not None:
        cols = args.columns.split(",") if args.columns else None
        size = args.subsample
        if size is None:
            full = load_csv(IngestSpec(args.input, cols, None, args.seed, args.normalize))
            if full.n <= DEFAULT_SUBSAMPLE:
                return full
            size = DEFAULT_SUBSAMPLE
        return load_csv(IngestSpec(args.input, cols, size, args.seed, args.normalize))
    k = getattr(args, "k", None) or 3
    if args.gen == "adversarial":
        n = max(args.n, k * k) if args.n else k * k
        return adversarial_instance(AdversarialSpec(k=k, n=n, r=args.r, R=args.R, separation=args.separation))
    if args.gen == "random":
        return random_instance(args.n, args.d, args.clusters or k, args.spread, args.seed)
    return standin_dataset(args.gen, args.n, args.seed)


def _write(text: str, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")


def _params(args) -> LSParams:
    return LSParams(t=args.t, epsilon=args.epsilon, max_iters=args.max_iters, seed=args.seed)


def cmd_radii(cfg: RunConfig) -> int:
    args = cfg.args
    ps = load_points(args)
    radii = fair_radii(ps, args.k)
    lines = ["point_index,r_k"] + [f"{i},{float(r)!r}" for i, r in enumerate(radii.radii)]
    _write("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_cluster(cfg: RunConfig) -> int:
    args = cfg.args
    ps = load_points(args)
    k = args.k
    spec = CostSpec(cfg.p, k)
    params = _params(args)
    radii = fair_radii(ps, k)
    cover = resolve_cover(args.cover, args.alpha)
    theory = args.cover == "theory"
    extra: dict = {"algo": args.algo, "alpha": args.alpha}

    if args.algo == "fair_local_search":
        sol, balls, _ = fair_k_clustering(ps, k, args.alpha, spec, params, cover_mult=cover, radii=radii)
        extra["balls"] = balls.to_dict()
    elif args.algo == "greedy":
        sol = greedy_baseline(ps, radii, k, args.alpha, cover, spec)
        extra["balls"] = build_critical_balls(ps, radii, args.alpha, cover).to_dict()
    elif args.algo == "fair_k_center":
        sol, res = fair_k_center_jung(ps, radii, k, spec=spec)
        extra.update(eta=res.eta, ball_count=res.ball_count, converged_to_k=res.converged_to_k)
    else:
        sol = vanilla_local_search(ps, k, spec, params)

    fmax, fmean, _ = fairness_ratio(ps, radii, sol.centers)
    audit = {"cost": sol.cost_value, "max_fairness_ratio": fmax, "mean_fairness_ratio": fmean}
    status = EXIT_OK
    fair_algo = args.algo in ("fair_local_search", "greedy")
    if fair_algo and theory and not fmax <= 7 * args.alpha:
        log.error("fairness audit failed: %.6g > 7 * alpha", fmax)
        status = EXIT_ASSERT
    if args.oracle:
        opt = brute_force_optimal(ps, k, spec, fairness=(args.alpha, radii))
        bound = 84.0 if spec.p == 1.0 else 16 * GAMMA * DELTA * (spec.p if math.isfinite(spec.p) else math.log2(ps.n))
        audit.update(opt_cost=opt.cost, cost_bound=bound)
        audit["cost_ratio"] = sol.cost_value / opt.cost if opt.cost > 0 else (0.0 if sol.cost_value == 0 else math.inf)
        if fair_algo and theory and params.t == 4 and not sol.cost_value <= bound * opt.cost:
            log.error("cost bound failed: %.6g > %.6g * OPT", sol.cost_value, bound)
            status = EXIT_ASSERT
    out = sol.to_dict()
    out.update(extra)
    out["audit"] = audit
    _write(json.dumps(out, sort_keys=True, indent=2) + "\n", args.out)
    if status == EXIT_OK and not sol.converged:
        return EXIT_NONCONVERGED
    return status


def cmd_compare(cfg: RunConfig) -> int:
    args = cfg.args
    ps = load_points(args)
    ks = [args.k] if args.k else args.k_grid
    dataset = args.dataset or (args.gen or (args.input.stem if args.input else "data"))
    report = compare(
        ps, ks, tuple(args.algo) if args.algo else ALGORITHMS, cfg.p, _params(args),
        args.cover, dataset, args.seed, args.timing,
    )
    _write(emit(report, args.format), args.out)
    if any(r.converged is False for r in report.rows):
        return EXIT_NONCONVERGED
    return EXIT_OK


def cmd_gen(cfg: RunConfig) -> int:
    ps = load_points(cfg.args)
    _write(points_to_csv(ps), cfg.args.out)
    return EXIT_OK


COMMANDS = {"radii": cmd_radii, "cluster": cmd_cluster, "compare": cmd_compare, "gen": cmd_gen}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return COMMANDS[args.command](RunConfig(args.command, args))
    except FairClustError as exc:
        log.error("%s", exc)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
