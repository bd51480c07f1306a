"""Experiment harness: run algorithms over a k grid, audit them, and write comparison tables."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from fairclust.baselines import fair_k_center_jung, greedy_baseline, vanilla_local_search
from fairclust.fair_radius import fair_radii
from fairclust.geometry import CostSpec, PointSet, power_sum
from fairclust.local_search import LSParams, Solution, fair_k_clustering
from fairclust.oracle import fairness_ratio

log = logging.getLogger(__name__)

ALGORITHMS = ("fair_local_search", "fair_k_center", "greedy", "vanilla_local_search")
REFERENCE = "fair_k_center"
DEFAULT_K_GRID = (5, 10, 15, 20, 25, 30)
CSV_COLUMNS = (
    "dataset", "algorithm", "k", "p", "cost", "cost_rel", "fair_max", "fair_mean",
    "fair_rel", "eta", "iterations", "wall_time_ms", "seed",
)
EXPERIMENT_COVER = 3.0


@dataclass
class EvalRow:
    dataset: str
    algorithm: str
    k: int
    p: float
    cost: Optional[float] = None
    cost_rel: Optional[float] = None
    fair_max: Optional[float] = None
    fair_mean: Optional[float] = None
    fair_rel: Optional[float] = None
    eta: Optional[float] = None
    iterations: Optional[int] = None
    wall_time_ms: Optional[float] = None
    seed: Optional[int] = None
    # p-th power sum (summed squares when p = 2); JSON only
    cost_pow: Optional[float] = None
    alpha: Optional[float] = None
    converged: Optional[bool] = None
    error: Optional[str] = None


@dataclass
class EvalReport:
    rows: list[EvalRow]

    def to_dict(self) -> dict:
        return {"columns": list(CSV_COLUMNS), "rows": [asdict(r) for r in self.rows]}

    @classmethod
    def from_dict(cls, data: dict) -> "EvalReport":
        names = {f.name for f in fields(EvalRow)}
        return cls(rows=[EvalRow(**{k: v for k, v in r.items() if k in names}) for r in data["rows"]])

    def select(self, algorithm: str, dataset: Optional[str] = None) -> list[EvalRow]:
        return [r for r in self.rows if r.algorithm == algorithm and (dataset is None or r.dataset == dataset)]

    def get(self, dataset: str, k: int, algorithm: str) -> Optional[EvalRow]:
        for r in self.rows:
            if (r.dataset, r.k, r.algorithm) == (dataset, k, algorithm):
                return r
        return None


def resolve_cover(mode: Union[str, float, None], alpha: float) -> Optional[float]:
    """``theory`` -> 6 alpha (returned as None), ``experiment`` -> 3, or an explicit multiplier."""
    if mode is None or mode == "theory":
        return None
    if mode == "experiment":
        return EXPERIMENT_COVER
    return float(mode)


def _audit(row: EvalRow, ps: PointSet, radii, sol: Solution, p: float) -> None:
    row.cost = sol.cost_value
    row.cost_pow = sol.cost_value if math.isinf(p) else power_sum(sol.nearest_dist, p)
    fmax, fmean, _ = fairness_ratio(ps, radii, sol.centers)
    row.fair_max, row.fair_mean = fmax, fmean
    row.iterations = sol.iterations
    row.converged = sol.converged


def _ratio(a: Optional[float], b: Optional[float]) -> Optional[float]:
    if a is None or b is None or b == 0 or math.isinf(b):
        return None
    return a / b


def _run_k(ps, k, algorithms, p, params, cover, dataset, seed, timing):
    try:
        spec = CostSpec(p, k)
        radii = fair_radii(ps, k)
    except Exception as exc:
        msg = f"{type(exc).__name__}: {exc}"
        log.error("dataset=%s k=%d skipped: %s", dataset, k, msg)
        return [EvalRow(dataset, name, k, p, seed=seed, error=msg) for name in algorithms]
    rows: dict[str, EvalRow] = {}

    def timed(fn):
        t0 = time.perf_counter()
        out = fn()
        return out, (time.perf_counter() - t0) * 1000.0

    ref = EvalRow(dataset, REFERENCE, k, p, seed=seed)
    eta = None
    try:
        (sol, res), ms = timed(lambda: fair_k_center_jung(ps, radii, k, spec=spec))
        eta = res.eta
        _audit(ref, ps, radii, sol, p)
        ref.eta, ref.alpha = eta, eta
        ref.wall_time_ms = ms if timing else None
    except Exception as exc:  # recorded per row; other rows continue
        ref.error = f"{type(exc).__name__}: {exc}"
    rows[REFERENCE] = ref

    alpha = eta if eta is not None else 1.0
    runners = {
        "fair_local_search": lambda: fair_k_clustering(
            ps, k, alpha, spec, params, cover_mult=resolve_cover(cover, alpha), radii=radii
        )[0],
        "greedy": lambda: greedy_baseline(ps, radii, k, alpha, resolve_cover(cover, alpha), spec),
        "vanilla_local_search": lambda: vanilla_local_search(ps, k, spec, params),
    }
    for name in algorithms:
        if name == REFERENCE:
            continue
        row = EvalRow(dataset, name, k, p, seed=seed, alpha=alpha if name != "vanilla_local_search" else None)
        try:
            sol, ms = timed(runners[name])
            _audit(row, ps, radii, sol, p)
            row.wall_time_ms = ms if timing else None
        except Exception as exc:
            row.error = f"{type(exc).__name__}: {exc}"
            log.error("dataset=%s k=%d %s failed: %s", dataset, k, name, row.error)
        rows[name] = row

    out = []
    for name in algorithms:
        row = rows[name]
        if ref.error is None and row.error is None:
            row.cost_rel = _ratio(row.cost, ref.cost)
            row.fair_rel = _ratio(row.fair_max, ref.fair_max)
        out.append(row)
    return out


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("FAIRCLUST_THREADS", "1")))
    except ValueError:
        return 1


def compare(
    ps: PointSet,
    k_values: Sequence[int] = DEFAULT_K_GRID,
    algorithms: Sequence[str] = ALGORITHMS,
    p: float = 1.0,
    params: Optional[LSParams] = None,
    cover: Union[str, float, None] = "experiment",
    dataset: str = "data",
    seed: Optional[int] = None,
    timing: bool = False,
) -> EvalReport:
    """Run every algorithm for every k and audit cost and fairness.

    Fair radii are recomputed at ell = k. The fair pipeline and greedy take
    alpha from the eta found by the fair k-center search for the same k.
    ``wall_time_ms`` is only filled when ``timing`` is set, which keeps the
    default report byte-reproducible.
    """
    unknown = [a for a in algorithms if a not in ALGORITHMS]
    if unknown:
        raise ValueError(f"unknown algorithms {unknown}; choose from {ALGORITHMS}")
    jobs = [int(k) for k in k_values]
    args = (tuple(algorithms), p, params, cover, dataset, seed, timing)
    workers = min(_workers(), len(jobs)) or 1
    if workers == 1:
        chunks = [_run_k(ps, k, *args) for k in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(lambda k: _run_k(ps, k, *args), jobs))
    rows = [r for chunk in chunks for r in chunk]
    rows.sort(key=lambda r: (r.dataset, r.k, r.algorithm))
    _warn_non_monotone(rows)
    return EvalReport(rows=rows)


def _warn_non_monotone(rows: list[EvalRow]) -> None:
    for name in ("fair_local_search", "vanilla_local_search"):
        series = [(r.k, r.cost) for r in rows if r.algorithm == name and r.cost is not None]
        for (k1, c1), (k2, c2) in zip(series, series[1:]):
            if c2 > c1:
                log.warning("%s cost rose from k=%d (%.6g) to k=%d (%.6g)", name, k1, c1, k2, c2)


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return format(v, ".6g")
    return str(v)


def to_csv(report: EvalReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in report.rows:
        w.writerow([_fmt(getattr(r, c)) for c in CSV_COLUMNS])
    return buf.getvalue()


def to_json(report: EvalReport) -> str:
    return json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n"


def emit(report: EvalReport, fmt: str = "csv", path: Union[str, Path, None] = None) -> str:
    """Serialise ``report`` as CSV (6 significant digits) or JSON (full precision); write to ``path`` if given."""
    if fmt == "csv":
        text = to_csv(report)
    elif fmt == "json":
        text = to_json(report)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def summarize(report: EvalReport, algorithm: str = "fair_local_search") -> dict[str, dict[str, float]]:
    """Average improvement factors against fair k-center, per dataset.

    ``cost_factor`` is mean(ref cost / cost) and ``fair_factor`` is
    mean(fair_max / ref fair_max); rows with errors or undefined ratios are skipped.
    """
    out: dict[str, dict[str, float]] = {}
    for ds in sorted({r.dataset for r in report.rows}):
        cf, ff = [], []
        for r in report.select(algorithm, ds):
            ref = report.get(ds, r.k, REFERENCE)
            if ref is None or r.error or ref.error:
                continue
            if r.cost and ref.cost is not None:
                cf.append(ref.cost / r.cost)
            if ref.fair_max and r.fair_max is not None and math.isfinite(r.fair_max):
                ff.append(r.fair_max / ref.fair_max)
        out[ds] = {
            "cost_factor": float(np.mean(cf)) if cf else math.nan,
            "fair_factor": float(np.mean(ff)) if ff else math.nan,
            "n_k": len(cf),
        }
    return out
