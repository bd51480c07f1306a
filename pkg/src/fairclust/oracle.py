"""Exhaustive ground truth for small instances and the fairness audit."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from fairclust.errors import InfeasibleError, InputError, OracleCapExceeded
from fairclust.fair_radius import FairRadii
from fairclust.geometry import CostSpec, PointSet, cost_from_dists, nearest_dists

DEFAULT_CAP = 2_000_000
_CHUNK = 4096


@dataclass(frozen=True)
class OracleResult:
    centers: tuple[int, ...]
    cost: float
    fairness_ratio: float
    feasible_count: int


def fairness_ratio(ps: PointSet, radii: FairRadii, centers: Iterable[int]):
    """Per-point ``d(x, S) / r_k(x)`` with its max and mean.

    A zero radius gives ratio 0 when the point sits on a center and ``inf``
    otherwise; a single ``inf`` makes both max and mean infinite.
    """
    d = nearest_dists(ps, centers)
    r = radii.radii
    pos = r > 0
    per_point = np.empty_like(d)
    per_point[pos] = d[pos] / r[pos]
    per_point[~pos] = np.where(d[~pos] > 0, np.inf, 0.0)
    if np.isinf(per_point).any():
        return math.inf, math.inf, per_point
    return float(per_point.max()), float(per_point.mean()), per_point


def brute_force_optimal(
    ps: PointSet,
    k: int,
    spec: CostSpec,
    fairness: Optional[tuple[float, FairRadii]] = None,
    cap: int = DEFAULT_CAP,
) -> OracleResult:
    """Minimum-cost k-subset of P, optionally restricted to alpha-fair sets.

    Enumeration is lexicographic and the lexicographically first set wins ties.
    """
    n = ps.n
    if not (1 <= k <= n):
        raise InputError(f"k must lie in [1, n={n}], got {k}")
    total = math.comb(n, k)
    if total > cap:
        raise OracleCapExceeded(f"C({n},{k}) = {total} candidate sets exceeds cap {cap}")
    D = ps.matrix()
    limit = None
    if fairness is not None:
        alpha, radii = fairness
        limit = float(alpha) * radii.radii
    p = spec.p

    best_val = math.inf
    best_sets: list[tuple[int, ...]] = []
    feasible = 0
    combos = itertools.combinations(range(n), k)
    while True:
        block = np.array(list(itertools.islice(combos, _CHUNK)), dtype=np.intp)
        if block.size == 0:
            break
        dmin = D[:, block].min(axis=2)  # n x m
        if limit is not None:
            ok = (dmin <= limit[:, None]).all(axis=0)
            block, dmin = block[ok], dmin[:, ok]
            if block.shape[0] == 0:
                continue
        feasible += block.shape[0]
        if math.isinf(p):
            vals = dmin.max(axis=0)
        elif p == 1.0:
            vals = dmin.sum(axis=0)
        else:
            vals = np.power(dmin, p).sum(axis=0)
        lo = vals.min()
        # exact re-evaluation of everything near the block minimum
        for j in np.flatnonzero(vals <= lo * (1 + 1e-9)):
            c = cost_from_dists(dmin[:, j], p)
            cand = tuple(int(v) for v in block[j])
            if c < best_val:
                best_val, best_sets = c, [cand]
            elif c == best_val:
                best_sets.append(cand)

    if not best_sets:
        raise InfeasibleError(
            f"no {k}-subset satisfies the fairness constraint"
            + ("" if fairness is None else f" at alpha={fairness[0]}")
        )
    centers = min(best_sets)
    if fairness is not None:
        ratio = fairness_ratio(ps, fairness[1], centers)[0]
    else:
        ratio = math.nan
    return OracleResult(centers=centers, cost=best_val, fairness_ratio=ratio, feasible_count=feasible)
