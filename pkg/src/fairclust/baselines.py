"""Comparison algorithms: eta-searched fair k-center, greedy seeding alone, unconstrained local search."""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from fairclust.critical_balls import CriticalBallSet, build_critical_balls, greedy_cover
from fairclust.fair_radius import FairRadii
from fairclust.geometry import CostSpec, PointSet
from fairclust.local_search import LSParams, Solution, initialize, local_search, make_solution

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class EtaSearchResult:
    eta: float
    ball_count: int
    converged_to_k: bool
    iterations: int
    monotone: bool = True


def _pad_farthest(ps: PointSet, centers: list[int], k: int) -> list[int]:
    centers = list(centers)
    dmin = ps.columns(centers).min(axis=1)
    chosen = np.zeros(ps.n, dtype=bool)
    chosen[centers] = True
    while len(centers) < k:
        z = int(np.argmax(np.where(chosen, -1.0, dmin)))
        centers.append(z)
        chosen[z] = True
        dmin = np.minimum(dmin, ps.row(z))
    return centers


def fair_k_center_jung(
    ps: PointSet,
    radii: FairRadii,
    k: int,
    tol: float = 1e-6,
    max_bsearch: int = 40,
    spec: Optional[CostSpec] = None,
) -> tuple[Solution, EtaSearchResult]:
    """Binary-search eta in [1, 2] so the eta-cover greedy yields exactly k balls.

    The cover rule is ``d(x, c) <= eta * r_k(x)``. If no probe hits k exactly,
    the smallest probed eta whose ball count stays at or below k is used and
    the set is padded with farthest points (``converged_to_k=False``).
    """
    spec = spec or CostSpec(1.0, k)
    probes: dict[float, list[int]] = {}

    def probe(eta: float) -> list[int]:
        if eta not in probes:
            probes[eta] = greedy_cover(ps, radii, eta)
        return probes[eta]

    lo, hi = 1.0, 2.0
    steps = 0
    centers = probe(lo)
    eta = lo
    if len(centers) > k:
        # count(2) <= k always: 2-cover balls of radius r_k are disjoint and each holds ceil(n/k) points
        centers = probe(hi)
        eta = hi
        while len(centers) != k and steps < max_bsearch and hi - lo > tol:
            mid = 0.5 * (lo + hi)
            steps += 1
            cm = probe(mid)
            if len(cm) > k:
                lo = mid
            else:
                hi = mid
                centers, eta = cm, mid

    ordered = sorted(probes.items())
    counts = [len(c) for _, c in ordered]
    monotone = all(a >= b for a, b in zip(counts, counts[1:]))
    if not monotone:
        log.warning("ball count is not monotone in eta on this instance: %s", counts)

    count = len(centers)
    converged = count == k
    if count < k:
        centers = _pad_farthest(ps, centers, k)
    sol = make_solution(ps, centers, spec)
    result = EtaSearchResult(eta=eta, ball_count=count, converged_to_k=converged, iterations=steps, monotone=monotone)
    sol = replace(sol, meta={"eta": eta, "ball_count": count, "converged_to_k": converged})
    return sol, result


def greedy_baseline(
    ps: PointSet,
    radii: FairRadii,
    k: int,
    alpha: float = 1.0,
    cover_mult: Optional[float] = None,
    spec: Optional[CostSpec] = None,
) -> Solution:
    """Critical-ball centers plus farthest-point additions, with no local search."""
    balls = build_critical_balls(ps, radii, alpha, cover_mult)
    return initialize(ps, balls, k, spec or CostSpec(1.0, k))


def vanilla_local_search(
    ps: PointSet,
    k: int,
    spec: Optional[CostSpec] = None,
    params: Optional[LSParams] = None,
    init: Optional[Solution] = None,
) -> Solution:
    """Swap local search with no fairness constraint.

    Starts from ``init`` when given, otherwise from a farthest-first traversal
    seeded at point 0.
    """
    spec = spec or CostSpec(1.0, k)
    empty = CriticalBallSet.empty()
    if init is None:
        init = initialize(ps, empty, k, spec)
    return local_search(ps, empty, init, spec, params)
