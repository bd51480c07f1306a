"""Feasibility-constrained swap local search and the end-to-end fair pipeline.

Part I seeds the center set with the critical-ball centers and tops it up with
farthest-point additions. Part II repeatedly applies the first swap (in a fixed
canonical order) that keeps every critical ball hit and lowers the cost to at
most ``(1 - epsilon)`` of its current value.
"""

from __future__ import annotations

import itertools
import json
import logging
import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Sequence

import numpy as np

from fairclust.critical_balls import CriticalBallSet, build_critical_balls, verify_feasible
from fairclust.errors import InputError
from fairclust.fair_radius import FairRadii, fair_radii
from fairclust.geometry import CostSpec, PointSet, assign, cost_from_dists

log = logging.getLogger(__name__)

GAMMA = 6
DELTA = 3
# Vectorised pre-filter slack; every candidate it lets through is re-checked exactly.
_FILTER_SLACK = 1e-9
_CHUNK = 2048


@dataclass(frozen=True, eq=False)
class Solution:
    centers: tuple[int, ...]
    assignment: np.ndarray
    nearest_dist: np.ndarray
    second_dist: np.ndarray
    cost_value: float
    p: float
    iterations: int = 0
    converged: bool = True
    cost_history: tuple[float, ...] = ()
    center_history: tuple[tuple[int, ...], ...] = ()
    meta: dict = field(default_factory=dict)

    @property
    def k(self) -> int:
        return len(self.centers)

    def to_dict(self) -> dict:
        out = {
            "k": self.k,
            "p": "inf" if math.isinf(self.p) else self.p,
            "centers": list(self.centers),
            "assignment": self.assignment.tolist(),
            "cost": self.cost_value,
            "iterations": self.iterations,
            "converged": self.converged,
        }
        out.update(self.meta)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def make_solution(ps: PointSet, centers: Iterable[int], spec: CostSpec, **extra) -> Solution:
    cs = tuple(sorted({int(c) for c in centers}))
    a, d1, _, d2 = assign(ps, cs)
    return Solution(
        centers=cs,
        assignment=a,
        nearest_dist=d1,
        second_dist=d2,
        cost_value=cost_from_dists(d1, spec.p),
        p=spec.p,
        **extra,
    )


@dataclass(frozen=True)
class LSParams:
    """Local search knobs. ``epsilon`` and ``max_iters`` are derived from k, p and n when left unset."""

    t: int = 1
    epsilon: Optional[float] = None
    max_iters: Optional[int] = None
    seed: int = 0
    gamma: int = GAMMA
    delta: int = DELTA

    def __post_init__(self) -> None:
        if not (1 <= self.t <= 4):
            raise InputError(f"swap size t must be in 1..4, got {self.t}")
        if self.epsilon is not None and not (0 < self.epsilon < 1):
            raise InputError(f"epsilon must be in (0, 1), got {self.epsilon}")

    def resolve_epsilon(self, k: int, p: float, n: int) -> float:
        if self.epsilon is not None:
            return float(self.epsilon)
        # Infinite p is handled as p = log2 n, whose norm is within 2x of the max.
        p_eff = max(math.log2(n), 1.0) if math.isinf(p) else max(p, 1.0)
        return 1.0 / (2 * self.gamma * k * p_eff)

    def resolve_max_iters(self, n: int, eps: float) -> int:
        if self.max_iters is not None:
            return int(self.max_iters)
        return math.ceil(10 * math.log(n + 1) / eps)


def initialize(ps: PointSet, balls: CriticalBallSet, k: int, spec: Optional[CostSpec] = None) -> Solution:
    """Ball centers, then ``k - len(balls)`` farthest-point additions (ties to the smallest index)."""
    spec = spec or CostSpec(1.0, k)
    ell = len(balls)
    if k < ell:
        raise InputError(f"k={k} is smaller than the number of critical balls ({ell})")
    if k > ps.n:
        raise InputError(f"k={k} exceeds n={ps.n}")
    centers = list(balls.centers)
    if centers:
        dmin = ps.columns(centers).min(axis=1)
    else:
        dmin = np.full(ps.n, np.inf)
    chosen = np.zeros(ps.n, dtype=bool)
    chosen[centers] = True
    for _ in range(k - ell):
        score = np.where(chosen, -1.0, dmin)
        z = int(np.argmax(score))
        centers.append(z)
        chosen[z] = True
        dmin = np.minimum(dmin, ps.row(z))
    return make_solution(ps, centers, spec)


def _check_swap(sol: Solution, n: int, out_set: Sequence[int], in_set: Sequence[int]) -> None:
    cs = set(sol.centers)
    out_s, in_s = set(out_set), set(in_set)
    if len(out_s) != len(out_set) or len(in_s) != len(in_set):
        raise InputError("swap sets contain repeated indices")
    if len(out_s) != len(in_s) or not out_s:
        raise InputError("swap sets must be non-empty and of equal size")
    if not out_s <= cs:
        raise InputError(f"out_set {sorted(out_s - cs)} are not current centers")
    if in_s & cs:
        raise InputError(f"in_set {sorted(in_s & cs)} are already centers")
    if any(not (0 <= i < n) for i in in_s):
        raise InputError("in_set index out of range")


def evaluate_swap(
    ps: PointSet,
    sol: Solution,
    spec: CostSpec,
    out_set: Sequence[int],
    in_set: Sequence[int],
) -> float:
    """Cost of ``(centers | in_set) - out_set`` without touching ``sol``."""
    out_set, in_set = [int(v) for v in out_set], [int(v) for v in in_set]
    _check_swap(sol, ps.n, out_set, in_set)
    if len(out_set) == 1:
        base = np.where(sol.assignment == out_set[0], sol.second_dist, sol.nearest_dist)
        new = np.minimum(base, ps.row(in_set[0]))
    else:
        keep = [c for c in sol.centers if c not in set(out_set)] + in_set
        new = ps.columns(keep).min(axis=1)
    return cost_from_dists(new, spec.p)


def _agg(block: np.ndarray, p: float) -> np.ndarray:
    """Column-wise p-th power sums (or maxima) used for vectorised filtering."""
    if math.isinf(p):
        return block.max(axis=0)
    if p == 1.0:
        return block.sum(axis=0)
    return np.power(block, p).sum(axis=0)


def _filter_bound(target: float, p: float) -> float:
    if math.isinf(p) or p == 1.0:
        return target * (1 + _FILTER_SLACK)
    return target**p * (1 + _FILTER_SLACK)


class _Searcher:
    """Canonical-order scan for the first improving feasible swap."""

    def __init__(self, ps: PointSet, balls: CriticalBallSet, spec: CostSpec, t: int):
        self.ps = ps
        self.spec = spec
        self.t = t
        self.mem = balls.membership(ps)
        self.D = ps.matrix() if ps.has_matrix else None

    def _cols(self, idx) -> np.ndarray:
        if self.D is not None:
            return self.D[:, idx]
        return self.ps.columns(idx)

    def _orphaned(self, centers: Sequence[int], out: Sequence[int]) -> np.ndarray:
        """Balls left without a center once ``out`` is removed."""
        if self.mem.shape[0] == 0:
            return np.zeros(0, dtype=np.intp)
        remaining = [c for c in centers if c not in set(out)]
        if not remaining:
            return np.arange(self.mem.shape[0])
        hit = self.mem[:, remaining].any(axis=1)
        return np.flatnonzero(~hit)

    def find(self, sol: Solution, target: float):
        """First feasible swap with exact cost ``<= target``; returns ``(out, in, cost)`` or ``None``."""
        n = self.ps.n
        centers = list(sol.centers)
        is_center = np.zeros(n, dtype=bool)
        is_center[centers] = True
        outside = np.flatnonzero(~is_center)
        if outside.size == 0:
            return None
        bound = _filter_bound(target, self.spec.p)
        for size in range(1, min(self.t, len(centers), outside.size) + 1):
            if size == 1:
                hit = self._scan_single(sol, centers, outside, target, bound)
            else:
                hit = self._scan_multi(sol, centers, outside, size, target, bound)
            if hit is not None:
                return hit
        return None

    def _confirm(self, sol, out, cand_in, order, target):
        for y in order:
            ins = [int(v) for v in np.atleast_1d(cand_in[y])]
            c = evaluate_swap(self.ps, sol, self.spec, out, ins)
            if c <= target:
                return list(out), ins, c
        return None

    def _scan_single(self, sol, centers, outside, target, bound):
        p = self.spec.p
        for c in centers:
            orphan = self._orphaned(centers, [c])
            if orphan.size:
                feasible = self.mem[np.ix_(orphan, outside)].all(axis=0)
                cands = outside[feasible]
            else:
                cands = outside
            if cands.size == 0:
                continue
            base = np.where(sol.assignment == c, sol.second_dist, sol.nearest_dist)
            for start in range(0, cands.size, _CHUNK):
                chunk = cands[start : start + _CHUNK]
                vals = _agg(np.minimum(base[:, None], self._cols(chunk)), p)
                good = np.flatnonzero(vals <= bound)
                if good.size:
                    hit = self._confirm(sol, [c], chunk, good, target)
                    if hit is not None:
                        return hit
        return None

    def _scan_multi(self, sol, centers, outside, size, target, bound):
        p = self.spec.p
        for out in itertools.combinations(centers, size):
            orphan = self._orphaned(centers, out)
            remaining = [c for c in centers if c not in out]
            base = self._cols(remaining).min(axis=1) if remaining else np.full(self.ps.n, np.inf)
            combos = itertools.combinations(outside.tolist(), size)
            while True:
                block = np.array(list(itertools.islice(combos, _CHUNK)), dtype=np.intp)
                if block.size == 0:
                    break
                if orphan.size:
                    # every orphaned ball must contain one of the incoming points
                    feasible = self.mem[orphan][:, block].any(axis=2).all(axis=0)
                    block = block[feasible]
                    if block.size == 0:
                        continue
                newd = base[:, None]
                for col in range(size):
                    newd = np.minimum(newd, self._cols(block[:, col]))
                vals = _agg(newd, p)
                good = np.flatnonzero(vals <= bound)
                if good.size:
                    hit = self._confirm(sol, list(out), block, good, target)
                    if hit is not None:
                        return hit
        return None


def local_search(
    ps: PointSet,
    balls: CriticalBallSet,
    init: Solution,
    spec: CostSpec,
    params: Optional[LSParams] = None,
) -> Solution:
    """Run swap local search from ``init`` until it is (t, epsilon)-stable.

    Swaps are tried by ascending size, then lexicographically by
    ``(out_set, in_set)``; the first feasible one reaching
    ``cost <= (1 - epsilon) * current`` is applied. A zero-cost solution is
    already stable. Hitting ``max_iters`` returns the current solution with
    ``converged=False``.
    """
    params = params or LSParams()
    if not verify_feasible(balls, init.centers, ps):
        raise InputError("initial center set is not feasible for the critical balls")
    k = len(init.centers)
    eps = params.resolve_epsilon(k, spec.p, ps.n)
    max_iters = params.resolve_max_iters(ps.n, eps)
    searcher = _Searcher(ps, balls, spec, params.t)

    sol = make_solution(ps, init.centers, spec)
    costs = [sol.cost_value]
    history = [sol.centers]
    converged = False
    accepted = 0
    while True:
        if sol.cost_value == 0.0:
            converged = True
            break
        if accepted >= max_iters:
            log.warning("local search hit max_iters=%d before converging", max_iters)
            break
        target = (1.0 - eps) * sol.cost_value
        hit = searcher.find(sol, target)
        if hit is None:
            converged = True
            break
        out, ins, _ = hit
        new_centers = [c for c in sol.centers if c not in set(out)] + ins
        sol = make_solution(ps, new_centers, spec)
        accepted += 1
        costs.append(sol.cost_value)
        history.append(sol.centers)
        log.debug("iter %d: swap out %s in %s -> cost %.6g", accepted, out, ins, sol.cost_value)

    return replace(
        sol,
        iterations=accepted,
        converged=converged,
        cost_history=tuple(costs),
        center_history=tuple(history),
        meta={"epsilon": eps, "t": params.t},
    )


def fair_k_clustering(
    ps: PointSet,
    k: int,
    alpha: float = 1.0,
    spec: Optional[CostSpec] = None,
    params: Optional[LSParams] = None,
    cover_mult: Optional[float] = None,
    radii: Optional[FairRadii] = None,
) -> tuple[Solution, CriticalBallSet, FairRadii]:
    """Fair radii at ell = k, critical balls, greedy seeding, then constrained local search."""
    if not (1 <= k <= ps.n):
        raise InputError(f"k must lie in [1, n={ps.n}], got {k}")
    if alpha < 1:
        raise InputError(f"alpha must be >= 1, got {alpha}")
    spec = spec or CostSpec(1.0, k)
    if spec.k != k:
        spec = CostSpec(spec.p, k)
    if radii is None:
        radii = fair_radii(ps, k)
    balls = build_critical_balls(ps, radii, alpha, cover_mult)
    init = initialize(ps, balls, k, spec)
    sol = local_search(ps, balls, init, spec, params)
    return sol, balls, radii
