"""Greedy construction of critical balls and verifiers for their properties.

A critical ball set is built by repeatedly taking the uncovered point with the
smallest fair radius as a new center and marking as covered every uncovered
point ``x`` with ``d(x, c) <= cover_mult * r_k(x)``. With ``cover_mult = 6 alpha``
the result satisfies coverage (C-1), separation (C-2), and has at most ``k``
pairwise disjoint balls of radius ``alpha * r_k(c)``.
"""

from __future__ import annotations

import json
import weakref
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from fairclust.errors import InputError
from fairclust.fair_radius import FairRadii
from fairclust.geometry import PointSet


@dataclass(frozen=True, eq=False)
class CriticalBallSet:
    centers: tuple[int, ...]
    radii: tuple[float, ...]
    r_k: tuple[float, ...]
    alpha: float
    cover_mult: float
    _membership: weakref.WeakKeyDictionary = field(
        default_factory=weakref.WeakKeyDictionary, init=False, repr=False, compare=False
    )

    def __len__(self) -> int:
        return len(self.centers)

    def membership(self, ps: PointSet) -> np.ndarray:
        """Boolean (balls x n) matrix; entry [b, y] is ``d(c_b, y) <= radius_b``."""
        cached = self._membership.get(ps)
        if cached is not None:
            return cached
        if not self.centers:
            mem = np.zeros((0, ps.n), dtype=bool)
        else:
            D = ps.columns(list(self.centers)).T
            mem = D <= np.asarray(self.radii)[:, None]
        mem.flags.writeable = False
        self._membership[ps] = mem
        return mem

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "cover_mult": self.cover_mult,
            "balls": [
                {"center": c, "radius": r, "r_k": rk}
                for c, r, rk in zip(self.centers, self.radii, self.r_k)
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "CriticalBallSet":
        balls = data["balls"]
        return cls(
            centers=tuple(int(b["center"]) for b in balls),
            radii=tuple(float(b["radius"]) for b in balls),
            r_k=tuple(float(b["r_k"]) for b in balls),
            alpha=float(data["alpha"]),
            cover_mult=float(data["cover_mult"]),
        )

    @classmethod
    def empty(cls) -> "CriticalBallSet":
        return cls(centers=(), radii=(), r_k=(), alpha=1.0, cover_mult=1.0)


@dataclass(frozen=True)
class CriticalReport:
    c1_ok: bool
    c1_worst_point: Optional[int]
    c1_worst_ratio: float
    c2_ok: bool
    c2_worst_pair: Optional[tuple[int, int]]
    c2_worst_ratio: float
    disjoint_ok: bool
    ball_count: int


def greedy_cover(ps: PointSet, radii: FairRadii, cover_mult: float) -> list[int]:
    """Centers chosen by the min-radius greedy cover with coverage rule ``d <= cover_mult * r(x)``."""
    r = radii.radii
    order = np.argsort(r, kind="stable")
    threshold = cover_mult * r
    covered = np.zeros(ps.n, dtype=bool)
    centers: list[int] = []
    for c in order:
        if covered[c]:
            continue
        centers.append(int(c))
        covered |= ps.row(int(c)) <= threshold
    return centers


def build_critical_balls(
    ps: PointSet,
    radii: FairRadii,
    alpha: float = 1.0,
    cover_mult: Optional[float] = None,
) -> CriticalBallSet:
    """Critical balls for ``radii`` (computed with ell = k).

    ``cover_mult`` defaults to ``6 * alpha``; pass 3 for the cheaper coverage
    used in experiments (separation is then no longer guaranteed).
    """
    if alpha < 1:
        raise InputError(f"alpha must be >= 1, got {alpha}")
    if cover_mult is None:
        cover_mult = 6.0 * alpha
    if cover_mult < 1:
        raise InputError(f"cover_mult must be >= 1, got {cover_mult}")
    centers = greedy_cover(ps, radii, float(cover_mult))
    rk = tuple(float(radii.radii[c]) for c in centers)
    return CriticalBallSet(
        centers=tuple(centers),
        radii=tuple(float(alpha) * v for v in rk),
        r_k=rk,
        alpha=float(alpha),
        cover_mult=float(cover_mult),
    )


def verify_critical(
    ps: PointSet,
    radii: FairRadii,
    balls: CriticalBallSet,
    alpha: Optional[float] = None,
) -> CriticalReport:
    """Exhaustively check coverage against ``balls.cover_mult`` and separation at ``6 alpha``."""
    alpha = balls.alpha if alpha is None else float(alpha)
    r = radii.radii
    cs = list(balls.centers)
    if not cs:
        return CriticalReport(False, None, np.inf, True, None, 0.0, True, 0)

    D = ps.columns(cs)
    nearest = D.min(axis=1)
    threshold = balls.cover_mult * r
    bad = nearest > threshold
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(r > 0, nearest / np.where(r > 0, r, 1.0), np.where(nearest > 0, np.inf, 0.0))
    worst = int(np.argmax(ratio))
    c1_ok = not bool(bad.any())

    sep = 6.0 * alpha
    c2_ok = True
    c2_pair = None
    c2_worst = np.inf
    for a in range(len(cs)):
        for b in range(a + 1, len(cs)):
            dab = D[cs[a], b]
            bound = sep * max(r[cs[a]], r[cs[b]])
            rel = dab / bound if bound > 0 else (np.inf if dab > 0 else 0.0)
            if rel < c2_worst:
                c2_worst, c2_pair = float(rel), (cs[a], cs[b])
            if not dab > bound:
                c2_ok = False

    mem = balls.membership(ps)
    disjoint_ok = bool((mem.sum(axis=0) <= 1).all())
    return CriticalReport(
        c1_ok=c1_ok,
        c1_worst_point=worst,
        c1_worst_ratio=float(ratio[worst]),
        c2_ok=c2_ok,
        c2_worst_pair=c2_pair,
        c2_worst_ratio=c2_worst,
        disjoint_ok=disjoint_ok,
        ball_count=len(cs),
    )


def verify_feasible(
    balls: CriticalBallSet,
    centers: Iterable[int],
    ps: PointSet,
    radii: Optional[FairRadii] = None,
) -> bool:
    """True iff every ball contains at least one of ``centers``."""
    if len(balls) == 0:
        return True
    cs = sorted(set(int(c) for c in centers))
    if not cs:
        return False
    mem = balls.membership(ps)
    return bool(mem[:, cs].any(axis=1).all())
