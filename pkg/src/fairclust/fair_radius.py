"""Fair radii: the distance within which each point expects a center."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from fairclust.errors import InputError
from fairclust.geometry import PointSet

# Rows are sorted in blocks of this many points when no cached matrix exists.
_BLOCK = 512


@dataclass(frozen=True, eq=False)
class FairRadii:
    """Per-point radius r_ell(x) together with the divisor and quota used."""

    ell: int
    radii: np.ndarray
    quota: int

    def __len__(self) -> int:
        return self.radii.shape[0]

    def __getitem__(self, i: int) -> float:
        return float(self.radii[i])


def quota_for(n: int, ell: int) -> int:
    if not (1 <= ell <= n):
        raise InputError(f"ell must lie in [1, n={n}], got {ell}")
    return -(-n // ell)


def fair_radii(ps: PointSet, ell: int) -> FairRadii:
    """Smallest r with |B(x, r)| >= ceil(n / ell), for every x.

    The point itself counts toward the quota and duplicates count with
    multiplicity, so ``ell == n`` gives all-zero radii.
    """
    q = quota_for(ps.n, int(ell))
    if ps.has_matrix:
        radii = np.sort(ps.matrix(), axis=1)[:, q - 1].copy()
    else:
        radii = np.empty(ps.n)
        for start in range(0, ps.n, _BLOCK):
            idx = np.arange(start, min(start + _BLOCK, ps.n))
            block = ps.columns(idx).T
            radii[idx] = np.sort(block, axis=1)[:, q - 1]
    radii.flags.writeable = False
    return FairRadii(ell=int(ell), radii=radii, quota=q)


def brute_force_fair_radius(ps: PointSet, ell: int, x: int) -> float:
    """Reference scan: try every distance from ``x`` as a radius, keep the smallest that meets the quota."""
    q = quota_for(ps.n, int(ell))
    row = ps.row(x).tolist()
    best = math.inf
    for r in row:
        count = sum(1 for dist in row if dist <= r)
        if count >= q and r < best:
            best = r
    return best
