"""Point storage, Euclidean distances and the l_p clustering cost."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.spatial.distance import cdist

from fairclust.errors import InputError

INFINITY = math.inf

# Full pairwise matrices are cached up to this many points.
DEFAULT_CACHE_THRESHOLD = 4096


@dataclass(frozen=True, eq=False)
class PointSet:
    """Immutable n x d table of finite coordinates.

    When ``n <= cache_threshold`` the full distance matrix is computed once at
    construction and every distance query reads from it, so all callers see
    bit-identical values for the same pair.
    """

    coords: np.ndarray
    cache_threshold: int = DEFAULT_CACHE_THRESHOLD
    _dist: Optional[np.ndarray] = field(default=None, init=False, repr=False)

    def __post_init__(self) -> None:
        coords = np.array(self.coords, dtype=np.float64, copy=True)
        if coords.ndim == 1:
            coords = coords.reshape(-1, 1)
        if coords.ndim != 2 or coords.shape[0] < 1 or coords.shape[1] < 1:
            raise InputError(f"coords must be a non-empty n x d table, got shape {coords.shape}")
        if not np.all(np.isfinite(coords)):
            raise InputError("coords contain NaN or infinite values")
        coords.flags.writeable = False
        object.__setattr__(self, "coords", coords)
        if coords.shape[0] <= self.cache_threshold:
            dist = cdist(coords, coords)
            dist.flags.writeable = False
            object.__setattr__(self, "_dist", dist)

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    @property
    def d(self) -> int:
        return self.coords.shape[1]

    @property
    def has_matrix(self) -> bool:
        return self._dist is not None

    def check_index(self, i: int) -> int:
        if not (0 <= int(i) < self.n):
            raise InputError(f"point index {i} out of range for n={self.n}")
        return int(i)

    def row(self, i: int) -> np.ndarray:
        """Distances from point ``i`` to every point."""
        i = self.check_index(i)
        if self._dist is not None:
            return self._dist[i]
        return cdist(self.coords[i : i + 1], self.coords)[0]

    def columns(self, idx: Sequence[int] | np.ndarray) -> np.ndarray:
        """n x len(idx) matrix of distances from every point to ``idx``."""
        idx = np.asarray(idx, dtype=np.intp)
        if self._dist is not None:
            return self._dist[:, idx]
        return cdist(self.coords, self.coords[idx])

    def matrix(self) -> np.ndarray:
        if self._dist is not None:
            return self._dist
        return cdist(self.coords, self.coords)


@dataclass(frozen=True)
class CostSpec:
    """Exponent ``p`` of the l_p cost (``INFINITY`` for the max) and center budget ``k``."""

    p: float = 1.0
    k: int = 1

    def __post_init__(self) -> None:
        p = float(self.p)
        if math.isnan(p) or p < 1:
            raise InputError(f"cost exponent p must be >= 1 or inf, got {self.p}")
        if int(self.k) < 1:
            raise InputError(f"k must be >= 1, got {self.k}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "k", int(self.k))

    @property
    def is_max(self) -> bool:
        return math.isinf(self.p)


def parse_p(text: str | float) -> float:
    """Accept ``1``, ``2``, ``inf`` or any real ``>= 1``."""
    if isinstance(text, str) and text.strip().lower() in {"inf", "infinity", "max"}:
        return INFINITY
    try:
        p = float(text)
    except (TypeError, ValueError) as exc:
        raise InputError(f"cannot parse p={text!r}") from exc
    if math.isnan(p) or p < 1:
        raise InputError(f"p must be >= 1 or inf, got {text!r}")
    return p


def distance(ps: PointSet, i: int, j: int) -> float:
    i = ps.check_index(i)
    j = ps.check_index(j)
    return float(ps.row(i)[j])


def power_sum(dists: np.ndarray, p: float) -> float:
    """Compensated sum of ``dists**p`` (exact-rounded via ``math.fsum``)."""
    if p == 1.0:
        return math.fsum(dists.tolist())
    return math.fsum(np.power(dists, p).tolist())


def cost_from_dists(dists: np.ndarray, p: float) -> float:
    """(sum_x d_x^p)^(1/p), or max_x d_x when p is infinite."""
    dists = np.asarray(dists, dtype=np.float64)
    if dists.size == 0:
        return 0.0
    if math.isinf(p):
        return float(dists.max())
    if p == 1.0:
        return power_sum(dists, p)
    m = float(dists.max())
    if m == 0.0:
        return 0.0
    # scale by the max so tiny or huge distances neither underflow nor overflow
    return m * power_sum(dists / m, p) ** (1.0 / p)


def _center_array(ps: PointSet, centers: Iterable[int]) -> np.ndarray:
    cs = sorted({ps.check_index(c) for c in centers})
    if not cs:
        raise InputError("center set is empty")
    return np.asarray(cs, dtype=np.intp)


def nearest_dists(ps: PointSet, centers: Iterable[int]) -> np.ndarray:
    """d(x, centers) for every x."""
    cs = _center_array(ps, centers)
    return ps.columns(cs).min(axis=1)


def cost(ps: PointSet, centers: Iterable[int], spec: CostSpec) -> float:
    return cost_from_dists(nearest_dists(ps, centers), spec.p)


def assign(ps: PointSet, centers: Iterable[int]):
    """Nearest and second-nearest center for every point.

    Returns ``(nearest_idx, nearest_dist, second_idx, second_dist)`` arrays;
    ``second_idx`` is -1 and ``second_dist`` is inf when only one center exists.
    Ties go to the smallest center index.
    """
    cs = _center_array(ps, centers)
    D = ps.columns(cs)
    n = ps.n
    rows = np.arange(n)
    first = np.argmin(D, axis=1)
    d1 = D[rows, first]
    if cs.size == 1:
        return cs[first], d1, np.full(n, -1, dtype=np.intp), np.full(n, np.inf)
    D2 = D.copy()
    D2[rows, first] = np.inf
    second = np.argmin(D2, axis=1)
    d2 = D2[rows, second]
    return cs[first], d1, cs[second], d2


def nearest_two(ps: PointSet, centers: Iterable[int], x: int):
    """(nearest index, nearest dist, second index or None, second dist or inf) for one point."""
    x = ps.check_index(x)
    cs = _center_array(ps, centers)
    row = ps.row(x)[cs]
    order = np.argsort(row, kind="stable")
    c1, d1 = int(cs[order[0]]), float(row[order[0]])
    if cs.size == 1:
        return c1, d1, None, INFINITY
    return c1, d1, int(cs[order[1]]), float(row[order[1]])


def aspect_ratio(ps: PointSet) -> float:
    """Max pairwise distance over min nonzero pairwise distance (inf if all coincide)."""
    D = ps.matrix()
    nz = D[D > 0]
    if nz.size == 0:
        return INFINITY
    return float(nz.max() / nz.min())
