"""Instance sources: CSV ingestion, Gaussian mixtures, dataset stand-ins and the unfairness construction."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from fairclust.errors import InputError
from fairclust.geometry import PointSet


@dataclass(frozen=True)
class AdversarialSpec:
    """Parameters of the instance on which the unconstrained optimum is arbitrarily unfair.

    ``separation`` is the factor c in ``M = D = c * 2n(R + r)``.
    """

    k: int = 3
    n: int = 12
    r: float = 1.0
    R: float = 100.0
    separation: float = 10.0

    def __post_init__(self) -> None:
        if self.k < 2:
            raise InputError("adversarial instance needs k >= 2")
        if self.k * self.k > self.n:
            raise InputError(f"adversarial instance needs k^2 <= n, got k={self.k}, n={self.n}")
        if not (self.R > self.r > 0):
            raise InputError("adversarial instance needs R > r > 0")
        if self.separation < 10:
            raise InputError("separation factor must be >= 10")

    @property
    def M(self) -> float:
        return self.separation * 2 * self.n * (self.R + self.r)

    @property
    def D(self) -> float:
        return self.M

    @property
    def ring_size(self) -> int:
        """Points placed at distance r around each right-hand node (excluding the node point)."""
        return (self.n - (self.k - 1)) // (self.k - 1) - 1


@dataclass(frozen=True)
class AdversarialLayout:
    left: tuple[int, ...]
    nodes: tuple[int, ...]
    rings: tuple[tuple[int, ...], ...]

    def witness(self) -> tuple[int, ...]:
        """All node points plus one left point: a 1-fair center set."""
        return tuple(sorted(self.nodes + self.left[:1]))


def adversarial_layout(spec: AdversarialSpec) -> AdversarialLayout:
    k, m = spec.k, spec.ring_size
    left = tuple(range(k - 1))
    nodes, rings = [], []
    idx = k - 1
    for _ in range(k - 1):
        nodes.append(idx)
        rings.append(tuple(range(idx + 1, idx + 1 + m)))
        idx += 1 + m
    return AdversarialLayout(left=left, nodes=tuple(nodes), rings=tuple(rings))


def adversarial_instance(spec: AdversarialSpec) -> PointSet:
    """Two far-apart blocks in ``2(k-1)+1`` dimensions.

    Left: k-1 points forming a regular simplex with side M. Right: k-1 nodes on
    a regular simplex with side 2R, each carrying one point on the node and
    ``ring_size`` points at distance exactly r, spread evenly on a circle. The
    right block is lifted by D along the last axis, so every cross distance is
    at least D. Point order follows :func:`adversarial_layout`.
    """
    k, m = spec.k, spec.ring_size
    km = k - 1
    dim = 2 * km + 1
    rows = []
    for i in range(km):
        x = np.zeros(dim)
        x[i] = spec.M / math.sqrt(2)
        rows.append(x)
    for j in range(km):
        node = np.zeros(dim)
        a = km + j
        node[a] = spec.R * math.sqrt(2)
        node[-1] = spec.D
        rows.append(node)
        b = km + (j + 1) % km
        for s in range(m):
            pt = node.copy()
            if b != a:
                theta = 2 * math.pi * s / m
                pt[a] += spec.r * math.cos(theta)
                pt[b] += spec.r * math.sin(theta)
            else:
                # single right axis (k = 2): alternate sides of the node
                pt[a] += spec.r if s % 2 == 0 else -spec.r
            rows.append(pt)
    return PointSet(np.vstack(rows))


def random_instance(n: int, d: int, k: int, spread: float, seed: int) -> PointSet:
    """Gaussian mixture: k uniform centers in [0,1]^d, point i drawn around center i mod k."""
    if not (n >= k >= 1) or d < 1:
        raise InputError(f"need n >= k >= 1 and d >= 1, got n={n}, k={k}, d={d}")
    rng = np.random.default_rng(seed)
    means = rng.uniform(0.0, 1.0, size=(k, d))
    labels = np.arange(n) % k
    noise = rng.normal(0.0, 1.0, size=(n, d)) * spread
    return PointSet(means[labels] + noise)


STANDIN_SHAPES = {"diabetes": 2, "bank": 3, "census": 5}


def standin_dataset(name: str, n: int = 1000, seed: int = 0) -> PointSet:
    """Synthetic stand-in with the column count and rough marginals of a benchmark dataset.

    diabetes: (age bracket, time in hospital); bank: (age, balance, duration);
    census: (age, fnlwgt, education-num, capital-gain, hours-per-week).
    Values are left unnormalised, like the originals.
    """
    rng = np.random.default_rng(seed)
    if name == "diabetes":
        age = 10 * rng.choice(10, size=n, p=[0.01, 0.01, 0.02, 0.04, 0.10, 0.17, 0.22, 0.26, 0.15, 0.02]) + 5
        stay = np.clip(np.round(rng.gamma(2.0, 2.2, size=n)), 1, 14)
        cols = [age, stay]
    elif name == "bank":
        age = np.clip(np.round(rng.normal(41, 10.5, size=n)), 19, 87)
        balance = np.round(rng.standard_t(2.5, size=n) * 900 + 1400)
        duration = np.clip(np.round(rng.exponential(260, size=n)), 4, 3025)
        cols = [age, balance, duration]
    elif name == "census":
        age = np.clip(np.round(rng.normal(38.6, 13.6, size=n)), 17, 90)
        fnlwgt = np.round(rng.lognormal(12.0, 0.5, size=n))
        edu = np.clip(np.round(rng.normal(10, 2.6, size=n)), 1, 16)
        gain = np.where(rng.random(n) < 0.08, np.round(rng.lognormal(8.5, 1.2, size=n)), 0.0)
        hours = np.clip(np.round(rng.normal(40.4, 12.3, size=n)), 1, 99)
        cols = [age, fnlwgt, edu, gain, hours]
    else:
        raise InputError(f"unknown stand-in dataset {name!r}; choose from {sorted(STANDIN_SHAPES)}")
    return PointSet(np.column_stack(cols).astype(np.float64))


@dataclass(frozen=True)
class IngestSpec:
    path: Union[str, Path]
    columns: Optional[Sequence[Union[str, int]]] = None
    subsample_size: Optional[int] = 1000
    seed: int = 0
    normalize: bool = False


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def load_csv(spec: IngestSpec) -> PointSet:
    """Read selected numeric columns and draw a seeded subsample without replacement.

    A header is assumed when the first row has any non-numeric cell. Selected
    rows keep their file order. ``subsample_size=None`` keeps every row.
    """
    path = Path(spec.path)
    if not path.is_file():
        raise InputError(f"input file not found: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    if not rows:
        raise InputError(f"{path} is empty")
    header = None
    if not all(_is_number(c) for c in rows[0]):
        header, rows = [c.strip() for c in rows[0]], rows[1:]

    width = len(header) if header else len(rows[0]) if rows else 0
    if spec.columns is None:
        cols = list(range(width))
    else:
        cols = []
        for c in spec.columns:
            if isinstance(c, int):
                cols.append(c)
            elif header is not None and c.strip() in header:
                cols.append(header.index(c.strip()))
            elif c.strip().isdigit():
                cols.append(int(c))
            else:
                raise InputError(f"column {c!r} not found in {path}")
        if any(not (0 <= c < width) for c in cols):
            raise InputError(f"column index out of range for width {width}")

    size = len(rows) if spec.subsample_size is None else int(spec.subsample_size)
    if size < 1 or size > len(rows):
        raise InputError(f"need {size} rows but {path} has {len(rows)}")
    rng = np.random.default_rng(spec.seed)
    pick = np.sort(rng.choice(len(rows), size=size, replace=False)) if size < len(rows) else np.arange(size)

    data = np.empty((size, len(cols)))
    offset = 2 if header else 1
    for out_i, row_i in enumerate(pick):
        row = rows[row_i]
        for j, c in enumerate(cols):
            try:
                v = float(row[c])
            except (IndexError, ValueError):
                raise InputError(f"non-numeric or missing cell at line {row_i + offset}, column {c}") from None
            if not math.isfinite(v):
                raise InputError(f"non-finite cell at line {row_i + offset}, column {c}")
            data[out_i, j] = v
    if spec.normalize:
        lo, hi = data.min(axis=0), data.max(axis=0)
        span = np.where(hi > lo, hi - lo, 1.0)
        data = (data - lo) / span
    return PointSet(data)


def points_to_csv(ps: PointSet, header: Optional[Sequence[str]] = None) -> str:
    """Header row plus one row per point, floats written with ``repr`` so they round-trip exactly."""
    header = list(header) if header else [f"x{j}" for j in range(ps.d)]
    lines = [",".join(header)]
    lines += [",".join(repr(float(v)) for v in row) for row in ps.coords]
    return "\n".join(lines) + "\n"


def write_csv(ps: PointSet, path, header: Optional[Sequence[str]] = None) -> None:
    Path(path).write_text(points_to_csv(ps, header), encoding="utf-8")
