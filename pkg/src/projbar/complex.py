"""Simplicial complexes, grid triangulations, point clouds and vertex filtrations."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy.spatial import cKDTree


class SimplicialComplex:
    """A finite abstract simplicial complex.

    Simplices are stored as sorted vertex tuples, ordered by dimension and
    then lexicographically.  ``facets[k]`` lists the indices (into
    ``simplices``) of the codimension-one faces of simplex ``k``.
    """

    def __init__(self, simplices: Iterable[Sequence[int]]):
        closure: set[tuple[int, ...]] = set()
        for s in simplices:
            t = tuple(int(v) for v in s)
            if not t:
                raise ValueError("empty simplex")
            if min(t) < 0:
                raise ValueError(f"negative vertex id in {t}")
            if len(set(t)) != len(t):
                raise ValueError(f"repeated vertex in simplex {t}")
            t = tuple(sorted(t))
            if t in closure:
                continue
            for k in range(1, len(t) + 1):
                closure.update(combinations(t, k))
        self.simplices: list[tuple[int, ...]] = sorted(closure, key=lambda s: (len(s), s))
        self.index = {s: i for i, s in enumerate(self.simplices)}
        self.facets: list[tuple[int, ...]] = [
            tuple(self.index[f] for f in combinations(s, len(s) - 1)) if len(s) > 1 else ()
            for s in self.simplices
        ]
        self.vertex_ids = [s[0] for s in self.simplices if len(s) == 1]
        self.vertex_count = len(self.vertex_ids)
        self._arrays: dict[int, np.ndarray] | None = None

    @property
    def dimension(self) -> int:
        return len(self.simplices[-1]) - 1 if self.simplices else -1

    def __len__(self) -> int:
        return len(self.simplices)

    def count(self, dim: int) -> int:
        return sum(1 for s in self.simplices if len(s) == dim + 1)

    def simplices_of_dim(self, dim: int) -> np.ndarray:
        """Vertex ids of all ``dim``-simplices as an ``(m, dim + 1)`` int array."""
        if self._arrays is None:
            by_dim: dict[int, list] = {}
            for s in self.simplices:
                by_dim.setdefault(len(s) - 1, []).append(s)
            self._arrays = {d: np.array(v, dtype=np.int64).reshape(len(v), d + 1) for d, v in by_dim.items()}
        return self._arrays.get(dim, np.zeros((0, dim + 1), dtype=np.int64))

    def validate(self) -> None:
        """Raise ``AssertionError`` unless the complex is face-closed and duplicate-free."""
        seen = set()
        for s, fac in zip(self.simplices, self.facets):
            assert list(s) == sorted(set(s)), f"unsorted or repeated vertices in {s}"
            assert s not in seen, f"duplicate simplex {s}"
            seen.add(s)
            expected = {f for f in combinations(s, len(s) - 1)} if len(s) > 1 else set()
            assert {self.simplices[i] for i in fac} == expected, f"bad facets for {s}"
            for f in expected:
                assert f in self.index, f"missing face {f}"

    def __repr__(self) -> str:
        counts = [self.count(d) for d in range(self.dimension + 1)]
        return f"SimplicialComplex(counts={counts})"


def build_complex(simplices: Iterable[Sequence[int]]) -> SimplicialComplex:
    """Face closure of the given simplices (deduplicated)."""
    return SimplicialComplex(simplices)


@dataclass(frozen=True)
class GridSpec:
    xmin: float = -1.0
    xmax: float = 1.0
    ymin: float = -1.0
    ymax: float = 1.0
    nx: int = 64
    ny: int = 64

    def __post_init__(self):
        if not (self.xmin < self.xmax and self.ymin < self.ymax):
            raise ValueError("grid bounding box must satisfy xmin < xmax and ymin < ymax")
        if self.nx < 2 or self.ny < 2:
            raise ValueError("grid resolution must be at least 2 per axis")

    @classmethod
    def square(cls, resolution: int, lo: float = -1.0, hi: float = 1.0) -> "GridSpec":
        return cls(lo, hi, lo, hi, resolution, resolution)

    def nodes(self) -> np.ndarray:
        """Node coordinates, vertex id ``j * nx + i`` at ``(x_i, y_j)``."""
        xs = np.linspace(self.xmin, self.xmax, self.nx)
        ys = np.linspace(self.ymin, self.ymax, self.ny)
        X, Y = np.meshgrid(xs, ys)
        return np.column_stack([X.ravel(), Y.ravel()])

    @property
    def cell_area(self) -> float:
        return (self.xmax - self.xmin) / (self.nx - 1) * (self.ymax - self.ymin) / (self.ny - 1)


def freudenthal_grid(spec: GridSpec) -> SimplicialComplex:
    """Triangulate the grid, splitting each cell along its (+1, +1) diagonal."""
    nx, ny = spec.nx, spec.ny
    i, j = np.meshgrid(np.arange(nx - 1), np.arange(ny - 1))
    i, j = i.ravel(), j.ravel()
    v00 = j * nx + i
    v10 = v00 + 1
    v01 = v00 + nx
    v11 = v01 + 1
    tris = np.concatenate([np.column_stack([v00, v10, v11]), np.column_stack([v00, v01, v11])])
    return SimplicialComplex(map(tuple, tris.tolist()))


@dataclass(frozen=True)
class PointCloud2D:
    points: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float).reshape(-1, 2)
        if not np.all(np.isfinite(pts)):
            raise ValueError("point coordinates must be finite")
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return len(self.points)


def sample_circle_dataset(n: int = 300, radius: float = 1.0, noise: float = 0.1,
                          n_outliers: int = 0, seed: int = 0) -> PointCloud2D:
    """Noisy circle plus uniform outliers in [-1, 1]^2.

    Radii are ``radius + U[0, noise]`` with uniform angle.
    """
    if n < 0 or n_outliers < 0:
        raise ValueError("counts must be nonnegative")
    if radius <= 0 or noise < 0:
        raise ValueError("radius must be positive and noise nonnegative")
    rng = np.random.default_rng(seed)
    theta = rng.uniform(0.0, 2 * np.pi, n)
    r = radius + rng.uniform(0.0, noise, n)
    circle = np.column_stack([r * np.cos(theta), r * np.sin(theta)])
    outliers = rng.uniform(-1.0, 1.0, (n_outliers, 2))
    return PointCloud2D(np.concatenate([circle, outliers]), seed=seed)


def distance_field(cloud: PointCloud2D, grid: GridSpec) -> np.ndarray:
    """Euclidean distance from every grid node to the nearest point of the cloud."""
    if len(cloud) == 0:
        raise ValueError("distance field of an empty cloud is undefined")
    d, _ = cKDTree(cloud.points).query(grid.nodes())
    return d


def scott_bandwidth(cloud: PointCloud2D) -> float:
    """Scott's rule ``n^(-1/6) * sigma`` with sigma the mean per-axis sample std."""
    n = len(cloud)
    if n < 2:
        return 1.0
    sigma = float(np.mean(np.std(cloud.points, axis=0, ddof=1)))
    return n ** (-1.0 / 6.0) * sigma


def gaussian_kde(cloud: PointCloud2D, bandwidth: float | None, grid: GridSpec) -> np.ndarray:
    """Isotropic Gaussian kernel density evaluated at the grid nodes."""
    if bandwidth is None:
        bandwidth = scott_bandwidth(cloud)
    if bandwidth <= 0:
        raise ValueError("bandwidth must be positive")
    if len(cloud) == 0:
        raise ValueError("density of an empty cloud is undefined")
    nodes = grid.nodes()
    h2 = bandwidth * bandwidth
    out = np.zeros(len(nodes))
    # chunk over points to bound memory
    for start in range(0, len(cloud), 256):
        p = cloud.points[start:start + 256]
        sq = ((nodes[:, None, :] - p[None, :, :]) ** 2).sum(-1)
        out += np.exp(-sq / (2 * h2)).sum(1)
    return out / (len(cloud) * 2 * np.pi * h2)


@dataclass
class MultiFiltration:
    """Per-vertex n-vectors of filtration values on a complex.

    ``values[k]`` belongs to the vertex ``complex.vertex_ids[k]``; for the
    usual case of vertex ids ``0..N-1`` this is just row ``k``.
    """

    complex: SimplicialComplex
    values: np.ndarray
    _row: dict = field(default=None, repr=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim == 1:
            vals = vals[:, None]
        if vals.shape[0] != self.complex.vertex_count:
            raise ValueError(f"expected {self.complex.vertex_count} vertex values, got {vals.shape[0]}")
        if vals.shape[1] < 1:
            raise ValueError("at least one parameter is required")
        if not np.all(np.isfinite(vals)):
            raise ValueError("filtration values must be finite")
        self.values = vals
        self._row = {v: k for k, v in enumerate(self.complex.vertex_ids)}

    @property
    def n_params(self) -> int:
        return self.values.shape[1]

    def vertex_value(self, vertex: int) -> np.ndarray:
        return self.values[self._row[vertex]]

    def scalar_field(self, u: Sequence[float]) -> np.ndarray:
        return self.values @ np.asarray(u, dtype=float)

    def translated(self, w: Sequence[float]) -> "MultiFiltration":
        return MultiFiltration(self.complex, self.values + np.asarray(w, dtype=float))

    def sup_norm(self) -> float:
        return float(np.abs(self.values).max()) if self.values.size else 0.0


def make_bifiltration(complex: SimplicialComplex, fields: Sequence[np.ndarray],
                      negate: Sequence[bool] | None = None) -> MultiFiltration:
    """Stack per-vertex scalar fields (optionally negated) into a multi-filtration."""
    if negate is None:
        negate = [False] * len(fields)
    if len(negate) != len(fields):
        raise ValueError("one negation flag per field")
    cols = []
    for fld, neg in zip(fields, negate):
        fld = np.asarray(fld, dtype=float).ravel()
        if len(fld) != complex.vertex_count:
            raise ValueError(f"field has {len(fld)} values for {complex.vertex_count} vertices")
        cols.append(-fld if neg else fld)
    return MultiFiltration(complex, np.column_stack(cols))


def write_filtration(filt: MultiFiltration, path: str | Path) -> None:
    """Write the line-based ``v``/``s`` text format."""
    with open(path, "w", encoding="utf-8") as fh:
        for vid, row in zip(filt.complex.vertex_ids, filt.values):
            fh.write("v %d %s\n" % (vid, " ".join(repr(float(x)) for x in row)))
        for s in filt.complex.simplices:
            if len(s) > 1:
                fh.write("s %s\n" % " ".join(map(str, s)))


def read_filtration(path: str | Path) -> MultiFiltration:
    values: dict[int, list[float]] = {}
    simplices = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            parts = line.split()
            if not parts or parts[0].startswith("#"):
                continue
            if parts[0] == "v":
                values[int(parts[1])] = [float(x) for x in parts[2:]]
            elif parts[0] == "s":
                simplices.append(tuple(int(x) for x in parts[1:]))
            else:
                raise ValueError(f"{path}:{lineno}: unknown record {parts[0]!r}")
    cx = SimplicialComplex(simplices + [(v,) for v in values])
    missing = set(cx.vertex_ids) - set(values)
    if missing:
        raise ValueError(f"{path}: no filtration values for vertices {sorted(missing)[:5]}")
    return MultiFiltration(cx, np.array([values[v] for v in cx.vertex_ids]))


def write_cloud(cloud: PointCloud2D, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "y"])
        for x, y in cloud.points:
            w.writerow([repr(float(x)), repr(float(y))])


def read_cloud(path: str | Path) -> PointCloud2D:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    return PointCloud2D(np.array([[float(r["x"]), float(r["y"])] for r in rows]).reshape(-1, 2))
