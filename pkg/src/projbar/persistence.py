"""Lower-star sublevel persistence over F2 with critical-vertex provenance."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, NamedTuple

import numpy as np
from numba import njit

from .complex import SimplicialComplex

INF = math.inf


class Bar(NamedTuple):
    """Half-open bar ``[birth, death)``; vertices record where each endpoint comes from."""

    birth: float
    death: float
    birth_vertex: int | None = None
    death_vertex: int | None = None

    @property
    def length(self) -> float:
        return self.death - self.birth

    def contains(self, t) -> bool:
        return self.birth <= t < self.death


class GradedBarcode:
    """Map from degree to a multiset (list) of bars."""

    def __init__(self, bars: dict[int, Iterable[Bar]] | None = None):
        self.bars: dict[int, list[Bar]] = {}
        for deg, bs in (bars or {}).items():
            bs = [b if isinstance(b, Bar) else Bar(*b) for b in bs]
            if bs:
                self.bars[int(deg)] = bs

    def __getitem__(self, degree: int) -> list[Bar]:
        return self.bars.get(degree, [])

    def degrees(self) -> list[int]:
        return sorted(self.bars)

    def add(self, degree: int, bar: Bar) -> None:
        self.bars.setdefault(degree, []).append(bar)

    def __len__(self) -> int:
        return sum(len(b) for b in self.bars.values())

    def is_empty(self) -> bool:
        return len(self) == 0

    def intervals(self, degree: int) -> list[tuple]:
        """Sorted ``(birth, death)`` pairs, provenance dropped."""
        return sorted((b.birth, b.death) for b in self[degree])

    def multiset(self) -> dict[int, list[tuple]]:
        return {d: self.intervals(d) for d in self.degrees()}

    def same_intervals(self, other: "GradedBarcode") -> bool:
        return self.multiset() == other.multiset()

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedBarcode):
            return NotImplemented
        return {d: sorted(b) for d, b in self.bars.items()} == {d: sorted(b) for d, b in other.bars.items()}

    def restricted(self, lo: int, hi: int) -> "GradedBarcode":
        return GradedBarcode({d: b for d, b in self.bars.items() if lo <= d <= hi})

    def betti(self, t) -> dict[int, int]:
        return {d: sum(1 for b in bs if b.contains(t)) for d, bs in self.bars.items()}

    def __repr__(self) -> str:
        inner = ", ".join(f"{d}: {self.intervals(d)}" for d in self.degrees())
        return f"GradedBarcode({{{inner}}})"


@dataclass
class Filtration1D:
    """Simplices of a complex in lower-star order.

    ``order[p]`` is the complex index of the simplex at filtration position
    ``p``; ``values`` and ``argmax`` are indexed by position as well.
    """

    complex: SimplicialComplex
    order: np.ndarray
    values: np.ndarray
    argmax: np.ndarray
    dims: np.ndarray
    position: np.ndarray

    def __len__(self) -> int:
        return len(self.order)

    def boundary(self, p: int) -> list[int]:
        return [int(self.position[f]) for f in self.complex.facets[self.order[p]]]

    def boundaries(self, dim: int) -> tuple[np.ndarray, np.ndarray]:
        """Positions of the ``dim``-simplices (ascending) and their facet positions."""
        cx = self.complex
        offset = _dim_offsets(cx)
        m = cx.simplices_of_dim(dim).shape[0]
        glob = np.arange(offset[dim], offset[dim] + m)
        pos = self.position[glob]
        srt = np.argsort(pos, kind="stable")
        if dim == 0:
            return pos[srt], np.zeros((m, 0), dtype=np.int64)
        fac = _facet_array(cx, dim)
        return pos[srt], self.position[fac[srt]]


def _dim_offsets(cx: SimplicialComplex) -> dict[int, int]:
    cache = getattr(cx, "_offsets", None)
    if cache is None:
        cache, off = {}, 0
        for d in range(cx.dimension + 1):
            cache[d] = off
            off += cx.simplices_of_dim(d).shape[0]
        cx._offsets = cache
    return cache


def _facet_array(cx: SimplicialComplex, dim: int) -> np.ndarray:
    cache = cx.__dict__.setdefault("_facet_arrays", {})
    if dim not in cache:
        off = _dim_offsets(cx)[dim]
        m = cx.simplices_of_dim(dim).shape[0]
        cache[dim] = np.array(cx.facets[off:off + m], dtype=np.int64).reshape(m, dim + 1)
    return cache[dim]


def _vertex_rows(cx: SimplicialComplex) -> np.ndarray:
    """Map vertex id -> row of the per-vertex field array."""
    cache = getattr(cx, "_vertex_rows", None)
    if cache is None:
        ids = np.array(cx.vertex_ids, dtype=np.int64)
        cache = np.full(int(ids.max()) + 1 if len(ids) else 0, -1, dtype=np.int64)
        cache[ids] = np.arange(len(ids))
        cx._vertex_rows = cache
    return cache


def lower_star_filtration(complex: SimplicialComplex, field) -> Filtration1D:
    """Order simplices by the max of their vertex values.

    Ties are broken by dimension and then lexicographically by vertex tuple,
    which is the complex's own storage order.
    """
    field = np.asarray(field, dtype=float).ravel()
    if len(field) != complex.vertex_count:
        raise ValueError(f"field has {len(field)} values for {complex.vertex_count} vertices")
    if not np.all(np.isfinite(field)):
        raise ValueError("field values must be finite")
    rows = _vertex_rows(complex)
    vals, amax, dims = [], [], []
    for d in range(complex.dimension + 1):
        S = complex.simplices_of_dim(d)
        F = field[rows[S]]
        k = F.argmax(axis=1)  # first maximum = smallest vertex id
        vals.append(F[np.arange(len(S)), k])
        amax.append(S[np.arange(len(S)), k])
        dims.append(np.full(len(S), d, dtype=np.int64))
    if not vals:
        empty = np.zeros(0, dtype=np.int64)
        return Filtration1D(complex, empty, np.zeros(0), empty, empty, empty)
    vals = np.concatenate(vals)
    amax = np.concatenate(amax)
    dims = np.concatenate(dims)
    order = np.argsort(vals, kind="stable")
    position = np.empty_like(order)
    position[order] = np.arange(len(order))
    return Filtration1D(complex, order, vals[order], amax[order], dims[order], position)


@njit(cache=True)
def _symdiff(a, na, b, out):
    """Symmetric difference of two sorted index arrays, written into ``out``."""
    i = j = n = 0
    nb = b.shape[0]
    while i < na and j < nb:
        if a[i] < b[j]:
            out[n] = a[i]
            i += 1
            n += 1
        elif b[j] < a[i]:
            out[n] = b[j]
            j += 1
            n += 1
        else:
            i += 1
            j += 1
    while i < na:
        out[n] = a[i]
        i += 1
        n += 1
    while j < nb:
        out[n] = b[j]
        j += 1
        n += 1
    return n


@njit(cache=True)
def _reduce_dim(positions, bnd, is_pivot, dying):
    """Reduce the columns of one dimension in filtration order.

    Columns whose position is already a pivot of the dimension above are
    cleared.  Returns the (low, column) position pairs found.
    """
    m, k = bnd.shape
    N = is_pivot.shape[0]
    owner = np.full(N, -1, np.int64)
    starts = np.zeros(m, np.int64)
    lens = np.zeros(m, np.int64)
    buf = np.empty(max(64, 2 * m * k), np.int64)
    used = 0
    cur = np.empty(N, np.int64)
    tmp = np.empty(N, np.int64)
    lows = np.empty(m, np.int64)
    cols = np.empty(m, np.int64)
    npairs = 0
    for j in range(m):
        p = positions[j]
        if is_pivot[p]:
            continue
        n = k
        cur[:k] = np.sort(bnd[j])
        while n > 0:
            o = owner[cur[n - 1]]
            if o < 0:
                break
            n = _symdiff(cur, n, buf[starts[o]:starts[o] + lens[o]], tmp)
            cur, tmp = tmp, cur
        if n > 0:
            low = cur[n - 1]
            owner[low] = j
            is_pivot[low] = True
            dying[p] = True
            if used + n > buf.shape[0]:
                grown = np.empty(max(2 * buf.shape[0], used + n), np.int64)
                grown[:used] = buf[:used]
                buf = grown
            buf[used:used + n] = cur[:n]
            starts[j] = used
            lens[j] = n
            used += n
            lows[npairs] = low
            cols[npairs] = p
            npairs += 1
    return lows[:npairs], cols[:npairs]


def reduce_persistence(filt: Filtration1D, max_degree: int | None = None) -> GradedBarcode:
    """Barcode of the sublevel filtration by boundary-matrix reduction with clearing.

    Columns are reduced from the top dimension down; the pivot of every
    reduced column marks a column of the dimension below that must reduce to
    zero and is skipped.
    """
    cx = filt.complex
    top = cx.dimension
    if max_degree is None:
        max_degree = top
    max_degree = min(max_degree, top)
    N = len(filt)
    is_pivot = np.zeros(N, dtype=np.bool_)
    dying = np.zeros(N, dtype=np.bool_)
    lows, cols = [], []
    for d in range(min(max_degree + 1, top), 0, -1):
        positions, bnd = filt.boundaries(d)
        lo, co = _reduce_dim(positions.astype(np.int64), np.ascontiguousarray(bnd, dtype=np.int64),
                             is_pivot, dying)
        lows.append(lo)
        cols.append(co)
    births = np.concatenate(lows) if lows else np.zeros(0, np.int64)
    deaths = np.concatenate(cols) if cols else np.zeros(0, np.int64)
    return _bars_from_pairs(filt, births, deaths, is_pivot | dying, max_degree)


def _bars_from_pairs(filt, births, deaths, paired, max_degree) -> GradedBarcode:
    values, argmax, dims = filt.values, filt.argmax, filt.dims
    keep = (dims[births] <= max_degree) & (values[births] != values[deaths])
    births, deaths = births[keep], deaths[keep]
    out = GradedBarcode()
    for deg, b, d, vb, vd in zip(dims[births].tolist(), values[births].tolist(), values[deaths].tolist(),
                                 argmax[births].tolist(), argmax[deaths].tolist()):
        out.add(deg, Bar(b, d, vb, vd))
    ess = np.nonzero(~paired & (dims <= max_degree))[0]
    for deg, b, vb in zip(dims[ess].tolist(), values[ess].tolist(), argmax[ess].tolist()):
        out.add(deg, Bar(b, INF, vb, None))
    for bs in out.bars.values():
        bs.sort()
    return out


def sublevel_barcode(complex: SimplicialComplex, field, max_degree: int | None = None) -> GradedBarcode:
    return reduce_persistence(lower_star_filtration(complex, field), max_degree)


def superlevel_barcode(complex: SimplicialComplex, field, max_degree: int | None = None) -> GradedBarcode:
    """Superlevel persistence as negated sublevel persistence of ``-field``.

    A sublevel bar ``[b, d)`` of ``-field`` becomes ``[-d, -b)``.
    """
    low = sublevel_barcode(complex, -np.asarray(field, dtype=float), max_degree)
    return GradedBarcode({deg: [Bar(-b.death, -b.birth, b.death_vertex, b.birth_vertex) for b in bs]
                          for deg, bs in low.bars.items()})


def euler_characteristic_at(filt: Filtration1D, t: float) -> int:
    mask = filt.values <= t
    return int(np.sum((-1) ** filt.dims[mask]))


def write_barcode_csv(barcode: GradedBarcode, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["degree", "birth", "death", "birth_vertex", "death_vertex"])
        for deg in barcode.degrees():
            for b in barcode[deg]:
                w.writerow([deg, _fmt(b.birth), _fmt(b.death),
                            "" if b.birth_vertex is None else b.birth_vertex,
                            "" if b.death_vertex is None else b.death_vertex])


def read_barcode_csv(path: str | Path) -> GradedBarcode:
    out = GradedBarcode()
    with open(path, newline="", encoding="utf-8") as fh:
        for r in csv.DictReader(fh):
            out.add(int(r["degree"]), Bar(float(r["birth"]), float(r["death"]),
                                          int(r["birth_vertex"]) if r["birth_vertex"] else None,
                                          int(r["death_vertex"]) if r["death_vertex"] else None))
    return out


def _fmt(x) -> str:
    if x == INF:
        return "inf"
    if x == -INF:
        return "-inf"
    return repr(float(x))
