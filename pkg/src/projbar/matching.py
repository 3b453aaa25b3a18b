"""Epsilon-matchings and the (graded) bottleneck distance between barcodes.

The optimum is found exactly: feasibility is monotone in epsilon and the
minimal feasible epsilon is one of finitely many endpoint gaps or bar
half-lengths, so a binary search over that candidate set is exact.
Feasibility is a perfect-matching question on the compatibility graph
augmented with diagonal slots.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .persistence import Bar, GradedBarcode

INF = math.inf


def endpoint_gap(x, y):
    """``|x - y|`` with ``|inf - inf| = 0`` and ``|inf - finite| = inf``."""
    if x == y:
        return 0 if isinstance(x, (int, Fraction)) and isinstance(y, (int, Fraction)) else 0.0
    if math.isinf(x) or math.isinf(y):
        return INF
    return abs(x - y)


def half_length(bar: Bar):
    if math.isinf(bar.death) or math.isinf(bar.birth):
        return INF
    return abs(bar.death - bar.birth) / 2


def pair_cost(a: Bar, b: Bar):
    return max(endpoint_gap(a.birth, b.birth), endpoint_gap(a.death, b.death))


def _is_exact(bars: Sequence[Bar]) -> bool:
    return any(isinstance(x, Fraction) for b in bars for x in (b.birth, b.death))


class _DegreeProblem:
    """Gap matrices for one degree, shared across feasibility tests."""

    def __init__(self, F: Sequence[Bar], G: Sequence[Bar]):
        self.F, self.G = list(F), list(G)
        n, m = len(self.F), len(self.G)
        if _is_exact(self.F) or _is_exact(self.G):
            self.gb = [[endpoint_gap(a.birth, b.birth) for b in self.G] for a in self.F]
            self.gd = [[endpoint_gap(a.death, b.death) for b in self.G] for a in self.F]
            self.cost = [[max(x, y) for x, y in zip(r1, r2)] for r1, r2 in zip(self.gb, self.gd)]
            self.exact = True
        else:
            fb = np.array([b.birth for b in self.F], dtype=float).reshape(n, 1)
            fd = np.array([b.death for b in self.F], dtype=float).reshape(n, 1)
            gb = np.array([b.birth for b in self.G], dtype=float).reshape(1, m)
            gd = np.array([b.death for b in self.G], dtype=float).reshape(1, m)
            self.gb = _gap_matrix(fb, gb)
            self.gd = _gap_matrix(fd, gd)
            self.cost = np.maximum(self.gb, self.gd)
            self.exact = False
        self.hf = [half_length(b) for b in self.F]
        self.hg = [half_length(b) for b in self.G]

    def candidates(self) -> list:
        if not self.exact:
            vals = np.concatenate([self.gb.ravel(), self.gd.ravel(), self.hf, self.hg, [0.0]])
            return np.unique(vals[np.isfinite(vals)]).tolist()
        vals = {0}
        for row in self.gb + self.gd:
            vals.update(row)
        vals.update(self.hf)
        vals.update(self.hg)
        return sorted(v for v in vals if not math.isinf(v))

    def match(self, eps):
        """A perfect matching of the augmented graph at ``eps`` or ``None``."""
        n, m = len(self.F), len(self.G)
        size = n + m
        if size == 0:
            return []
        if self.exact:
            compat = np.array([[c <= eps for c in row] for row in self.cost], dtype=bool).reshape(n, m)
        else:
            compat = self.cost <= eps
        # left: F_0..F_{n-1}, diagonal copies of G; right: G_0..G_{m-1}, diagonal copies of F
        adj = np.zeros((size, size), dtype=bool)
        adj[:n, :m] = compat
        adj[np.arange(n), m + np.arange(n)] = [h <= eps for h in self.hf]
        adj[n + np.arange(m), np.arange(m)] = [h <= eps for h in self.hg]
        adj[n:, m:] = True
        match = maximum_bipartite_matching(csr_matrix(adj), perm_type="row")
        if np.any(match < 0):
            return None
        return match.tolist()

    def solve(self):
        cand = self.candidates()
        lo, hi = 0, len(cand) - 1
        if self.match(cand[hi]) is None:
            # only possible with unmatched essential bars
            return INF, None
        while lo < hi:
            mid = (lo + hi) // 2
            if self.match(cand[mid]) is not None:
                hi = mid
            else:
                lo = mid + 1
        return cand[lo], self.match(cand[lo])


def _gap_matrix(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    with np.errstate(invalid="ignore"):
        d = np.abs(x - y)
    d[np.isnan(d)] = 0.0  # inf - inf of the same sign
    return d


@dataclass
class ActiveTerm:
    """The term of an optimal matching whose cost equals the distance."""

    degree: int
    kind: str  # "pair", "unmatched_f" or "unmatched_g"
    cost: float
    bar_f: Bar | None = None
    bar_g: Bar | None = None
    endpoint: str | None = None  # "birth" or "death" for pairs

    def key(self):
        ref = self.bar_f if self.bar_f is not None else self.bar_g
        return (self.degree, ref.birth, ref.death)


@dataclass
class DegreeMatching:
    matched: list[tuple[Bar, Bar]] = field(default_factory=list)
    unmatched_f: list[Bar] = field(default_factory=list)
    unmatched_g: list[Bar] = field(default_factory=list)
    value: float = 0.0


@dataclass
class MatchWitness:
    degrees: dict[int, DegreeMatching]
    value: float
    active: ActiveTerm | None

    def terms(self):
        for deg, dm in self.degrees.items():
            for a, b in dm.matched:
                gb, gd = endpoint_gap(a.birth, b.birth), endpoint_gap(a.death, b.death)
                yield ActiveTerm(deg, "pair", max(gb, gd), a, b, "birth" if gb >= gd else "death")
            for a in dm.unmatched_f:
                yield ActiveTerm(deg, "unmatched_f", half_length(a), a, None)
            for b in dm.unmatched_g:
                yield ActiveTerm(deg, "unmatched_g", half_length(b), None, b)

    def to_json(self) -> str:
        def bar(b):
            return None if b is None else [_num(b.birth), _num(b.death), b.birth_vertex, b.death_vertex]

        payload = {
            "value": _num(self.value),
            "degrees": {
                str(d): {
                    "matched": [[bar(a), bar(b)] for a, b in dm.matched],
                    "unmatched_f": [bar(a) for a in dm.unmatched_f],
                    "unmatched_g": [bar(b) for b in dm.unmatched_g],
                    "value": _num(dm.value),
                }
                for d, dm in sorted(self.degrees.items())
            },
            "active": None if self.active is None else {
                "degree": self.active.degree, "kind": self.active.kind, "cost": _num(self.active.cost),
                "bar_f": bar(self.active.bar_f), "bar_g": bar(self.active.bar_g),
                "endpoint": self.active.endpoint,
            },
        }
        return json.dumps(payload, indent=2)


def _num(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def _degree_matching(prob: _DegreeProblem, match) -> DegreeMatching:
    n, m = len(prob.F), len(prob.G)
    dm = DegreeMatching()
    if match is None:
        return dm
    # match[r] is the left vertex matched to right vertex r
    for r, l in enumerate(match):
        if r < m and l < n:
            dm.matched.append((prob.F[l], prob.G[r]))
        elif r < m:
            dm.unmatched_g.append(prob.G[r])
        elif l < n:
            dm.unmatched_f.append(prob.F[l])
    return dm


def bottleneck_degree(F: Sequence[Bar], G: Sequence[Bar]):
    """Bottleneck distance and optimal matching for two single-degree barcodes."""
    prob = _DegreeProblem(F, G)
    value, match = prob.solve()
    dm = _degree_matching(prob, match)
    dm.value = value
    return value, dm


def bottleneck(B1: GradedBarcode, B2: GradedBarcode,
               degrees: tuple[int, int] | None = None) -> tuple[float, MatchWitness]:
    """Graded bottleneck distance: max over degrees of the per-degree value.

    ``degrees=(p, q)`` restricts the maximum to ``p <= j <= q``.
    """
    degs = sorted(set(B1.degrees()) | set(B2.degrees()))
    if degrees is not None:
        degs = [d for d in degs if degrees[0] <= d <= degrees[1]]
    per: dict[int, DegreeMatching] = {}
    value = 0
    for d in degs:
        v, dm = bottleneck_degree(B1[d], B2[d])
        per[d] = dm
        value = max(value, v)
    witness = MatchWitness(per, value, None)
    if value > 0 and not math.isinf(value):
        tops = [t for t in witness.terms() if t.cost == value]
        witness.active = min(tops, key=ActiveTerm.key)
    return value, witness


def epsilon_matching_exists(B1: GradedBarcode, B2: GradedBarcode, eps) -> tuple[bool, MatchWitness | None]:
    """Decide whether an ``eps``-matching exists; return a witness when it does."""
    if eps < 0:
        raise ValueError("epsilon must be nonnegative")
    per: dict[int, DegreeMatching] = {}
    for d in sorted(set(B1.degrees()) | set(B2.degrees())):
        prob = _DegreeProblem(B1[d], B2[d])
        match = prob.match(eps)
        if match is None:
            return False, None
        dm = _degree_matching(prob, match)
        dm.value = max([0] + [t.cost for t in MatchWitness({d: dm}, 0, None).terms()])
        per[d] = dm
    value = max([0] + [dm.value for dm in per.values()])
    return True, MatchWitness(per, value, None)


def convolution_distance_1d(F: GradedBarcode, G: GradedBarcode) -> float:
    """Convolution distance of two 1-D gamma-sheaves, read off their graded barcodes."""
    return bottleneck(F, G)[0]
