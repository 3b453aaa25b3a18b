"""Slow, independent reference implementations used to cross-check the main code paths."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .persistence import Bar, Filtration1D, GradedBarcode
from .sheaf import Rectangle, StaircaseSupport, _parts

INF = math.inf
MAX_BARS = 8


def naive_reduce(filt: Filtration1D, max_degree: int | None = None) -> GradedBarcode:
    """Textbook left-to-right column reduction over F2, no clearing."""
    m = len(filt)
    if m > 5000:
        raise ValueError("naive reduction is capped at 5000 simplices")
    columns: list[set[int]] = []
    low_to_col: dict[int, int] = {}
    paired_birth: dict[int, int] = {}
    for j in range(m):
        col = set(filt.boundary(j))
        while col and max(col) in low_to_col:
            col ^= columns[low_to_col[max(col)]]
        columns.append(col)
        if col:
            low_to_col[max(col)] = j
            paired_birth[max(col)] = j
    killers = set(low_to_col.values())
    if max_degree is None:
        max_degree = int(filt.dims.max()) if m else 0
    out = GradedBarcode()
    for i in range(m):
        deg = int(filt.dims[i])
        if deg > max_degree or i in killers:
            continue
        b = float(filt.values[i])
        if i in paired_birth:
            j = paired_birth[i]
            d = float(filt.values[j])
            if d > b:
                out.add(deg, Bar(b, d, int(filt.argmax[i]), int(filt.argmax[j])))
        else:
            out.add(deg, Bar(b, INF, int(filt.argmax[i]), None))
    for bs in out.bars.values():
        bs.sort()
    return out


def _gap(x, y):
    if x == y:
        return 0
    if math.isinf(x) or math.isinf(y):
        return INF
    return abs(x - y)


def _half(b: Bar):
    if math.isinf(b.birth) or math.isinf(b.death):
        return INF
    return abs(b.death - b.birth) / 2


def exhaustive_bottleneck_degree(F: Sequence[Bar], G: Sequence[Bar]):
    """Minimum over every partial matching of the maximal term cost."""
    F, G = list(F), list(G)
    if len(F) > MAX_BARS or len(G) > MAX_BARS:
        raise ValueError(f"exhaustive bottleneck is capped at {MAX_BARS} bars per side")
    best = [INF]

    def rec(i, used, current):
        if current >= best[0]:
            return
        if i == len(F):
            rest = [_half(G[j]) for j in range(len(G)) if not used & (1 << j)]
            best[0] = min(best[0], max([current] + rest))
            return
        rec(i + 1, used, max(current, _half(F[i])))
        for j in range(len(G)):
            if not used & (1 << j):
                c = max(_gap(F[i].birth, G[j].birth), _gap(F[i].death, G[j].death))
                rec(i + 1, used | (1 << j), max(current, c))

    rec(0, 0, 0)
    return best[0]


def exhaustive_bottleneck(B1: GradedBarcode, B2: GradedBarcode):
    degs = set(B1.degrees()) | set(B2.degrees())
    return max([0] + [exhaustive_bottleneck_degree(B1[d], B2[d]) for d in degs])


class FiberSegment:
    """An interval of the fiber parameter with explicit boundary flags."""

    def __init__(self, left, right, left_closed: bool, right_closed: bool):
        if math.isinf(left):
            left_closed = False
        if math.isinf(right):
            right_closed = False
        if left > right or (left == right and not (left_closed and right_closed)):
            raise ValueError("empty fiber segment")
        self.left, self.right = left, right
        self.left_closed, self.right_closed = left_closed, right_closed

    def __repr__(self):
        lb = "[" if self.left_closed else "("
        rb = "]" if self.right_closed else ")"
        return f"{lb}{self.left}, {self.right}{rb}"

    def stalk(self) -> tuple[int, int]:
        """Compactly supported cohomology dimensions ``(H^0_c, H^1_c)``."""
        if self.left_closed and self.right_closed:
            return (1, 0)
        if not self.left_closed and not self.right_closed:
            return (0, 1)
        return (0, 0)


def _segment(lowers, uppers):
    """Intersect half-lines given as ``(value, closed)`` bounds."""
    L = max(v for v, _ in lowers)
    U = min(v for v, _ in uppers)
    lc = all(cl for v, cl in lowers if v == L)
    uc = all(cl for v, cl in uppers if v == U)
    try:
        return FiberSegment(L, U, lc, uc)
    except ValueError:
        return None


def _rect_fiber(R: Rectangle, u, t):
    """Fiber ``{p in R : u.p = t}`` in a fixed parametrisation, or ``None``."""
    u1, u2 = u
    lowers = [(-INF, False)]
    uppers = [(INF, False)]
    if u2 != 0:
        # parameter x; y = (t - u1 x) / u2
        lowers.append((R.x0, True))
        uppers.append((R.x1, False))
        if u1 != 0:
            uppers.append(((t - u2 * R.y0) / u1, True))
            if not math.isinf(R.y1):
                lowers.append(((t - u2 * R.y1) / u1, False))
        else:
            y = t / u2
            if not (R.y0 <= y < R.y1):
                return None
    else:
        x = t / u1
        if not (R.x0 <= x < R.x1):
            return None
        lowers.append((R.y0, True))
        uppers.append((R.y1, False))
    return _segment(lowers, uppers)


def _difference(S: FiberSegment, N: FiberSegment | None) -> list[FiberSegment]:
    """``S`` minus a sub-segment ``N``: at most one piece on each side."""
    if N is None:
        return [S]
    out = []
    for args in ((S.left, N.left, S.left_closed, not N.left_closed),
                 (N.right, S.right, not N.right_closed, S.right_closed)):
        try:
            out.append(FiberSegment(*args))
        except ValueError:
            pass
    return out


def fiber_segments(support, u, t) -> list[FiberSegment]:
    u = tuple(Fraction(x) for x in u)
    t = Fraction(t)
    if isinstance(support, StaircaseSupport):
        S = _rect_fiber(support.outer, u, t)
        if S is None:
            return []
        return _difference(S, _rect_fiber(support.notch, u, t))
    S = _rect_fiber(support, u, t)
    return [] if S is None else [S]


def fiber_cohomology(support, u, t) -> tuple[int, ...]:
    """Stalk dimensions by degree of the proper pushforward at ``t``.

    ``support`` may be a rectangle, a staircase or a direct sum of them;
    summand degrees shift the stalks.
    """
    if any(Fraction(x) < 0 for x in u) or all(Fraction(x) == 0 for x in u):
        raise ValueError("u must be nonnegative and nonzero")
    dims: dict[int, int] = {}
    for part in _parts(support):
        for seg in fiber_segments(part, u, t):
            h0, h1 = seg.stalk()
            dims[part.degree] = dims.get(part.degree, 0) + h0
            dims[part.degree + 1] = dims.get(part.degree + 1, 0) + h1
    top = max([1] + list(dims))
    return tuple(dims.get(k, 0) for k in range(top + 1))


def scan_line_interval(contains: Callable, h, c, ts: np.ndarray):
    """Smallest/largest sampled ``t`` with ``c + t h`` inside the support, or ``None``."""
    inside = [t for t in ts if contains((c[0] + t * h[0], c[1] + t * h[1]))]
    if not inside:
        return None
    return min(inside), max(inside)


def upper_set_membership_segment(z) -> bool:
    """``z`` lies in ``X + [0, inf)^2`` for the segment ``X = {(-t, t): t in [0, 1]}``."""
    return max(0.0, -z[0]) <= min(1.0, z[1])
