"""Exact calculus for direct sums of half-open rectangle sheaves on the plane.

Endpoints are :class:`fractions.Fraction` (or ``+-inf``).  A summand
``k_{I x J}`` placed in degree ``deg`` is pushed along ``u = (u1, u2) >= 0``
by scaling each factor and convolving the results; everything here is the
compactly supported (proper) direct image.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence, Union

from .persistence import Bar, GradedBarcode

INF = math.inf


def _q(x):
    """Coerce to Fraction unless infinite."""
    if isinstance(x, float) and math.isinf(x):
        return x
    if isinstance(x, str):
        s = x.strip().lower()
        if s in ("inf", "+inf"):
            return INF
        if s == "-inf":
            return -INF
    return Fraction(x)


def _add(x, y):
    # -inf + inf resolves to -inf: both uses below are strict upper bounds
    if math.isinf(x) and math.isinf(y) and x != y:
        return -INF
    if math.isinf(x):
        return x
    if math.isinf(y):
        return y
    return x + y


@dataclass(frozen=True)
class Interval1D:
    """``[left, right)`` in cohomological degree ``degree``.

    ``left == right`` denotes the closed point ``{left}``; an infinite left
    end means the interval is open on that side.
    """

    left: object
    right: object
    degree: int = 0

    def __post_init__(self):
        object.__setattr__(self, "left", _q(self.left))
        object.__setattr__(self, "right", _q(self.right))
        if self.left > self.right or (self.left == self.right and math.isinf(self.left)):
            raise ValueError(f"empty interval [{self.left}, {self.right})")
        if self.left == INF or self.right == -INF:
            raise ValueError("interval must meet the real line")

    @classmethod
    def point(cls, x, degree: int = 0) -> "Interval1D":
        return cls(x, x, degree)

    @property
    def is_point(self) -> bool:
        return self.left == self.right

    def shifted(self, k: int) -> "Interval1D":
        return Interval1D(self.left, self.right, self.degree + k)

    def translated(self, x) -> "Interval1D":
        return Interval1D(_add(self.left, x), _add(self.right, x), self.degree)

    def as_bar(self) -> Bar:
        return Bar(self.left, self.right)


def scale_interval(I: Interval1D, lam) -> Interval1D | None:
    """Direct image under ``x -> lam * x``; ``None`` stands for the zero object.

    For ``lam = 0`` the image is the compactly supported cohomology of ``I``
    placed at the origin: nothing for half-open intervals, one degree up for
    open ones, unchanged degree for points.
    """
    lam = Fraction(lam)
    if lam < 0:
        raise ValueError("scale factor must be nonnegative")
    if lam > 0:
        scale = lambda x: x if math.isinf(x) else lam * x
        return Interval1D(scale(I.left), scale(I.right), I.degree)
    if I.is_point:
        return Interval1D.point(0, I.degree)
    if math.isinf(I.left) and I.left < 0:
        # (-inf, b) is open on both ends
        return Interval1D.point(0, I.degree + 1)
    return None


def convolve_intervals(I: Interval1D, J: Interval1D) -> list[Interval1D]:
    """Convolution ``k_I * k_J`` as a list of degree-shifted intervals.

    Over ``t`` the fiber is ``I cap (t - J)``; it is closed exactly on
    ``[a+c, min(a+d, b+c))`` and open exactly on ``[max(a+d, b+c), b+d)``.
    """
    if I.is_point:
        return [J.translated(I.left).shifted(I.degree)]
    if J.is_point:
        return [I.translated(J.left).shifted(J.degree)]
    a, b, c, d = I.left, I.right, J.left, J.right
    deg = I.degree + J.degree
    out = []
    lo0, hi0 = _add(a, c), min(_add(a, d), _add(b, c))
    if lo0 < hi0:
        out.append(Interval1D(lo0, hi0, deg))
    lo1, hi1 = max(_add(a, d), _add(b, c)), _add(b, d)
    if lo1 < hi1:
        out.append(Interval1D(lo1, hi1, deg + 1))
    return out


@dataclass(frozen=True)
class Rectangle:
    """Summand ``k_{I x J}`` with ``I = [x0, x1)``, ``J = [y0, y1)`` in degree ``degree``."""

    x0: object
    x1: object
    y0: object
    y1: object
    degree: int = 0

    def __post_init__(self):
        for name in ("x0", "x1", "y0", "y1"):
            object.__setattr__(self, name, _q(getattr(self, name)))
        if not (self.x0 < self.x1 and self.y0 < self.y1):
            raise ValueError("rectangle sides must be nonempty")
        if math.isinf(self.x0) or math.isinf(self.y0):
            raise ValueError("lower-left corner must be finite")

    @property
    def lower(self):
        return (self.x0, self.y0)

    @property
    def upper(self):
        return (self.x1, self.y1)

    def contains(self, p) -> bool:
        return self.x0 <= p[0] < self.x1 and self.y0 <= p[1] < self.y1


@dataclass(frozen=True)
class RectangleModuleSum:
    summands: tuple[Rectangle, ...]

    def __init__(self, summands: Iterable[Rectangle] = ()):
        object.__setattr__(self, "summands", tuple(summands))

    def __iter__(self):
        return iter(self.summands)

    def __add__(self, other: "RectangleModuleSum") -> "RectangleModuleSum":
        return RectangleModuleSum(self.summands + other.summands)


@dataclass(frozen=True)
class StaircaseSupport:
    """``outer`` minus a notch rectangle sharing its lower-left corner."""

    outer: Rectangle
    notch: Rectangle

    def __post_init__(self):
        if self.notch.lower != self.outer.lower:
            raise ValueError("notch must share the outer lower-left corner")
        if not (self.notch.x1 <= self.outer.x1 and self.notch.y1 <= self.outer.y1) or self.notch == self.outer:
            raise ValueError("notch must be strictly smaller than the outer rectangle")

    @property
    def degree(self) -> int:
        return self.outer.degree

    def contains(self, p) -> bool:
        return self.outer.contains(p) and not self.notch.contains(p)


Module = Union[RectangleModuleSum, StaircaseSupport, Rectangle, Sequence]


def _parts(M: Module) -> list:
    if isinstance(M, (Rectangle, StaircaseSupport)):
        return [M]
    out = []
    for x in M:
        out.extend(_parts(x))
    return out


def pushforward_rectangles(M: Module, u: Sequence) -> GradedBarcode:
    """Graded barcode of the proper direct image of a rectangle sum along ``u``."""
    u1, u2 = (Fraction(x) for x in u)
    if u1 < 0 or u2 < 0:
        raise ValueError("projection coordinates must be nonnegative")
    if u1 == 0 and u2 == 0:
        raise ValueError("projection vector must be nonzero")
    out = GradedBarcode()
    for R in _parts(M):
        if isinstance(R, StaircaseSupport):
            raise TypeError("pushforward of staircase modules is not supported")
        I = scale_interval(Interval1D(R.x0, R.x1), u1)
        J = scale_interval(Interval1D(R.y0, R.y1), u2)
        if I is None or J is None:
            continue
        for K in convolve_intervals(I, J):
            out.add(K.degree + R.degree, K.as_bar())
    for bs in out.bars.values():
        bs.sort()
    return out


def _line_window(R: Rectangle, h, c):
    entry = max((R.x0 - c[0]) / h[0], (R.y0 - c[1]) / h[1])
    exit_ = min(_div(_add(R.x1, -c[0]), h[0]), _div(_add(R.y1, -c[1]), h[1]))
    return entry, exit_


def _div(x, y):
    return x if math.isinf(x) else x / y


def restrict_to_line(M: Module, h: Sequence, c: Sequence) -> GradedBarcode:
    """Barcode of the restriction to the line ``t -> c + t h`` (``h > 0``)."""
    h = tuple(Fraction(x) for x in h)
    c = tuple(Fraction(x) for x in c)
    if any(x <= 0 for x in h):
        raise ValueError("line direction must be strictly positive")
    out = GradedBarcode()
    for R in _parts(M):
        if isinstance(R, StaircaseSupport):
            lo, hi = _line_window(R.outer, h, c)
            _, notch_exit = _line_window(R.notch, h, c)
            lo = max(lo, notch_exit)
            deg = R.outer.degree
        else:
            lo, hi = _line_window(R, h, c)
            deg = R.degree
        if lo < hi:
            out.add(deg, Bar(lo, hi))
    for bs in out.bars.values():
        bs.sort()
    return out


def separating_pair(a=3) -> tuple[RectangleModuleSum, list]:
    """Two modules with equal fibered barcodes but different pushforwards.

    ``F = k_{[1,a)x[0,a)} + k_{[0,a)x[1,a)}`` and ``G = k_A + k_{[1,a)x[1,a)}``
    with ``A`` the square ``[0,a)^2`` minus the notch ``[0,1)^2``.
    """
    a = Fraction(a)
    F = RectangleModuleSum([Rectangle(1, a, 0, a), Rectangle(0, a, 1, a)])
    G = [StaircaseSupport(Rectangle(0, a, 0, a), Rectangle(0, 1, 0, 1)), Rectangle(1, a, 1, a)]
    return F, G


def read_rectangles(path: str | Path) -> RectangleModuleSum:
    """Parse ``rect <deg> <a1> <b1> <a2> <b2>`` lines."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            parts = line.split()
            if not parts or parts[0].startswith("#"):
                continue
            if parts[0] != "rect" or len(parts) != 6:
                raise ValueError(f"{path}:{lineno}: expected 'rect <deg> <a1> <b1> <a2> <b2>'")
            deg = int(parts[1])
            a1, b1, a2, b2 = (_q(x) for x in parts[2:])
            out.append(Rectangle(a1, b1, a2, b2, deg))
    return RectangleModuleSum(out)


def write_rectangles(M: RectangleModuleSum, path: str | Path) -> None:
    def fmt(x):
        return "inf" if x == INF else str(x)

    with open(path, "w", encoding="utf-8") as fh:
        for R in M:
            fh.write(f"rect {R.degree} {fmt(R.x0)} {fmt(R.x1)} {fmt(R.y0)} {fmt(R.y1)}\n")
