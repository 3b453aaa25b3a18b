"""Projected barcodes and the distances built on them.

For a multi-filtration ``f`` and a nonnegative linear form ``u`` the
projected barcode is the sublevel barcode of the scalar field ``u . f``.
``Upsilon(u)`` is the graded bottleneck distance between the projected
barcodes of two inputs; the gamma-linear ISM is its supremum over the
probability simplex and the gamma-sliced distance a normalised p-th power
integral of it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .complex import MultiFiltration
from .matching import MatchWitness, bottleneck
from .persistence import GradedBarcode, lower_star_filtration, reduce_persistence
from .sheaf import pushforward_rectangles, restrict_to_line

SIMPLEX_TOL = 1e-12


@dataclass(frozen=True)
class ProjectionVector:
    """A nonnegative linear form, normalised to unit l1 norm."""

    coords: tuple

    def __init__(self, coords: Sequence[float], normalize: bool = True):
        u = np.asarray(coords, dtype=float).ravel()
        if np.any(u < 0):
            raise ValueError("projection coordinates must be nonnegative")
        s = u.sum()
        if s <= 0:
            raise ValueError("projection vector must be nonzero")
        if normalize:
            u = u / s
        elif abs(s - 1) > SIMPLEX_TOL:
            raise ValueError("projection vector must sum to one")
        object.__setattr__(self, "coords", tuple(float(x) for x in u))

    @property
    def interior(self) -> bool:
        return all(x > 0 for x in self.coords)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.coords, dtype=dtype)

    def __len__(self) -> int:
        return len(self.coords)


def _as_u(u) -> np.ndarray:
    if isinstance(u, ProjectionVector):
        return np.asarray(u.coords)
    u = np.asarray(u, dtype=float).ravel()
    if np.any(u < 0):
        raise ValueError("projection coordinates must be nonnegative (positivity is required)")
    return u


def projected_barcode(f, u, max_degree: int | None = None) -> GradedBarcode:
    """Barcode of the pushforward of ``f`` along ``u``.

    Multi-filtrations go through lower-star persistence of ``u . f``;
    rectangle sums through the exact interval calculus.
    """
    if isinstance(f, MultiFiltration):
        uu = _as_u(u)
        if len(uu) != f.n_params:
            raise ValueError(f"u has {len(uu)} coordinates, filtration has {f.n_params} parameters")
        return reduce_persistence(lower_star_filtration(f.complex, f.scalar_field(uu)), max_degree)
    coords = u.coords if isinstance(u, ProjectionVector) else u
    return pushforward_rectangles(f, [Fraction(x) for x in coords])


def upsilon_witness(f, g, u, degrees: tuple[int, int] | None = None) -> tuple[float, MatchWitness]:
    value, witness = bottleneck(projected_barcode(f, u), projected_barcode(g, u), degrees)
    return float(value), witness


def upsilon(f, g, u, degrees: tuple[int, int] | None = None) -> float:
    """Graded bottleneck distance between the projected barcodes of ``f`` and ``g`` at ``u``."""
    return upsilon_witness(f, g, u, degrees)[0]


def gradient_from_witness(f: MultiFiltration, g: MultiFiltration, witness: MatchWitness) -> np.ndarray:
    """Gradient in R^n of the active term of an optimal matching (no projection)."""
    grad = np.zeros(f.n_params)
    act = witness.active
    if act is None:
        return grad
    if act.kind == "pair":
        if act.endpoint == "birth":
            e, vf = act.bar_f.birth, act.bar_f.birth_vertex
            e2, vg = act.bar_g.birth, act.bar_g.birth_vertex
        else:
            e, vf = act.bar_f.death, act.bar_f.death_vertex
            e2, vg = act.bar_g.death, act.bar_g.death_vertex
        s = float(np.sign(e - e2))
        grad = s * (f.vertex_value(vf) - g.vertex_value(vg))
    elif act.kind == "unmatched_f":
        b = act.bar_f
        grad = (f.vertex_value(b.death_vertex) - f.vertex_value(b.birth_vertex)) / 2
    else:
        b = act.bar_g
        grad = (g.vertex_value(b.death_vertex) - g.vertex_value(b.birth_vertex)) / 2
    return np.asarray(grad, dtype=float)


def tangent_projection(v: np.ndarray) -> np.ndarray:
    """Project onto the tangent space ``{sum = 0}`` of the simplex."""
    v = np.asarray(v, dtype=float)
    return v - v.mean()


def upsilon_subgradient(f: MultiFiltration, g: MultiFiltration, u,
                        degrees: tuple[int, int] | None = None) -> np.ndarray:
    """Subgradient of Upsilon at an interior ``u``, projected onto the simplex tangent."""
    uu = _as_u(u)
    if np.any(uu <= 0):
        raise ValueError("the subgradient is only defined at interior points")
    _, w = upsilon_witness(f, g, uu, degrees)
    return tangent_projection(gradient_from_witness(f, g, w))


def project_to_simplex(v: np.ndarray, total: float = 1.0) -> np.ndarray:
    """Euclidean projection onto ``{x >= 0, sum x = total}`` (sort-based)."""
    v = np.asarray(v, dtype=float)
    mu = np.sort(v)[::-1]
    css = np.cumsum(mu) - total
    k = np.arange(1, len(v) + 1)
    rho = np.nonzero(mu - css / k > 0)[0][-1]
    theta = css[rho] / (rho + 1)
    return np.maximum(v - theta, 0.0)


def project_to_clamped_simplex(v: np.ndarray, delta: float) -> np.ndarray:
    """Projection onto ``{x >= delta, sum x = 1}``."""
    n = len(v)
    return project_to_simplex(np.asarray(v) - delta, 1.0 - n * delta) + delta


def simplex_grid(n: int, resolution: int) -> np.ndarray:
    """All points of the simplex with coordinates in ``(1/resolution) Z``, corners included."""
    if n == 1:
        return np.ones((1, 1))
    pts = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            pts.append(prefix + [remaining])
            return
        for k in range(remaining, -1, -1):
            rec(prefix + [k], remaining - k, slots - 1)

    rec([], resolution, n)
    return np.array(pts, dtype=float) / resolution


@dataclass
class OptimizerConfig:
    """Settings for the grid pass and projected subgradient ascent.

    ``grid_points`` is the number of points on the segment when ``n = 2``;
    ``grid_resolution`` is used for ``n >= 3``.
    """

    grid_points: int = 201
    grid_resolution: int = 20
    step: float = 0.1
    iterations: int = 100
    delta: float = 1e-4
    multistart: int = 3
    patience: int = 20
    seed: int = 0

    def __post_init__(self):
        if self.grid_points < 2 or self.grid_resolution < 1:
            raise ValueError("grid sizes must be positive")
        if self.iterations < 0 or self.multistart < 0:
            raise ValueError("iteration and multistart counts must be nonnegative")
        if self.step <= 0:
            raise ValueError("step size must be positive")

    def grid(self, n: int) -> np.ndarray:
        if not 0 < self.delta < 1.0 / n:
            raise ValueError("delta must lie in (0, 1/n)")
        if n == 2:
            t = np.linspace(0.0, 1.0, self.grid_points)
            return np.column_stack([t, 1.0 - t])
        return simplex_grid(n, self.grid_resolution)


class UpsilonEvaluator:
    """Caches Upsilon evaluations (with their witnesses) for a fixed pair of inputs."""

    def __init__(self, f, g, degrees: tuple[int, int] | None = None):
        if isinstance(f, MultiFiltration) and isinstance(g, MultiFiltration) and f.n_params != g.n_params:
            raise ValueError("filtrations have different numbers of parameters")
        self.f, self.g, self.degrees = f, g, degrees
        self.cache: dict[tuple, tuple[float, MatchWitness]] = {}
        self.trace: list[tuple[tuple, float]] = []

    @property
    def n_params(self) -> int:
        if isinstance(self.f, MultiFiltration):
            return self.f.n_params
        return 2

    def evaluate(self, u) -> tuple[float, MatchWitness]:
        key = tuple(float(x) for x in np.asarray(u, dtype=float))
        hit = self.cache.get(key)
        if hit is None:
            hit = upsilon_witness(self.f, self.g, key, self.degrees)
            self.cache[key] = hit
            self.trace.append((key, hit[0]))
        return hit

    def __call__(self, u) -> float:
        return self.evaluate(u)[0]

    def subgradient(self, u) -> np.ndarray:
        _, w = self.evaluate(u)
        return tangent_projection(gradient_from_witness(self.f, self.g, w))

    @property
    def evaluations(self) -> int:
        return len(self.cache)


@dataclass
class ISMResult:
    value: float
    argmax: ProjectionVector
    trace: list = field(default_factory=list)
    evaluations: int = 0

    def to_dict(self) -> dict:
        return {"value": self.value, "argmax": list(self.argmax.coords), "evaluations": self.evaluations}


def ism_gamma(f, g, cfg: OptimizerConfig | None = None, degrees: tuple[int, int] | None = None,
              evaluator: UpsilonEvaluator | None = None) -> ISMResult:
    """Certified lower bound on the gamma-linear ISM.

    Dense pass over a simplex grid (corners included), then projected
    subgradient ascent from the best grid points, clamped to ``u >= delta``.
    The returned value is always an evaluated Upsilon.
    """
    cfg = cfg or OptimizerConfig()
    ev = evaluator or UpsilonEvaluator(f, g, degrees)
    n = ev.n_params
    grid = cfg.grid(n)
    vals = np.array([ev(u) for u in grid])
    best_i = int(np.argmax(vals))
    best_val, best_u = float(vals[best_i]), grid[best_i]
    can_ascend = isinstance(ev.f, MultiFiltration) and isinstance(ev.g, MultiFiltration)
    if can_ascend and cfg.iterations > 0 and cfg.multistart > 0 and best_val > 0:
        starts = np.argsort(-vals, kind="stable")[:cfg.multistart]
        for s in starts:
            u = project_to_clamped_simplex(grid[s], cfg.delta)
            local_best, stale = ev(u), 0
            for k in range(cfg.iterations):
                val = ev(u)
                if val > best_val:
                    best_val, best_u = val, u
                if val > local_best:
                    local_best, stale = val, 0
                else:
                    stale += 1
                    if stale > cfg.patience:
                        break
                step = cfg.step / (1 + k)
                nxt = project_to_clamped_simplex(u + step * ev.subgradient(u), cfg.delta)
                if np.allclose(nxt, u, rtol=0, atol=1e-15):
                    break
                u = nxt
            val = ev(u)
            if val > best_val:
                best_val, best_u = val, u
    return ISMResult(best_val, ProjectionVector(best_u), list(ev.trace), ev.evaluations)


def ism_truncated(f, g, p: int, q: int, cfg: OptimizerConfig | None = None) -> float:
    """ISM estimate with Upsilon restricted to degrees ``p..q``."""
    if p > q:
        raise ValueError("degree window requires p <= q")
    return ism_gamma(f, g, cfg, degrees=(p, q)).value


def simplex_volume(n: int) -> float:
    """Riemannian volume of ``{u > 0, sum u = 1}`` in R^n."""
    return math.sqrt(n) / math.factorial(n - 1)


def sliced_gamma(f, g, p: int = 1, points: int = 201, samples: int = 2000, seed: int = 0,
                 normalization: str = "paper", evaluator: UpsilonEvaluator | None = None,
                 degrees: tuple[int, int] | None = None) -> float:
    """gamma-sliced convolution distance.

    ``normalization="paper"``: ``(1/vol) * (int Upsilon^p du)^(1/p)``;
    ``"mean"``: ``((1/vol) int Upsilon^p du)^(1/p)``.  For two parameters the
    integral is a composite trapezoid rule along ``u(t) = (t, 1 - t)``;
    otherwise Monte Carlo with uniform simplex samples.
    """
    if p < 1:
        raise ValueError("p must be at least 1")
    if normalization not in ("paper", "mean"):
        raise ValueError("normalization must be 'paper' or 'mean'")
    ev = evaluator or UpsilonEvaluator(f, g, degrees)
    n = ev.n_params
    vol = simplex_volume(n)
    if n == 1:
        integral, vol = ev([1.0]) ** p, 1.0
    elif n == 2:
        t = np.linspace(0.0, 1.0, points)
        vals = np.array([ev((x, 1.0 - x)) for x in t]) ** p
        integral = math.sqrt(2) * float(np.sum((vals[1:] + vals[:-1]) / 2 * np.diff(t)))
    else:
        rng = np.random.default_rng(seed)
        us = rng.dirichlet(np.ones(n), samples)
        integral = vol * float(np.mean([ev(u) ** p for u in us]))
    if normalization == "paper":
        return integral ** (1.0 / p) / vol
    return (integral / vol) ** (1.0 / p)


@dataclass(frozen=True)
class LineSpec:
    """The positive line ``c + t h`` with ``min h > 0`` and ``max h = 1``."""

    h: tuple
    c: tuple

    def __post_init__(self):
        h = tuple(self.h)
        if any(x <= 0 for x in h):
            raise ValueError("line direction must be strictly positive")
        if abs(max(h) - 1) > 1e-12:
            raise ValueError("line direction must have max coordinate 1")
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "c", tuple(self.c))

    @property
    def weight(self):
        return min(self.h)

    @classmethod
    def from_angle(cls, theta: float, offset: float) -> "LineSpec":
        """Planar line at angle ``theta`` in (0, pi/2) through ``(offset, -offset)``."""
        d = np.array([math.cos(theta), math.sin(theta)])
        d = d / d.max()
        return cls((float(d[0]), float(d[1])), (offset, -offset))


def default_lines(f: MultiFiltration, g: MultiFiltration, n_dirs: int = 10, n_offsets: int = 10) -> list[LineSpec]:
    """Grid of planar lines: angles in (0, pi/2), offsets along the anti-diagonal."""
    R = max(f.sup_norm(), g.sup_norm(), 1e-12)
    thetas = np.linspace(0, math.pi / 2, n_dirs + 2)[1:-1]
    offsets = np.linspace(-2 * R, 2 * R, n_offsets)
    return [LineSpec.from_angle(th, float(s)) for th in thetas for s in offsets]


def push_field(f: MultiFiltration, line: LineSpec) -> np.ndarray:
    """Line coordinate of the push of each vertex value: ``max_i (f_i - c_i) / h_i``."""
    return np.max((f.values - np.asarray(line.c, dtype=float)) / np.asarray(line.h, dtype=float), axis=1)


def fibered_barcode(f, line: LineSpec) -> GradedBarcode:
    if isinstance(f, MultiFiltration):
        return reduce_persistence(lower_star_filtration(f.complex, push_field(f, line)))
    return restrict_to_line(f, [Fraction(x) for x in line.h], [Fraction(x) for x in line.c])


@dataclass
class MatchingResult:
    value: float
    argmax: LineSpec | None
    per_line: list = field(default_factory=list)

    def to_dict(self) -> dict:
        best = None if self.argmax is None else {"h": list(self.argmax.h), "c": list(self.argmax.c)}
        return {"value": self.value, "argmax": best, "lines": len(self.per_line)}


def fibered_matching_distance(f, g, lines: Iterable[LineSpec]) -> MatchingResult:
    """Sampled lower bound on the matching distance: max of ``min(h) * d_B`` over lines."""
    best, arg, per = 0.0, None, []
    for line in lines:
        if not isinstance(line, LineSpec):
            line = LineSpec(*line)
        d = bottleneck(fibered_barcode(f, line), fibered_barcode(g, line))[0]
        val = float(line.weight * d)
        per.append((line, val))
        if arg is None or val > best:
            best, arg = val, line
    return MatchingResult(best, arg, per)
