"""Small explicit inputs that show where projected barcodes need positivity.

A segment ``X`` from ``(0, 0)`` to ``(-1, 1)`` and the triangle ``Y_s``
spanned by ``X`` and ``(0, s)`` have the same upper sets
``X + [0, inf)^2 = Y_s + [0, inf)^2``, so their sublevel bifiltrations
(filtered by the identity map) carry the same degree-0 support.  The
mixed-sign form ``q(x, y) = (y - x) / 2`` nevertheless separates them, with
a superlevel H0 bottleneck distance growing like ``|s/2 - 1|``.
"""

from __future__ import annotations

import numpy as np
import shapely

from .complex import MultiFiltration, build_complex
from .matching import bottleneck
from .persistence import GradedBarcode, superlevel_barcode

MIXED_FORM = (-0.5, 0.5)


def segment_and_triangle(s: float) -> tuple[MultiFiltration, MultiFiltration]:
    """Bifiltrations of ``X`` (one edge) and ``Y_s`` (one filled triangle) by their coordinates."""
    X = build_complex([(0, 1)])
    Y = build_complex([(0, 1, 2)])
    pts = np.array([[0.0, 0.0], [-1.0, 1.0], [0.0, float(s)]])
    return MultiFiltration(X, pts[:2]), MultiFiltration(Y, pts)


def superlevel_h0(f: MultiFiltration, q=MIXED_FORM) -> GradedBarcode:
    return superlevel_barcode(f.complex, f.scalar_field(q), max_degree=0)


def mixed_form_distance(f: MultiFiltration, g: MultiFiltration, q=MIXED_FORM) -> float:
    """Bottleneck distance of superlevel H0 barcodes along a form that need not be positive."""
    return float(bottleneck(superlevel_h0(f, q), superlevel_h0(g, q), degrees=(0, 0))[0])


def upper_set_contains(f: MultiFiltration, z: np.ndarray) -> np.ndarray:
    """Membership of the points ``z`` in ``|f| + [0, inf)^2``.

    ``z`` lies in the upper set iff the image of some simplex meets the
    closed quadrant ``(-inf, z1] x (-inf, z2]``.
    """
    z = np.atleast_2d(np.asarray(z, dtype=float))
    big = 1e6 + float(np.abs(z).max()) + f.sup_norm()
    quads = shapely.box(-big, -big, z[:, 0], z[:, 1])
    inside = np.zeros(len(z), dtype=bool)
    for facet in f.complex.simplices:
        pts = np.array([f.vertex_value(v) for v in facet])
        if len(pts) == 1:
            geom = shapely.Point(pts[0])
        elif len(pts) == 2:
            geom = shapely.LineString(pts)
        else:
            geom = shapely.Polygon(pts)
        inside |= shapely.intersects(quads, geom)
    return inside


def supports_agree(f: MultiFiltration, g: MultiFiltration, n: int = 200,
                   lo: float = -2.0, hi: float = 2.0) -> bool:
    """Compare the two upper sets on an ``n x n`` sample of ``[lo, hi]^2``."""
    t = np.linspace(lo, hi, n)
    Z = np.column_stack([a.ravel() for a in np.meshgrid(t, t)])
    return bool(np.array_equal(upper_set_contains(f, Z), upper_set_contains(g, Z)))
