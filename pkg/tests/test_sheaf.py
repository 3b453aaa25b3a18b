import math
from fractions import Fraction as Q

import pytest

from projbar.matching import bottleneck
from projbar.oracles import fiber_cohomology, scan_line_interval
from projbar.sheaf import (Interval1D, Rectangle, RectangleModuleSum, StaircaseSupport, convolve_intervals,
                           pushforward_rectangles, read_rectangles, restrict_to_line, scale_interval,
                           separating_pair, write_rectangles)

INF = math.inf


def as_set(intervals):
    return sorted((K.left, K.right, K.degree) for K in intervals)


def random_rectangles(rng, k=3, top=6, unbounded=True):
    out = []
    for _ in range(k):
        x0, y0 = (Q(int(rng.integers(0, top)), int(rng.integers(1, 3))) for _ in range(2))
        x1 = INF if unbounded and rng.random() < 0.2 else x0 + Q(int(rng.integers(1, top)), int(rng.integers(1, 3)))
        y1 = INF if unbounded and rng.random() < 0.2 else y0 + Q(int(rng.integers(1, top)), int(rng.integers(1, 3)))
        out.append(Rectangle(x0, x1, y0, y1, int(rng.integers(0, 2))))
    return RectangleModuleSum(out)


def random_u(rng):
    a = Q(int(rng.integers(0, 5)), 4)
    return (a, 1 - a)


def stalks(barcode, t, top):
    # stalk dimension of the pushforward at t, degree by degree
    return tuple(sum(1 for b in barcode[d] if b.birth <= t < b.death) for d in range(top + 1))


def test_scale():
    assert scale_interval(Interval1D(0, 1), 2) == Interval1D(0, 2)
    assert scale_interval(Interval1D(1, INF), 3) == Interval1D(3, INF)
    assert scale_interval(Interval1D(0, 1), 0) is None
    assert scale_interval(Interval1D(0, INF), 0) is None
    with pytest.raises(ValueError):
        scale_interval(Interval1D(0, 1), -1)


def test_scale_by_zero_of_points_and_open_lines():
    assert scale_interval(Interval1D.point(3), 0) == Interval1D.point(0)
    assert scale_interval(Interval1D(-INF, 2, degree=1), 0) == Interval1D.point(0, 2)


def test_interval_invariants():
    with pytest.raises(ValueError):
        Interval1D(2, 1)
    with pytest.raises(ValueError):
        Interval1D(INF, INF)


def test_convolution_examples():
    assert as_set(convolve_intervals(Interval1D(0, 1), Interval1D(0, 1))) == [(0, 1, 0), (1, 2, 1)]
    assert as_set(convolve_intervals(Interval1D.point(0), Interval1D(Q(1, 3), 5))) == [(Q(1, 3), 5, 0)]
    assert as_set(convolve_intervals(Interval1D(0, 1), Interval1D(2, INF))) == [(2, 3, 0)]
    assert as_set(convolve_intervals(Interval1D(0, INF), Interval1D(1, INF))) == [(1, INF, 0)]


def test_convolution_commutes_and_unit(rng):
    for _ in range(50):
        a, c = (Q(int(rng.integers(-4, 4)), 2) for _ in range(2))
        I = Interval1D(a, INF if rng.random() < 0.2 else a + Q(int(rng.integers(1, 6)), 2))
        J = Interval1D(c, INF if rng.random() < 0.2 else c + Q(int(rng.integers(1, 6)), 2))
        assert as_set(convolve_intervals(I, J)) == as_set(convolve_intervals(J, I))
        assert as_set(convolve_intervals(Interval1D.point(0), I)) == as_set([I])


def test_convolution_matches_fibers(rng):
    # the convolution of two intervals is the pushforward of their product along (1, 1)
    for _ in range(40):
        M = random_rectangles(rng, k=1, unbounded=True)
        R = M.summands[0]
        conv = convolve_intervals(Interval1D(R.x0, R.x1), Interval1D(R.y0, R.y1))
        bc = pushforward_rectangles(M, (1, 1))
        for t in [Q(k, 4) for k in range(-4, 80)]:
            got = tuple(sum(1 for K in conv if K.degree == d and K.left <= t < K.right) for d in (0, 1))
            exp = fiber_cohomology(Rectangle(R.x0, R.x1, R.y0, R.y1, 0), (1, 1), t)[:2]
            assert got == exp
            assert stalks(bc, t, 2)[R.degree:R.degree + 2] == exp


def test_pushforward_examples():
    bc = pushforward_rectangles(RectangleModuleSum([Rectangle(1, 3, 0, 3)]), (Q(1, 2), Q(1, 2)))
    assert bc.multiset() == {0: [(Q(1, 2), Q(3, 2))], 1: [(2, 3)]}
    quad = RectangleModuleSum([Rectangle(0, INF, 0, INF)])
    assert pushforward_rectangles(quad, (Q(1, 2), Q(1, 2))).multiset() == {0: [(0, INF)]}
    assert pushforward_rectangles(quad, (1, 0)).is_empty()


def test_pushforward_rejects_bad_u():
    M = RectangleModuleSum([Rectangle(0, 1, 0, 1)])
    with pytest.raises(ValueError):
        pushforward_rectangles(M, (0, 0))
    with pytest.raises(ValueError):
        pushforward_rectangles(M, (-1, 2))
    with pytest.raises(TypeError):
        pushforward_rectangles(separating_pair()[1], (Q(1, 2), Q(1, 2)))


def test_stalks_match_fiber_rule(rng):
    for _ in range(30):
        M = random_rectangles(rng)
        u = random_u(rng)
        if u == (0, 1) or u == (1, 0):
            u = (Q(1, 3), Q(2, 3))
        bc = pushforward_rectangles(M, u)
        for t in [Q(k, 8) for k in range(-8, 100)]:
            exp = [0, 0, 0]
            for R in M:
                # fiber_cohomology already shifts by the summand degree
                for d, n in enumerate(fiber_cohomology(R, u, t)):
                    exp[d] += n
            assert stalks(bc, t, 2) == tuple(exp)


def test_euler_characteristic_of_fibers(rng):
    for _ in range(20):
        M = random_rectangles(rng)
        u = random_u(rng)
        bc = pushforward_rectangles(M, u)
        for t in [Q(k, 6) for k in range(0, 60)]:
            lhs = sum((-1) ** d * n for d, n in enumerate(stalks(bc, t, 2)))
            rhs = 0
            for R in M:
                h = fiber_cohomology(Rectangle(R.x0, R.x1, R.y0, R.y1), u, t)
                rhs += (-1) ** R.degree * (h[0] - h[1])
            assert lhs == rhs


def test_boundary_u_matches_fiber_rule():
    M = RectangleModuleSum([Rectangle(0, 2, 0, 1), Rectangle(1, INF, 0, INF)])
    for u in [(1, 0), (0, 1)]:
        bc = pushforward_rectangles(M, u)
        for t in [Q(k, 4) for k in range(-4, 20)]:
            exp = [0, 0]
            for R in M:
                for d, n in enumerate(fiber_cohomology(R, u, t)):
                    exp[d] += n
            assert stalks(bc, t, 1) == tuple(exp)


def test_distance_lipschitz_in_u(rng):
    for _ in range(20):
        F, G = random_rectangles(rng, unbounded=False), random_rectangles(rng, unbounded=False)
        R = max(abs(x) for M in (F, G) for r in M for x in (r.x0, r.x1, r.y0, r.y1))
        u, v = (Q(1, 5), Q(4, 5)), (Q(2, 3), Q(1, 3))
        du = bottleneck(pushforward_rectangles(F, u), pushforward_rectangles(G, u))[0]
        dv = bottleneck(pushforward_rectangles(F, v), pushforward_rectangles(G, v))[0]
        assert abs(du - dv) <= 2 * R * sum(abs(a - b) for a, b in zip(u, v))


def test_restrict_examples():
    sq = RectangleModuleSum([Rectangle(0, 2, 0, 2)])
    assert restrict_to_line(sq, (1, 1), (0, 0)).multiset() == {0: [(0, 2)]}
    R = Rectangle(1, 3, 0, 3)
    bc = restrict_to_line(RectangleModuleSum([R]), (1, 1), (0, 0))
    assert bc.multiset() == {0: [(1, 3)]}
    assert scan_line_interval(R.contains, (1, 1), (0, 0), [Q(k, 100) for k in range(-100, 500)]) == (1, Q(299, 100))


def test_restrict_staircase_by_scan():
    _, G = separating_pair(3)
    A = G[0]
    h, c = (1, 1), (0, Q(-1, 2))
    bc = restrict_to_line(A, h, c)
    assert len(bc[0]) == 1
    lo, hi = bc[0][0].birth, bc[0][0].death
    ts = [Q(k, 200) for k in range(-400, 1200)]
    first, last = scan_line_interval(A.contains, h, c, ts)
    assert first == lo and last == hi - Q(1, 200)
    # every sampled point inside the staircase lies in the reported interval
    assert all((lo <= t < hi) == A.contains((c[0] + t, c[1] + t)) for t in ts)


def test_restrict_rejects_nonpositive_direction():
    with pytest.raises(ValueError):
        restrict_to_line(RectangleModuleSum([Rectangle(0, 1, 0, 1)]), (1, 0), (0, 0))


def test_restriction_agrees_with_membership(rng):
    ts = [Q(k, 16) for k in range(-160, 320)]
    for _ in range(20):
        M = random_rectangles(rng, k=2)
        h = (1, Q(int(rng.integers(1, 5)), 4))
        c = (Q(int(rng.integers(-4, 4)), 2), Q(int(rng.integers(-4, 4)), 2))
        for R in M:
            bars = restrict_to_line(RectangleModuleSum([R]), h, c)[R.degree]
            assert len(bars) <= 1
            for t in ts:
                inside = R.contains((c[0] + t * h[0], c[1] + t * h[1]))
                assert inside == any(b.birth <= t < b.death for b in bars)


def test_separating_pair_fibered_barcodes_agree():
    F, G = separating_pair(3)
    for h2 in [Q(k, 10) for k in range(1, 11)]:
        for c1 in [Q(k, 2) for k in range(-5, 5)]:
            h, c = (1, h2), (c1, -c1)
            assert restrict_to_line(F, h, c).same_intervals(restrict_to_line(G, h, c))
            h, c = (h2, 1), (c1, -c1)
            assert restrict_to_line(F, h, c).same_intervals(restrict_to_line(G, h, c))


def test_staircase_invariants():
    with pytest.raises(ValueError):
        StaircaseSupport(Rectangle(0, 3, 0, 3), Rectangle(1, 2, 0, 1))
    with pytest.raises(ValueError):
        StaircaseSupport(Rectangle(0, 3, 0, 3), Rectangle(0, 3, 0, 3))


def test_rectangle_file_round_trip(tmp_path):
    F = RectangleModuleSum([Rectangle(Q(1, 2), 3, 0, INF, 1), Rectangle(0, 1, 0, 1)])
    write_rectangles(F, tmp_path / "r.txt")
    assert read_rectangles(tmp_path / "r.txt") == F
    (tmp_path / "bad.txt").write_text("rect 0 1 2\n")
    with pytest.raises(ValueError):
        read_rectangles(tmp_path / "bad.txt")
