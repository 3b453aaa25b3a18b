import json
import math
from fractions import Fraction

import pytest

from conftest import random_barcode
from projbar.matching import (_DegreeProblem, bottleneck, bottleneck_degree, convolution_distance_1d,
                              epsilon_matching_exists, pair_cost)
from projbar.oracles import exhaustive_bottleneck, exhaustive_bottleneck_degree
from projbar.persistence import Bar, GradedBarcode

INF = math.inf
H = Fraction(1, 2)


def B(*bars, degree=0):
    return GradedBarcode({degree: [Bar(*b) for b in bars]})


def test_identity_is_feasible_at_zero():
    b = B((0, 1), (2, INF))
    ok, w = epsilon_matching_exists(b, b, 0)
    assert ok and w.value == 0


def test_unmatched_threshold():
    assert epsilon_matching_exists(B((0, 2)), GradedBarcode(), 1)[0]
    assert not epsilon_matching_exists(B((0, 2)), GradedBarcode(), 0.99)[0]


def test_essential_births():
    assert epsilon_matching_exists(B((0, INF)), B((1, INF)), 1)[0]
    assert not epsilon_matching_exists(B((0, INF)), B((1, INF)), 0.5)[0]


def test_negative_epsilon_rejected():
    with pytest.raises(ValueError):
        epsilon_matching_exists(B((0, 1)), B((0, 1)), -0.1)


def test_separating_example_barcodes():
    F = B((H, 3), (H, 3))
    G = B((H, 3), (H, 1), (1, 3))
    value, w = bottleneck(F, G)
    assert value == H and isinstance(value, Fraction)
    assert exhaustive_bottleneck(F, G) == H
    assert w.active is not None and w.active.cost == H


def test_identical_is_zero(rng):
    b = random_barcode(rng)
    assert bottleneck(b, b)[0] == 0


def test_matches_exhaustive(rng):
    for _ in range(100):
        b1 = random_barcode(rng, integer=bool(rng.random() < 0.5))
        b2 = random_barcode(rng, integer=bool(rng.random() < 0.5))
        assert bottleneck(b1, b2)[0] == exhaustive_bottleneck(b1, b2)


def test_value_in_candidate_set(rng):
    for _ in range(30):
        b1, b2 = random_barcode(rng, degrees=(0,)), random_barcode(rng, degrees=(0,))
        prob = _DegreeProblem(b1[0], b2[0])
        v, _ = prob.solve()
        assert math.isinf(v) or v in prob.candidates()


def test_feasibility_monotone(rng):
    for _ in range(20):
        b1, b2 = random_barcode(rng), random_barcode(rng)
        v, _ = bottleneck(b1, b2)
        if math.isinf(v):
            continue
        assert epsilon_matching_exists(b1, b2, v)[0]
        for eps in (v + 0.1, v + 1, 2 * v + 3):
            assert epsilon_matching_exists(b1, b2, eps)[0]
        if v > 0:
            assert not epsilon_matching_exists(b1, b2, v - 1e-9)[0]


def test_infinite_bar_never_matched_to_finite():
    value, w = bottleneck(B((0, INF)), B((0, 100)))
    assert value == INF
    v2, w2 = bottleneck(B((0, INF), (0, 1)), B((0, INF), (0, 100)))
    for a, b in w2.degrees[0].matched:
        assert math.isinf(a.death) == math.isinf(b.death)


def test_witness_costs(rng):
    for _ in range(20):
        b1, b2 = random_barcode(rng), random_barcode(rng)
        value, w = bottleneck(b1, b2)
        if math.isinf(value):
            continue
        assert max([0] + [t.cost for t in w.terms()]) == value
        for d, dm in w.degrees.items():
            assert sorted([a for a, _ in dm.matched] + dm.unmatched_f) == sorted(b1[d])
            assert sorted([b for _, b in dm.matched] + dm.unmatched_g) == sorted(b2[d])


def test_active_term_tie_break():
    # two equal-cost unmatched bars: the smaller F-side birth wins
    F = B((5, 7), (1, 3))
    value, w = bottleneck(F, GradedBarcode())
    assert value == 1
    assert w.active.kind == "unmatched_f" and w.active.bar_f.birth == 1


def test_pair_active_endpoint():
    value, w = bottleneck(B((0, 10)), B((0.5, 12)))
    assert value == 2
    assert w.active.kind == "pair" and w.active.endpoint == "death"


def test_empty_degree_against_bars():
    F = GradedBarcode({1: [Bar(0, 4)]})
    assert convolution_distance_1d(F, GradedBarcode()) == 2
    assert convolution_distance_1d(F, F) == 0


def test_graded_is_max_over_degrees(rng):
    for _ in range(20):
        b1, b2 = random_barcode(rng), random_barcode(rng)
        per = [bottleneck_degree(b1[d], b2[d])[0] for d in (0, 1)]
        assert bottleneck(b1, b2)[0] == max(per)


def test_degree_window():
    F = GradedBarcode({0: [Bar(0, 2)], 1: [Bar(0, 6)]})
    assert bottleneck(F, GradedBarcode(), degrees=(0, 0))[0] == 1
    assert bottleneck(F, GradedBarcode(), degrees=(0, 1))[0] == 3
    assert bottleneck(F, GradedBarcode(), degrees=(2, 4))[0] == 0


def test_closedness(rng):
    for _ in range(20):
        b1, b2 = random_barcode(rng), random_barcode(rng)
        assert (convolution_distance_1d(b1, b2) == 0) == b1.same_intervals(b2)


def test_pair_cost_convention():
    assert pair_cost(Bar(0, INF), Bar(1, INF)) == 1
    assert pair_cost(Bar(0, INF), Bar(0, 5)) == INF


def test_witness_json():
    _, w = bottleneck(B((0, 2)), B((0, INF)))
    data = json.loads(w.to_json())
    assert data["value"] == "inf"
    _, w = bottleneck(B((H, 3)), B((H, 1)))
    data = json.loads(w.to_json())
    # matching costs 2; leaving both unmatched costs max(5/4, 1/4)
    assert data["value"] == "5/4" and data["active"]["kind"] == "unmatched_f"


def test_exhaustive_cap():
    with pytest.raises(ValueError):
        exhaustive_bottleneck_degree([Bar(0, 1)] * 9, [])
