import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twistconj import hull
from twistconj.errors import ValidationError


def test_square_hull():
    corners = [(0, 0), (1, 0), (1, 1), (0, 1)]
    pts = corners + [(0.5, 0.5), (0.2, 0.7), (0.9, 0.1)]
    poly = hull.hull_2d(pts)
    assert poly.kind == "polygon"
    assert set(poly.vertices) == {(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)}


def test_collinear_flagged_as_segment():
    poly = hull.hull_2d([(0, 0), (1, 1), (2, 2), (0.5, 0.5)])
    assert poly.kind == "segment"
    assert set(poly.vertices) == {(0.0, 0.0), (2.0, 2.0)}


def test_single_point():
    poly = hull.hull_2d([(0.3, 0.4), (0.3, 0.4)])
    assert poly.kind == "point"


def test_empty_rejected():
    with pytest.raises(ValidationError):
        hull.hull_2d([])


def test_triangle_coverage(rng):
    # uniform samples in a triangle reconstruct it within Hausdorff 0.02
    tri = hull.hull_2d([(0, 0), (1, 0), (0, 1)])
    pts = []
    while len(pts) < 10000:
        p = rng.random(2)
        if p.sum() <= 1:
            pts.append(tuple(p))
    sampled = hull.hull_2d(pts)
    assert hull.hausdorff(sampled, tri) <= 0.02
    for p in pts:
        assert tri.violation(p) <= 1e-12


coords = st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False)
points_strategy = st.lists(st.tuples(coords, coords), min_size=1, max_size=40)


@given(points_strategy, st.randoms())
@settings(max_examples=60, deadline=None)
def test_hull_invariant_under_permutation_and_duplication(pts, pyrng):
    base = hull.hull_2d(pts)
    shuffled = list(pts) + pts[: len(pts) // 2]
    pyrng.shuffle(shuffled)
    again = hull.hull_2d(shuffled)
    assert base.vertices == again.vertices
    assert base.kind == again.kind


@given(points_strategy)
@settings(max_examples=60, deadline=None)
def test_hull_contains_all_points(pts):
    poly = hull.hull_2d(pts)
    for p in pts:
        assert poly.violation(p) <= 1e-9


def test_reference_slice_full_alcove():
    poly = hull.su3_reference_slice(0.0, 0.0)
    assert set(poly.vertices) == {(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)}


def test_reference_slice_inner_triangle():
    poly = hull.su3_reference_slice(0.5, 0.0)
    assert set(poly.vertices) == {(0.5, 0.0), (0.0, 0.5), (0.5, 0.5)}


def test_reference_slice_equal_parameters_degenerate_to_alcove():
    poly = hull.su3_reference_slice(0.3, 0.3)
    assert set(poly.vertices) == {(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)}


def test_reference_slice_hexagon():
    poly = hull.su3_reference_slice(0.4, 0.1)
    assert len(poly.vertices) == 6


@given(
    st.floats(min_value=0, max_value=0.5, allow_nan=False),
    st.floats(min_value=0, max_value=0.5, allow_nan=False),
)
@settings(max_examples=60, deadline=None)
def test_reference_slice_symmetric(s1, s2):
    a = hull.su3_reference_slice(s1, s2)
    b = hull.su3_reference_slice(s2, s1)
    assert a.vertices == b.vertices


def test_reference_slice_rejects_out_of_range():
    with pytest.raises(ValidationError):
        hull.su3_reference_slice(0.6, 0.0)


def test_compare_cloud_inside(rng):
    ref = hull.su3_reference_slice(0.0, 0.0)
    pts = []
    while len(pts) < 500:
        p = rng.random(2) * 0.8
        if p.sum() <= 0.8:
            pts.append(p)
    out = hull.polytope_compare(np.array(pts), ref)
    assert out["max_violation"] <= 0
    assert out["coverage_fraction"] < 1


def test_compare_self():
    ref = hull.su3_reference_slice(0.25, 0.1)
    out = hull.polytope_compare(np.array(ref.vertices), ref)
    assert out["hausdorff"] <= 1e-12
    assert out["max_violation"] <= 1e-12
    assert out["coverage_fraction"] == pytest.approx(1.0, abs=1e-12)


def test_compare_empty_rejected():
    ref = hull.su3_reference_slice(0.0, 0.0)
    with pytest.raises(ValidationError):
        hull.polytope_compare(np.empty((0, 2)), ref)


def test_hausdorff_metric_sanity(rng):
    polys = []
    for _ in range(6):
        pts = rng.random((8, 2)) * 2
        polys.append(hull.hull_2d(pts))
    for a in polys:
        assert hull.hausdorff(a, a) == 0
        for b in polys:
            assert hull.hausdorff(a, b) == pytest.approx(hull.hausdorff(b, a), abs=1e-12)
            for c in polys:
                assert (
                    hull.hausdorff(a, c)
                    <= hull.hausdorff(a, b) + hull.hausdorff(b, c) + 1e-12
                )


def test_point_distance():
    tri = hull.hull_2d([(0, 0), (1, 0), (0, 1)])
    assert tri.distance((0.2, 0.2)) == 0
    assert tri.distance((2, 0)) == pytest.approx(1.0)
    assert tri.distance((1, 1)) == pytest.approx(np.sqrt(2) / 2)
