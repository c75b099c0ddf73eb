"""Planar primitive tests: hulls, widths, transversal predicates."""
from __future__ import annotations

import math
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from transversal_cert.geom import (
    DELTA_FP,
    GOLDEN_RATIO,
    AffineMap,
    DegenerateInput,
    Ellipse,
    Point2,
    PointSet,
    any_triple_wider,
    as_point_array,
    convex_hull,
    ellipse_boundary_point,
    ellipse_points,
    hull_array,
    is_contraction,
    max_triple_width,
    min_altitude,
    min_altitude_batch,
    min_area_ellipse,
    satisfies_T,
    satisfies_T3,
    width,
)

from conftest import oracle_hull_vertices, oracle_min_altitude, oracle_width

finite_coord = st.floats(-50.0, 50.0, allow_nan=False, allow_infinity=False)
point_lists = st.lists(st.tuples(finite_coord, finite_coord), min_size=3,
                       max_size=12)


# ---------------------------------------------------------------------------
# hulls

def test_hull_matches_qhull_on_random_sets(random_point_sets):
    for pts in random_point_sets:
        ours = hull_array(pts)
        theirs = oracle_hull_vertices(pts)
        if theirs is None:
            continue
        ours_sorted = ours[np.lexsort((ours[:, 1], ours[:, 0]))]
        assert ours_sorted.shape == theirs.shape
        assert np.allclose(ours_sorted, theirs, atol=1e-12)


def test_hull_is_ccw_and_strictly_convex(rng):
    for _ in range(30):
        pts = rng.normal(size=(25, 2))
        h = hull_array(pts)
        m = len(h)
        assert m >= 3
        for i in range(m):
            o, a, b = h[i], h[(i + 1) % m], h[(i + 2) % m]
            cross = (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
            assert cross > 0.0  # CCW and no collinear vertex retained


def test_hull_degenerate_inputs():
    assert hull_array([[1.0, 2.0]]).shape == (1, 2)
    seg = hull_array([[0.0, 0.0], [2.0, 2.0], [1.0, 1.0]])
    assert seg.shape == (2, 2)
    assert np.allclose(seg, [[0.0, 0.0], [2.0, 2.0]])
    dup = hull_array([[1.0, 1.0]] * 5)
    assert dup.shape == (1, 2)


@given(point_lists)
@settings(max_examples=60, deadline=None)
def test_hull_unchanged_by_interior_points(pts):
    pts = np.asarray(pts)
    h1 = hull_array(pts)
    if len(h1) < 3:
        return
    centroid = h1.mean(axis=0, keepdims=True)
    h2 = hull_array(np.vstack([pts, centroid]))
    assert h1.shape == h2.shape
    assert np.allclose(np.sort(h1, axis=0), np.sort(h2, axis=0))


def test_convex_hull_wrapper_returns_point_set():
    ps = convex_hull([[0, 0], [1, 0], [0, 1], [0.2, 0.2]])
    assert isinstance(ps, PointSet)
    assert len(ps) == 3


# ---------------------------------------------------------------------------
# widths

def test_width_known_shapes():
    square = [[0, 0], [1, 0], [1, 1], [0, 1]]
    assert width(square) == pytest.approx(1.0, abs=1e-12)
    s = 2.0
    tri = [[0, 0], [s, 0], [s / 2, s * math.sqrt(3) / 2]]
    assert width(tri) == pytest.approx(s * math.sqrt(3) / 2, abs=1e-12)
    hexagon = [[math.cos(k * math.pi / 3), math.sin(k * math.pi / 3)]
               for k in range(6)]
    assert width(hexagon) == pytest.approx(math.sqrt(3), abs=1e-12)


def test_width_degenerate_is_zero():
    assert width([[0.0, 0.0]]) == 0.0
    assert width([[0.0, 0.0], [3.0, 4.0]]) == 0.0
    assert width([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]) == 0.0


def test_width_matches_oracle(random_point_sets):
    # calipers are exact; the sweep oracle refines to ~1e-8 of the truth
    for pts in random_point_sets:
        assert width(pts) == pytest.approx(oracle_width(pts), rel=1e-7,
                                           abs=1e-9)


@given(point_lists, st.tuples(finite_coord, finite_coord))
@settings(max_examples=60, deadline=None)
def test_width_monotone_under_point_addition(pts, extra):
    base = np.asarray(pts)
    bigger = np.vstack([base, np.asarray(extra)[None]])
    assert width(base) <= width(bigger) + 1e-12


def test_width_rotation_invariant(rng):
    pts = rng.normal(size=(9, 2))
    w0 = width(pts)
    for theta in (0.3, 1.2, 2.9):
        rot = AffineMap.rotation(theta, offset=(5.0, -2.0))
        assert width(rot.apply(pts)) == pytest.approx(w0, rel=1e-10, abs=1e-12)


# ---------------------------------------------------------------------------
# triangle widths and batched predicates

def test_min_altitude_is_triangle_width(rng):
    for _ in range(100):
        t = rng.normal(size=(3, 2))
        alt = min_altitude(t[0], t[1], t[2])
        assert alt == pytest.approx(oracle_min_altitude(*t), rel=1e-12, abs=1e-15)
        assert alt == pytest.approx(width(t), rel=1e-9, abs=1e-12)


def test_min_altitude_batch_matches_scalar(rng):
    tris = rng.normal(size=(64, 3, 2))
    batch = min_altitude_batch(tris)
    for i, t in enumerate(tris):
        assert batch[i] == pytest.approx(min_altitude(t[0], t[1], t[2]),
                                         rel=1e-12, abs=1e-15)


def test_min_altitude_degenerate():
    assert min_altitude([0, 0], [0, 0], [0, 0]) == 0.0
    assert min_altitude([0, 0], [1, 1], [2, 2]) == 0.0
    tri = np.array([[[0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]])
    assert min_altitude_batch(tri)[0] == 0.0


def test_max_triple_width_brute_force(rng):
    for k in (4, 5):
        pts = rng.normal(size=(20, k, 2))
        got = max_triple_width(pts)
        for row in range(len(pts)):
            expect = max(
                width(pts[row, list(idx)])
                for idx in combinations(range(k), 3)
            )
            assert got[row] == pytest.approx(expect, rel=1e-9, abs=1e-12)


def test_any_triple_wider_consistent_with_max(rng):
    pts = rng.normal(size=(200, 4, 2))
    mx = max_triple_width(pts)
    for thr in (0.5, 1.0, 2.0):
        hit = any_triple_wider(pts, thr)
        clear = np.abs(mx - thr) > 1e-9
        assert np.array_equal(hit[clear], (mx > thr)[clear])


def test_any_triple_wider_ignores_coincident_points():
    pts = np.zeros((1, 5, 2))
    assert not any_triple_wider(pts, 0.0)[0]


def test_satisfies_T_and_T3():
    square = [[0, 0], [2, 0], [2, 2], [0, 2]]
    assert satisfies_T(square, 1.0)
    assert not satisfies_T(square, 0.99)
    assert satisfies_T3([[0, 0], [1, 1]], 0.0)  # < 3 points pass vacuously
    tall = [[0, 0], [4, 0], [2, 5]]
    assert satisfies_T3(tall, 2.0)
    assert not satisfies_T3(tall, 1.5)


def test_satisfies_T3_monotone_in_radius(rng):
    pts = rng.normal(size=(5, 2)) * 2.0
    radii = np.linspace(0.1, 3.0, 12)
    flags = [satisfies_T3(pts, r) for r in radii]
    assert flags == sorted(flags)  # False ... False True ... True


# ---------------------------------------------------------------------------
# point containers and maps

def test_as_point_array_coercions():
    assert as_point_array(Point2(1.0, 2.0)).shape == (1, 2)
    assert as_point_array([1.0, 2.0, 3.0, 4.0]).shape == (2, 2)
    ps = PointSet.from_array([[1, 2], [3, 4]])
    assert np.allclose(as_point_array(ps), [[1, 2], [3, 4]])
    with pytest.raises(ValueError):
        as_point_array(np.ones((2, 3)))
    with pytest.raises(ValueError):
        as_point_array([[np.nan, 0.0]])


def test_affine_maps_and_contraction():
    rot = AffineMap.rotation(0.7)
    assert is_contraction(rot)
    assert not is_contraction(AffineMap.scaling(1.1, 0.5))
    assert is_contraction(AffineMap.scaling(0.9, 0.5))
    ident = AffineMap.identity()
    pts = np.array([[1.0, 2.0], [3.0, 4.0]])
    assert np.allclose(ident.apply(pts), pts)


def test_width_scales_linearly(rng):
    pts = rng.normal(size=(8, 2))
    w0 = width(pts)
    sc = AffineMap.scaling(3.0, 3.0)
    assert width(sc.apply(pts)) == pytest.approx(3.0 * w0, rel=1e-10)


# ---------------------------------------------------------------------------
# ellipses

def test_ellipse_validation():
    with pytest.raises(ValueError):
        Ellipse(Point2(0, 0), 1.0, 2.0)  # needs r1 >= r2
    with pytest.raises(ValueError):
        Ellipse(Point2(0, 0), 1.0, 0.0)
    e = Ellipse(Point2(0, 0), 2.0, 1.0)
    assert e.area() == pytest.approx(2.0 * math.pi)


def test_ellipse_points_on_circle_have_constant_norm():
    a = np.linspace(0, 2 * math.pi, 17)
    pts = ellipse_points(1.65, 1.65, a)
    assert np.allclose(np.hypot(pts[..., 0], pts[..., 1]), 1.65)


def test_ellipse_boundary_point_matches_batch():
    e = Ellipse(Point2(0.5, -0.25), 3.0, 1.62, rotation=0.0)
    for alpha in (0.0, 1.0, 4.5):
        p = ellipse_boundary_point(e, alpha)
        q = ellipse_points(3.0, 1.62, np.array([alpha]))[0]
        assert p.x == pytest.approx(0.5 + q[0])
        assert p.y == pytest.approx(-0.25 + q[1])


def test_ellipse_boundary_point_rotation():
    e = Ellipse(Point2(0.0, 0.0), 2.0, 1.0, rotation=math.pi / 2)
    p = ellipse_boundary_point(e, 0.0)  # major axis now vertical
    assert p.x == pytest.approx(0.0, abs=1e-12)
    assert p.y == pytest.approx(2.0)


def _inside(e: Ellipse, pts: np.ndarray, tol: float = 1e-7) -> bool:
    c, s = math.cos(e.rotation), math.sin(e.rotation)
    d = pts - [e.center.x, e.center.y]
    u = d[:, 0] * c + d[:, 1] * s
    v = -d[:, 0] * s + d[:, 1] * c
    return bool(np.all((u / e.r1) ** 2 + (v / e.r2) ** 2 <= 1.0 + tol))


def test_min_area_ellipse_contains_inputs(rng):
    for m in (4, 7, 30):
        pts = rng.normal(size=(m, 2)) * [3.0, 1.0] + [1.0, -2.0]
        e = min_area_ellipse(pts)
        assert _inside(e, pts)


def test_min_area_ellipse_known_cases():
    # equilateral triangle: the minimal ellipse is the circumcircle
    tri = np.array([[math.cos(a), math.sin(a)]
                    for a in (0.0, 2 * math.pi / 3, 4 * math.pi / 3)])
    e = min_area_ellipse(tri, tol=1e-10)
    assert e.r1 == pytest.approx(1.0, abs=1e-4)
    assert e.r2 == pytest.approx(1.0, abs=1e-4)
    assert abs(e.center.x) < 1e-6 and abs(e.center.y) < 1e-6
    # rectangle w x h: semi-axes (w/2) sqrt 2, (h/2) sqrt 2
    w, h = 4.0, 2.0
    rect = np.array([[0, 0], [w, 0], [w, h], [0, h]], dtype=float)
    e = min_area_ellipse(rect, tol=1e-10)
    assert e.r1 == pytest.approx(w / 2 * math.sqrt(2), rel=1e-4)
    assert e.r2 == pytest.approx(h / 2 * math.sqrt(2), rel=1e-4)


def test_min_area_ellipse_rejects_collinear():
    with pytest.raises(DegenerateInput):
        min_area_ellipse([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]])


def test_constants():
    assert GOLDEN_RATIO == pytest.approx((1 + math.sqrt(5)) / 2, abs=1e-15)
    assert 0.0 < DELTA_FP <= 1e-6
