import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from toridyn.geometry import (
    ConvexPolygon, chebyshev_center, cross, convex_hull, diffusion_rate, hausdorff_distance,
    is_valid_polygon, point_polygon_distance,
)

from oracles import qhull_vertices, triangle_inradius


def test_triangle_inradius_analytic():
    hull = convex_hull([(0, 0), (1, 0), (0, 1)])
    assert abs(diffusion_rate(hull) - (2 - math.sqrt(2)) / 2) < 1e-9


def test_unit_square_inradius():
    hull = convex_hull([(0, 0), (1, 0), (1, 1), (0, 1), (0.5, 0.5)])
    c, r = chebyshev_center(hull)
    assert abs(r - 0.5) < 1e-12
    assert np.allclose(c, [0.5, 0.5], atol=1e-12)


def test_degenerate_hulls_have_zero_rate():
    assert diffusion_rate(convex_hull([(0.25, 0.125)] * 5)) == 0.0
    seg = convex_hull([(0, 0), (1, 1), (0.5, 0.5)])
    assert seg.is_segment and diffusion_rate(seg) == 0.0


def test_hull_rejects_bad_input():
    with pytest.raises(ValueError):
        convex_hull(np.empty((0, 2)))
    with pytest.raises(ValueError):
        convex_hull([(0, 0), (np.nan, 1)])


@given(st.integers(3, 40), st.integers(0, 10_000))
def test_hull_matches_qhull(n, seed):
    pts = np.random.default_rng(seed).uniform(-1, 1, (n, 2))
    hull = convex_hull(pts)
    assert is_valid_polygon(hull)
    assert {tuple(v) for v in hull.vertices} == qhull_vertices(pts)


@given(st.integers(3, 30), st.integers(0, 10_000))
def test_hull_contains_all_points(n, seed):
    pts = np.random.default_rng(seed).uniform(-1, 1, (n, 2))
    hull = convex_hull(pts)
    assert all(point_polygon_distance(p, hull) <= 1e-12 for p in pts)


@given(st.integers(0, 10_000))
def test_triangle_inradius_matches_formula(seed):
    pts = np.random.default_rng(seed).uniform(-1, 1, (3, 2))
    hull = convex_hull(pts)
    if len(hull) < 3:
        return
    assert diffusion_rate(hull) == pytest.approx(triangle_inradius(*pts), rel=1e-7, abs=1e-12)


@given(st.integers(3, 30), st.integers(0, 10_000))
def test_chebyshev_disk_is_inside_and_touches(n, seed):
    pts = np.random.default_rng(seed).uniform(-1, 1, (n, 2))
    hull = convex_hull(pts)
    c, r = chebyshev_center(hull)
    assert point_polygon_distance(c, hull) == 0.0
    dist = min(abs(cross(a, b, c)) / np.hypot(*(b - a)) for a, b in hull.edges())
    assert dist == pytest.approx(r, abs=1e-9)


@given(st.floats(0.1, 5), st.integers(0, 1000))
def test_rate_scales_linearly(s, seed):
    hull = convex_hull(np.random.default_rng(seed).uniform(-1, 1, (12, 2)))
    assert diffusion_rate(hull.scaled(s)) == pytest.approx(s * diffusion_rate(hull), rel=1e-7)


def test_hausdorff_basics():
    a = convex_hull([(0, 0), (1, 0), (0, 1)])
    assert hausdorff_distance(a, a) == 0.0
    assert hausdorff_distance(a, a.translated((0.5, 0))) == pytest.approx(0.5)
    p = ConvexPolygon(np.array([[0.0, 0.0]]))
    q = ConvexPolygon(np.array([[3.0, 4.0]]))
    assert hausdorff_distance(p, q) == pytest.approx(5.0)
    assert hausdorff_distance(a, p) == pytest.approx(1.0)
