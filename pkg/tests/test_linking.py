import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from toridyn.linking import (
    LinkingError, Polyline, isotopy_path, linking_number_periodic, linking_number_region,
    winding_angle, winding_index,
)
from toridyn.regions import GridRegion
from toridyn.torus import map_from_spec

from oracles import crossing_number_inside, dense_winding

TWIST = "disk_twist(0.5,0.5,0.3,1.5707963267948966)"
CENTER = np.array([0.5, 0.5])


def _random_loop(rng, n):
    pts = rng.uniform(-1, 1, (n, 2))
    return np.vstack([pts, pts[:1]])


def test_square_windings():
    sq = Polyline(np.array([[0, 0], [1, 0], [1, 1], [0, 1], [0, 0]], float), closed=True)
    assert winding_index(sq, (0.5, 0.5)) == 1
    rev = Polyline(sq.points[::-1].copy(), closed=True)
    assert winding_index(rev, (0.5, 0.5)) == -1
    assert winding_index(sq, (2.0, 0.5)) == 0
    with pytest.raises(LinkingError):
        winding_index(sq, (0.5, 0.0))


def test_polyline_validation():
    with pytest.raises(ValueError):
        Polyline(np.array([[0.0, 0.0]]))
    with pytest.raises(ValueError):
        Polyline(np.array([[0.0, 0.0], [0.0, 0.0]]))
    with pytest.raises(ValueError):
        Polyline(np.array([[0.0, 0.0], [1.0, 0.0]]), closed=True)
    assert len(Polyline.through([[0, 0], [0, 0], [1, 0]])) == 2


def test_arc_winding_is_fractional():
    arc = Polyline(np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0]]))
    assert winding_index(arc, (0.0, 0.0)) == pytest.approx(0.5)


def test_random_loops_match_dense_oracle():
    rng = np.random.default_rng(7)
    for _ in range(200):
        pts = _random_loop(rng, rng.integers(3, 12))
        z = rng.uniform(-1, 1, 2)
        loop = Polyline(pts, closed=True)
        if loop.distance_to(z) < 1e-6:
            continue
        assert winding_index(loop, z) == round(dense_winding(pts, z))


@given(st.integers(0, 10_000))
def test_additivity(seed):
    rng = np.random.default_rng(seed)
    a = rng.uniform(-1, 1, (rng.integers(2, 8), 2))
    b = np.vstack([a[-1:], rng.uniform(-1, 1, (rng.integers(1, 8), 2))])
    z = rng.uniform(-1, 1, 2)
    pa, pb = Polyline(a), Polyline(b)
    if min(pa.distance_to(z), pb.distance_to(z)) < 1e-6:
        return
    joined = pa.then(pb)
    assert abs(winding_angle(joined, z) - winding_angle(pa, z) - winding_angle(pb, z)) <= 1e-9


@given(st.integers(0, 10_000))
def test_small_perturbations_keep_the_integer(seed):
    rng = np.random.default_rng(seed)
    pts = _random_loop(rng, 8)
    z = rng.uniform(-1, 1, 2)
    loop = Polyline(pts, closed=True)
    d = loop.distance_to(z)
    if d < 1e-6:
        return
    moved = pts.copy()
    moved[1:-1] += rng.uniform(-1, 1, (len(pts) - 2, 2)) * (d / 2 / math.sqrt(2))
    assert winding_index(Polyline(moved, closed=True), z) == winding_index(loop, z)


@given(st.integers(0, 10_000))
def test_nonzero_winding_means_enclosed(seed):
    rng = np.random.default_rng(seed)
    pts = _random_loop(rng, 6)
    z = rng.uniform(-1, 1, 2)
    loop = Polyline(pts, closed=True)
    if loop.distance_to(z) < 1e-6:
        return
    w = winding_index(loop, z)
    # odd winding means inside for even-odd; any nonzero winding means bounded component
    if w % 2:
        assert crossing_number_inside(pts, z)
    if not crossing_number_inside(pts, z):
        assert w % 2 == 0


def test_isotopy_path_of_fixed_point_is_constant():
    m = map_from_spec(TWIST)
    path = isotopy_path(m, CENTER, 3)
    assert path.degenerate and path.polyline is None
    assert path.winding((0.0, 0.0)) == 0.0
    with pytest.raises(LinkingError):
        path.winding(CENTER)


def test_periodic_orbit_links_once():
    m = map_from_spec(TWIST)
    q = CENTER + (0.075, 0.0)
    assert linking_number_periodic(m, q, 4, CENTER) == 1
    # a point outside the twist support is fixed and links trivially
    assert linking_number_periodic(m, (0.02, 0.02), 1, CENTER) == 0
    with pytest.raises(LinkingError):
        linking_number_periodic(m, CENTER + (0.2, 0.0), 4, CENTER)
    with pytest.raises(LinkingError):
        linking_number_periodic(m, q, 4, (0.55, 0.5))


def test_region_linking_matches_periodic_and_ignores_base_point():
    m = map_from_spec(TWIST)
    q = CENTER + (0.075, 0.0)
    U = GridRegion.ball(q, 0.02, 128)
    cells = np.argwhere(U.cells)
    values = {linking_number_region(m, U, 4, CENTER, base_cell=c) for c in cells[:10]}
    assert values == {linking_number_periodic(m, q, 4, CENTER)}


def test_region_preconditions():
    m = map_from_spec(TWIST)
    with pytest.raises(LinkingError):
        linking_number_region(m, GridRegion.ball(CENTER, 0.05, 64), 1, CENTER)
    band = np.zeros((16, 16), dtype=bool)
    band[:, 2] = True
    with pytest.raises(LinkingError):
        linking_number_region(map_from_spec("identity()"), GridRegion(band), 1, (0.5, 0.5))
    with pytest.raises(LinkingError):
        linking_number_region(m, GridRegion.ball(CENTER, 0.05, 64), 1, (0.51, 0.5))
