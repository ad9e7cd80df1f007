import numpy as np
import pytest

from toridyn.geometry import hausdorff_distance
from toridyn.regions import GridRegion
from toridyn.rotation import (
    Ball, birkhoff_rotation_vector, convergence, estimate_from_starts,
    estimate_local_rotation_set, estimate_rotation_set, grid_starts, local_starts,
)
from toridyn.torus import LinearPartError, map_from_spec, max_step, power, translate_lift


def test_grid_starts_layout():
    g = grid_starts(2)
    assert g.tolist() == [[0.25, 0.25], [0.25, 0.75], [0.75, 0.25], [0.75, 0.75]]
    with pytest.raises(ValueError):
        grid_starts(0)


def test_translation_hull_is_a_point():
    est = estimate_rotation_set(map_from_spec("translation(0.25,0.125)"), 8, 1000)
    assert est.hull.is_point
    assert np.max(np.abs(est.hull.vertices[0] - [0.25, 0.125])) <= 1e-12
    assert est.diffusion_rate == 0.0
    d = est.to_dict()
    assert d["G"] == 8 and d["N"] == 1000 and d["map"] == "translation(0.25,0.125)"


def test_identity_hull_is_origin():
    est = estimate_rotation_set(map_from_spec("identity()"), 4, 10)
    assert est.hull.vertices.tolist() == [[0.0, 0.0]]


def test_other_lift_shifts_the_hull():
    # a non-chaotic map, so roundoff in the shifted lift is not amplified
    m = map_from_spec("skew(0.3)")
    a = estimate_rotation_set(m, 8, 200)
    b = estimate_rotation_set(translate_lift(m, (1, -2)), 8, 200)
    assert hausdorff_distance(a.hull.translated((1, -2)), b.hull) < 1e-9


def test_power_scales_the_hull():
    m = map_from_spec("zaslavsky(0.19,1.69)")
    N = 400
    a = estimate_rotation_set(power(m, 2), 8, N)
    b = estimate_rotation_set(m, 8, 2 * N)
    bound = 8 * max_step(m, grid_starts(8)) / N
    assert hausdorff_distance(a.hull, b.hull.scaled(2)) <= bound


def test_skew_rotation_vector():
    # F^2 moves x by 1 and returns y, so every orbit drifts at (1/2, 0)
    est = estimate_rotation_set(map_from_spec("skew(0.3)"), 8, 1000)
    assert np.allclose(est.hull.vertices, [0.5, 0.0], atol=0.3 / 1000 + 1e-12)


def test_threads_do_not_change_results():
    m = map_from_spec("standard(6)")
    a = estimate_rotation_set(m, 8, 100, threads=1)
    b = estimate_rotation_set(m, 8, 100, threads=3)
    assert np.array_equal(a.values, b.values)


def test_twisted_map_rejected():
    with pytest.raises(LinearPartError):
        estimate_rotation_set(map_from_spec("chirikov(1)"), 4, 10)


def test_bad_horizon():
    with pytest.raises(ValueError):
        estimate_from_starts(map_from_spec("identity()"), [[0, 0]], 0)


def test_local_starts_in_ball_and_deterministic():
    ball = Ball((0.3, 0.6), 0.05)
    s = local_starts(ball, 200, seed=3)
    assert s.shape == (200, 2)
    assert np.all(np.hypot(*(s - [0.3, 0.6]).T) <= 0.05 + 1e-15)
    assert np.array_equal(s, local_starts(ball, 200, seed=3))
    assert not np.array_equal(s, local_starts(ball, 200, seed=4))


def test_local_starts_in_region():
    U = GridRegion.ball((0.5, 0.5), 0.1, 32)
    s = local_starts(U, 100, seed=0)
    ij = np.floor(s * 32).astype(int)
    assert U.cells[ij[:, 0], ij[:, 1]].all()
    with pytest.raises(ValueError):
        local_starts(GridRegion.empty(8), 10)
    with pytest.raises(TypeError):
        local_starts((0.5, 0.5), 10)
    with pytest.raises(ValueError):
        Ball((0, 0), 0.0)


def test_local_estimate_subset_for_translation():
    m = map_from_spec("translation(0.25,0.125)")
    est = estimate_local_rotation_set(m, Ball((0.1, 0.1), 0.01), 16, 50, seed=0)
    assert est.hull.is_point
    assert est.to_dict()["S"] == 16 and est.to_dict()["seed"] == 0


def test_birkhoff_vector():
    m = map_from_spec("translation(0.25,0.125)")
    assert np.allclose(birkhoff_rotation_vector(m, [0.3, 0.3], 40), [0.25, 0.125])
    assert birkhoff_rotation_vector(m, np.zeros((5, 2)), 4).shape == (5, 2)


def test_convergence_record():
    c = convergence(map_from_spec("translation(0.25,0.125)"), grid_starts(4), 100)
    assert c.distance < 1e-12 and c.half.horizon == 50 and c.rate_change == 0.0
