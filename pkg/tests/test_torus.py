import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from toridyn.torus import (
    DEHN_TWIST, IDENTITY, QUARTER_TURN, LinearPartError, MapSpecError, compose,
    displacement, equivariance_error, inverse_error, iterate_end, iterate_lift, make_map,
    map_from_spec, map_names, max_step, parse_map_spec, power, project, torus_distance,
    translate_lift, twist_angle,
)

SPECS = ["identity()", "translation(0.25,0.125)", "standard(6)", "standard(1.5)",
         "zaslavsky(0.19,1.69)", "skew(0.3)", "disk_twist(0.5,0.5,0.3,1.5707963267948966)"]


@pytest.mark.parametrize("spec", SPECS)
def test_builtin_maps_commute_with_integer_translations(spec):
    assert equivariance_error(map_from_spec(spec)) < 1e-9


@pytest.mark.parametrize("spec", SPECS)
def test_builtin_inverses(spec):
    assert inverse_error(map_from_spec(spec)) < 1e-7


def test_linear_parts():
    assert np.array_equal(make_map("chirikov", [1.0]).linear_part, DEHN_TWIST)
    assert np.array_equal(make_map("zaslavsky_generator", [0.19, 1.69]).linear_part, QUARTER_TURN)
    assert np.array_equal(make_map("zaslavsky", [0.19, 1.69]).linear_part, IDENTITY)
    assert equivariance_error(make_map("chirikov", [1.0])) < 1e-9
    assert equivariance_error(make_map("zaslavsky_generator", [0.19, 1.69])) < 1e-9


def test_zaslavsky_is_fourth_power_of_generator(rng):
    g = make_map("zaslavsky_generator", [0.19, 1.69])
    z = rng.uniform(-1, 2, (50, 2))
    assert np.allclose(make_map("zaslavsky", [0.19, 1.69])(z), power(g, 4)(z), atol=0)


def test_twisted_maps_refuse_rotation_operations():
    with pytest.raises(LinearPartError):
        displacement(make_map("chirikov", [1.0]), [0.1, 0.2], 5)


def test_spec_parsing():
    assert parse_map_spec("zaslavsky(0.19, 1.69)") == ("zaslavsky", [0.19, 1.69])
    assert parse_map_spec("identity()") == ("identity", [])
    for bad in ["zaslavsky", "zaslavsky(0.19,)", "std(1", "(1)", "standard(nan)"]:
        with pytest.raises(MapSpecError):
            map_from_spec(bad)
    with pytest.raises(MapSpecError):
        map_from_spec("standard(1,2)")
    with pytest.raises(MapSpecError):
        map_from_spec("nosuchmap(1)")
    with pytest.raises(MapSpecError):
        map_from_spec("disk_twist(0.5,0.5,0.6,1)")
    assert "zaslavsky" in map_names()


def test_labels_round_trip():
    for spec in SPECS:
        m = map_from_spec(spec)
        assert map_from_spec(m.label).label == m.label


def test_translation_orbit_exact():
    m = make_map("translation", [0.25, 0.125])
    z = iterate_lift(m, [0.0, 0.0], 8)
    assert np.allclose(z[-1], [2.0, 1.0])
    assert np.array_equal(iterate_end(m, [0.0, 0.0], 8), z[-1])


def test_iterate_backwards():
    # a mild map: a chaotic one would amplify roundoff over many steps
    m = map_from_spec("standard(0.5)")
    z0 = np.array([0.3, 0.7])
    z = iterate_end(m, z0, 20)
    assert np.allclose(iterate_end(m, z, -20), z0, atol=1e-9)


def test_compose_and_translate():
    t = make_map("translation", [0.25, 0.0])
    m = compose(t, t)
    assert np.allclose(m([0.0, 0.0]), [0.5, 0.0])
    assert np.allclose(translate_lift(t, (1, -1))([0.0, 0.0]), [1.25, -1.0])
    with pytest.raises(ValueError):
        power(t, 0)


def test_projection_and_distance():
    assert np.array_equal(project([-1e-20, 1.5]), [0.0, 0.5])
    assert torus_distance([0.95, 0.0], [0.05, 0.0]) == pytest.approx(0.1)


@given(st.floats(-50, 50), st.floats(-50, 50))
def test_projection_lands_in_unit_square(x, y):
    p = project([x, y])
    assert np.all((0 <= p) & (p < 1))
    assert torus_distance(p, [x, y]) < 1e-9


def test_disk_twist_profile():
    assert twist_angle(0.0, 0.3, 1.0) == 1.0
    assert twist_angle(0.15, 0.3, 1.0) == 1.0
    assert twist_angle(0.3, 0.3, 1.0) == 0.0
    m = map_from_spec("disk_twist(0.5,0.5,0.3,1.5707963267948966)")
    # the center is fixed, far points are fixed, the core turns rigidly
    assert np.allclose(m([0.5, 0.5]), [0.5, 0.5])
    assert np.allclose(m([0.0, 0.0]), [0.0, 0.0])
    assert np.allclose(m([0.6, 0.5]), [0.5, 0.6])


def test_skew_shape():
    m = map_from_spec("skew(0.3)")
    assert np.allclose(m([0.0, 0.0]), [0.5, 0.3])
    assert max_step(m, [[0.0, 0.0]]) == pytest.approx(math.hypot(0.5, 0.3))
