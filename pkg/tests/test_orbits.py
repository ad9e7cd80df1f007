import numpy as np
import pytest

from toridyn.orbits import (
    BOUNDED, GROWING, INCONCLUSIVE, RealizationTarget, annularity_probe, deviation_verdict,
    find_periodic_realizing, irrotational_probe, newton, strict_torality_flags,
    verify_realization,
)
from toridyn.torus import LinearPartError, map_from_spec, torus_distance

TWIST = "disk_twist(0.5,0.5,0.3,1.5707963267948966)"


def _contains(roots, p, tol=1e-8):
    return any(torus_distance(r, p) < tol for r in roots)


def test_target_validation():
    assert RealizationTarget.parse("0, 0, 1") == RealizationTarget(0, 0, 1)
    assert RealizationTarget(1, 2, 3).vector == (1 / 3, 2 / 3)
    for bad in [(2, 4, 2), (0, 0, 0), (1, 1, -1), (0, 0, 2)]:
        with pytest.raises(ValueError):
            RealizationTarget(*bad)
    for text in ["1,2", "a,b,c", "1,2,3,4"]:
        with pytest.raises(ValueError):
            RealizationTarget.parse(text)


def test_standard_fixed_points():
    m = map_from_spec("standard(1.5)")
    r = find_periodic_realizing(m, RealizationTarget(0, 0, 1))
    assert len(r.roots) == 4
    for p in [(0, 0), (0.5, 0), (0, 0.5), (0.5, 0.5)]:
        assert _contains(r.roots, p)
    assert np.all(r.residuals < 1e-9)
    for z in r.roots:
        assert verify_realization(m, z, RealizationTarget(0, 0, 1)) < 1e-9


def test_translation_period_two_returns_grid_representatives():
    m = map_from_spec("translation(0.5,0)")
    r = find_periodic_realizing(m, RealizationTarget(1, 0, 2), grid=4)
    assert len(r.roots) == 16 and np.all(r.residuals == 0)


def test_identity_has_no_drifting_orbit():
    r = find_periodic_realizing(map_from_spec("identity()"), RealizationTarget(1, 0, 1), grid=4)
    assert not r.found and r.to_dict()["roots"] == []


def test_newton_converges_from_nearby_seed():
    m = map_from_spec("standard(1.5)")
    z, res = newton(m, [[0.03, -0.02]], RealizationTarget(0, 0, 1))
    assert res[0] < 1e-10
    assert torus_distance(z[0], (0, 0)) < 1e-8


def test_twisted_map_rejected():
    with pytest.raises(LinearPartError):
        find_periodic_realizing(map_from_spec("chirikov(1)"), RealizationTarget(0, 0, 1))


def test_deviation_verdicts():
    assert deviation_verdict(10.0, 20.0) == GROWING
    assert deviation_verdict(0.5, 0.9) == INCONCLUSIVE  # grows but stays below the floor
    assert deviation_verdict(1.0, 1.01) == BOUNDED
    assert deviation_verdict(0.0, 0.0) == BOUNDED


def test_skew_is_annular_along_x():
    m = map_from_spec("skew(0.3)")
    c = annularity_probe(m, (1, 0), 64, 400)
    assert c.verdict == BOUNDED
    assert c.horizons == [50, 100, 200, 400]
    assert c.to_dict()["thresholds"]["growth_ratio"] == 1.2


def test_translation_drifts_across_y():
    m = map_from_spec("translation(0.25,0.125)")
    assert annularity_probe(m, (0, 1), 16, 400).verdict == GROWING
    assert annularity_probe(m, (2, 1), 16, 400).verdict == BOUNDED


def test_probe_ignores_the_sign_of_the_direction():
    m = map_from_spec("zaslavsky(0.19,1.69)")
    a = annularity_probe(m, (1, 1), 32, 200)
    b = annularity_probe(m, (-1, -1), 32, 200)
    assert a.values == b.values


def test_probe_rejects_bad_directions():
    m = map_from_spec("identity()")
    for v in [(0, 0), (2, 4), (0.5, 1)]:
        with pytest.raises(ValueError):
            annularity_probe(m, v, 8, 64)
    with pytest.raises(ValueError):
        annularity_probe(m, (1, 0), 8, 4)


def test_irrotational_probe():
    assert irrotational_probe(map_from_spec("identity()"), 4, 100).true_looking
    assert irrotational_probe(map_from_spec(TWIST), 16, 1000).true_looking
    t = irrotational_probe(map_from_spec("translation(0.25,0)"), 4, 100)
    assert not t.true_looking and not t.contains_origin


def test_strict_torality_flags_shape():
    flags = strict_torality_flags(map_from_spec("skew(0.3)"), 4, 200, 16)
    assert not flags["strictly_toral_looking"]
    assert set(flags["deviations"]) == {"x", "y"}
