import gzip
import json

import numpy as np
import pytest

from toridyn import io
from toridyn.orbit_regions import classify_torus
from toridyn.orbits import annularity_probe
from toridyn.regions import GridRegion
from toridyn.rotation import estimate_rotation_set
from toridyn.torus import map_from_spec


def test_samples_csv_round_trip(tmp_path):
    est = estimate_rotation_set(map_from_spec("standard(1.5)"), 4, 50)
    path = tmp_path / "s.csv"
    io.write_samples_csv(path, est)
    header, data = io.read_csv(path)
    assert header == ["x0", "y0", "n", "dx", "dy"]
    assert np.array_equal(data[:, :2], est.starts)
    assert np.array_equal(data[:, 3:], est.values)
    assert (data[:, 2] == 50).all()


def test_other_csv_layouts(tmp_path):
    io.write_points_csv(tmp_path / "h.csv", [[0.25, 0.125]])
    assert (tmp_path / "h.csv").read_text() == "x,y\n0.25,0.125\n"
    io.write_roots_csv(tmp_path / "r.csv", [[0.0, 0.5]], [1e-15])
    assert (tmp_path / "r.csv").read_text() == "x,y,residual\n0.0,0.5,1e-15\n"
    curve = annularity_probe(map_from_spec("identity()"), (1, 0), 4, 16)
    io.write_deviation_csv(tmp_path / "d.csv", curve)
    assert (tmp_path / "d.csv").read_text().splitlines()[:2] == ["n,d", "2,0.0"]


def test_ppm_round_trip_and_gzip_determinism(tmp_path):
    img = np.random.default_rng(0).integers(0, 256, (5, 7, 3), dtype=np.uint8)
    assert io.ppm_bytes(img).startswith(b"P6 7 5 255\n")
    io.write_ppm(tmp_path / "a.ppm", img)
    assert np.array_equal(io.read_ppm(tmp_path / "a.ppm"), img)
    io.write_ppm(tmp_path / "a.ppm.gz", img)
    first = (tmp_path / "a.ppm.gz").read_bytes()
    io.write_ppm(tmp_path / "a.ppm.gz", img)
    assert (tmp_path / "a.ppm.gz").read_bytes() == first
    assert gzip.decompress(first) == io.ppm_bytes(img)
    with pytest.raises(ValueError):
        io.ppm_bytes(np.zeros((3, 3)))


def test_svg_is_deterministic():
    a = io.hull_svg([[0, 0], [1, 0], [0, 1]], samples=[[0.2, 0.2]])
    assert a == io.hull_svg([[0, 0], [1, 0], [0, 1]], samples=[[0.2, 0.2]])
    assert a.startswith("<svg") and "<polygon" in a
    assert "<circle" in io.hull_svg([[0.25, 0.125]])


def test_palette_is_distinct_and_not_black():
    p = io.palette(50)
    assert len({tuple(c) for c in p}) == 50
    assert not np.any(np.all(p == 0, axis=1)) and not np.any(np.all(p == 255, axis=1))


def test_classification_image_colors():
    tc = classify_torus(map_from_spec("identity()"), None, 30, 16)
    img = io.classification_image(tc)
    assert img.shape == (16, 16, 3)
    assert len({tuple(c) for c in img.reshape(-1, 3)}) == 1
    tc = classify_torus(map_from_spec("standard(6)"), None, 100, 16)
    assert (io.classification_image(tc) == 0).all()


def test_portrait_identity_plots_one_point_per_orbit():
    img = io.portrait(map_from_spec("identity()"), 37, 20, 512, seed=0)
    assert np.any(img != io.BACKGROUND, axis=-1).sum() == 37


def test_portrait_translation_orbits_have_four_points():
    img = io.portrait(map_from_spec("translation(0.25,0)"), 1, 50, 64, seed=1)
    assert np.any(img != io.BACKGROUND, axis=-1).sum() == 4


def test_pixel_disagreement():
    a = np.zeros((4, 4, 3), dtype=np.uint8)
    b = a.copy()
    b[0, 0, 1] = 9
    assert io.pixel_disagreement(a, b) == 1 / 16
    with pytest.raises(ValueError):
        io.pixel_disagreement(a, b[:2])


def test_json_dumps_is_canonical():
    text = io.dumps({"b": np.float64(1.5), "a": [np.int64(2), float("inf")], "c": np.bool_(True)})
    assert json.loads(text) == {"a": [2, None], "b": 1.5, "c": True}
    assert text == io.dumps({"c": True, "a": [2, float("inf")], "b": 1.5})
    rep = io.make_report("x", {"k": 1}, {}, 1.0)
    assert set(rep) == {"version", "command", "config", "results", "wall_time"}
    assert "wall_time" not in io.strip_wall_time(rep)


def test_pbm_writer(tmp_path):
    io.write_pbm(tmp_path / "r.pbm", GridRegion.ball((0.5, 0.5), 0.2, 8))
    assert GridRegion.from_pbm((tmp_path / "r.pbm").read_text()) == \
        GridRegion.ball((0.5, 0.5), 0.2, 8)
