"""File formats: CSV tables, SVG hull plots, PPM/PBM rasters and JSON reports.

All writers are deterministic: identical inputs give identical bytes.
Floats are written with ``repr`` so they round-trip exactly.
"""

from __future__ import annotations

import colorsys
import csv
import gzip
import io
import json
from pathlib import Path
from typing import Iterable, Sequence, Union

import numpy as np

PathLike = Union[str, Path]

ESS_COLOR = (0, 0, 0)
UNDECIDED_COLOR = (160, 160, 160)
BACKGROUND = (255, 255, 255)


def _open(path: PathLike, mode: str):
    path = Path(path)
    binary = "b" in mode
    if path.suffix == ".gz":
        # fixed mtime keeps compressed output byte-identical across runs
        fh = gzip.GzipFile(path, mode[0] + "b", mtime=0)
        return fh if binary else io.TextIOWrapper(fh, newline="")
    return open(path, mode) if binary else open(path, mode, newline="")


# -- CSV ------------------------------------------------------------------------

def write_csv(path: PathLike, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with _open(path, "wt") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v
                        for v in row])


def read_csv(path: PathLike) -> tuple[list, np.ndarray]:
    with _open(path, "rt") as fh:
        r = csv.reader(fh)
        header = next(r)
        data = np.array([[float(v) for v in row] for row in r], dtype=float)
    return header, data.reshape(-1, len(header))


def write_samples_csv(path: PathLike, estimate) -> None:
    """Samples of a rotation-set estimate: ``x0,y0,n,dx,dy``."""
    n = estimate.horizon
    rows = ((x0, y0, n, dx, dy)
            for (x0, y0), (dx, dy) in zip(estimate.starts.tolist(), estimate.values.tolist()))
    write_csv(path, ("x0", "y0", "n", "dx", "dy"), rows)


def write_points_csv(path: PathLike, points) -> None:
    """Hull vertices or polyline points: ``x,y``."""
    write_csv(path, ("x", "y"), np.asarray(points, dtype=float).reshape(-1, 2).tolist())


def write_roots_csv(path: PathLike, roots, residuals) -> None:
    rows = [(x, y, r) for (x, y), r in zip(np.asarray(roots).reshape(-1, 2).tolist(),
                                           np.asarray(residuals).tolist())]
    write_csv(path, ("x", "y", "residual"), rows)


def write_deviation_csv(path: PathLike, curve) -> None:
    write_csv(path, ("n", "d"), zip(curve.horizons, curve.values))


# -- SVG ------------------------------------------------------------------------

def hull_svg(vertices, samples=None, size: int = 400, margin: float = 0.1) -> str:
    """SVG drawing of a hull polygon (and optionally the sample points)."""
    v = np.asarray(vertices, dtype=float).reshape(-1, 2)
    pts = v if samples is None else np.vstack([v, np.asarray(samples, dtype=float)])
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    span = float(max(hi[0] - lo[0], hi[1] - lo[1], 1e-12))
    lo = lo - margin * span
    scale = size / (span * (1 + 2 * margin))

    def xy(p):
        # SVG y axis points down
        return f"{(p[0] - lo[0]) * scale:.6f}", f"{size - (p[1] - lo[1]) * scale:.6f}"

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
           f'viewBox="0 0 {size} {size}">',
           f'<rect width="{size}" height="{size}" fill="white"/>']
    if samples is not None:
        for p in np.asarray(samples, dtype=float):
            x, y = xy(p)
            out.append(f'<circle cx="{x}" cy="{y}" r="1.5" fill="gray"/>')
    if len(v) == 1:
        x, y = xy(v[0])
        out.append(f'<circle cx="{x}" cy="{y}" r="3" fill="black"/>')
    else:
        out.append(f'<polygon points="{" ".join(",".join(xy(p)) for p in v)}" '
                   f'fill="none" stroke="black" stroke-width="1.5"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_text(path: PathLike, text: str) -> None:
    with _open(path, "wt") as fh:
        fh.write(text)


# -- rasters --------------------------------------------------------------------

def ppm_bytes(img: np.ndarray) -> bytes:
    """Binary ``P6`` pixmap of an ``(H, W, 3)`` uint8 image."""
    img = np.asarray(img)
    if img.ndim != 3 or img.shape[2] != 3:
        raise ValueError("expected an (H, W, 3) image")
    h, w = img.shape[:2]
    return f"P6 {w} {h} 255\n".encode() + np.ascontiguousarray(img, dtype=np.uint8).tobytes()


def write_ppm(path: PathLike, img: np.ndarray) -> None:
    with _open(path, "wb") as fh:
        fh.write(ppm_bytes(img))


def read_ppm(path: PathLike) -> np.ndarray:
    with _open(path, "rb") as fh:
        data = fh.read()
    tokens, pos = [], 0
    # header: magic, width, height, maxval, then one whitespace byte
    while len(tokens) < 4:
        while data[pos:pos + 1].isspace():
            pos += 1
        if data[pos:pos + 1] == b"#":
            pos = data.index(b"\n", pos) + 1
            continue
        end = pos
        while not data[end:end + 1].isspace():
            end += 1
        tokens.append(data[pos:end])
        pos = end
    if tokens[0] != b"P6" or int(tokens[3]) != 255:
        raise ValueError("not an 8-bit P6 pixmap")
    w, h = int(tokens[1]), int(tokens[2])
    body = data[pos + 1:pos + 1 + 3 * w * h]
    return np.frombuffer(body, dtype=np.uint8).reshape(h, w, 3).copy()


def write_pbm(path: PathLike, region) -> None:
    write_text(path, region.to_pbm())


def palette(k: int) -> np.ndarray:
    """``k`` distinct saturated colors, deterministic, never black or white."""
    out = np.empty((k, 3), dtype=np.uint8)
    for i in range(k):
        # golden-ratio hue stepping spreads neighbours apart
        h = (i * 0.6180339887498949) % 1.0
        v = 0.85 if i % 2 == 0 else 0.65
        out[i] = np.round(np.array(colorsys.hsv_to_rgb(h, 0.85, v)) * 255)
    return out


def _to_image(grid: np.ndarray) -> np.ndarray:
    """Row 0 at the top holds the cells with the largest ``y``."""
    return np.ascontiguousarray(np.swapaxes(grid, 0, 1)[::-1])


def classification_image(tc) -> np.ndarray:
    """``R x R`` map: Ess black, each inessential island its own color, undecided gray."""
    from .regions import GridRegion, label_components

    R = tc.R
    rgb = np.empty((R, R, 3), dtype=np.uint8)
    rgb[...] = UNDECIDED_COLOR
    rgb[tc.verdicts == 1] = ESS_COLOR
    ine = tc.verdicts == 0
    if ine.any():
        lab = label_components(GridRegion(ine))
        colors = palette(len(lab.components))
        ids = lab.component_id
        rgb[ine] = colors[ids[ine]]
    return _to_image(rgb)


def portrait_image(points: np.ndarray, orbit_ids: np.ndarray, size: int,
                   n_orbits: int) -> np.ndarray:
    """Plot torus points into a ``size x size`` raster, one color per orbit.

    Later orbits overwrite earlier ones where they share a pixel.
    """
    rgb = np.empty((size, size, 3), dtype=np.uint8)
    rgb[...] = BACKGROUND
    ij = np.floor(np.asarray(points) * size).astype(np.int64) % size
    rgb[ij[:, 0], ij[:, 1]] = palette(n_orbits)[orbit_ids]
    return _to_image(rgb)


def pixel_disagreement(a: np.ndarray, b: np.ndarray) -> float:
    """Fraction of pixels whose colors differ."""
    if a.shape != b.shape:
        raise ValueError("images differ in size")
    return float(np.mean(np.any(a != b, axis=-1)))


# -- JSON -----------------------------------------------------------------------

def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        # JSON has no infinities; unbounded values are reported as null
        return x if np.isfinite(x) else None
    if isinstance(x, Path):
        return str(x)
    return x


def dumps(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


def make_report(command: str, config: dict, results: dict, wall_time: float) -> dict:
    from . import __version__

    return {"version": __version__, "command": command, "config": config,
            "results": results, "wall_time": wall_time}


def write_report(path: PathLike, report: dict) -> None:
    write_text(path, dumps(report))


def strip_wall_time(report: dict) -> dict:
    return {k: v for k, v in report.items() if k != "wall_time"}


def portrait(m, orbits: int, steps: int, size: int, seed: int = 0) -> np.ndarray:
    """Phase portrait: ``orbits`` seeded orbits of ``steps`` points each, projected to the torus."""
    from .rotation import _sobol
    from .torus import project

    if orbits < 1 or steps < 1 or size < 1:
        raise ValueError("orbits, steps and size must be positive")
    z = _sobol(2, orbits, seed)
    pts = np.empty((steps, orbits, 2))
    for t in range(steps):
        pts[t] = project(z)
        z = m.eval(z)
    ids = np.tile(np.arange(orbits), steps)
    return portrait_image(pts.reshape(-1, 2), ids, size, orbits)
