"""Orbits of bitmap regions under a torus map, and the Ess/Ine classifier.

Two discretisations of the map are available.

``ShadowMap`` (the default) assigns every cell of a grid ``sub`` times finer
than the working resolution a single successor: the fine cell holding the
image of its center.  The orbit of a seed region is followed along the
fine trajectories started at the centers of its cells, and the coarse cells
they visit make up the orbit region.  Trajectories never branch, so a seed
inside an elliptic island stays on its invariant circles.

``CellDigraph`` is the conservative alternative: the image of a cell is
every cell whose center lies inside the quadrilateral spanned by the images
of its corners, plus the cell holding the image of its center, optionally
widened by a fixed number of cells.  Orbit regions are grown by
breadth-first search.  Because images overlap several cells, such regions
creep outward across invariant circles and islands are lost at moderate N.

Either way a one-cell collar is added before the topology of the reached
set is examined.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import sparse

from .regions import (
    GridRegion, RegionClass, component_diameter, has_essential_component,
    label_components, region_class,
)
from .torus import LiftedMap

ESSENTIAL = "essential"
INESSENTIAL = "inessential"
UNDECIDED = "undecided"

STABLE_STEPS = 10
# physical ball radius of the point test; never below two cells
DEFAULT_EPS = 1.0 / 64
_SMALL_BOX = 8


@dataclass
class OrbitGrowth:
    """Outcome of growing the orbit of a seed region."""

    reached: GridRegion
    region: GridRegion
    steps: int
    stabilized: bool
    backward_skipped: bool
    closed: bool = False
    sizes: list = field(default_factory=list)


def _stabilization(growth: np.ndarray, N: int, stable_steps: int) -> np.ndarray:
    """First step ``s <= N`` closing a run of ``stable_steps`` growth-free steps.

    ``growth`` has shape ``(C, N + 1)`` and counts new cells per step (step 0
    being the seed).  Returns ``-1`` where growth never pauses that long.
    """
    C = growth.shape[0]
    if N < stable_steps:
        return np.full(C, -1)
    quiet = np.concatenate([np.zeros((C, 1), dtype=np.int64),
                            np.cumsum(growth[:, 1:] == 0, axis=1)], axis=1)
    # run of quiet steps ending at t: quiet[t] - quiet[t - stable_steps]
    window = quiet[:, stable_steps:] - quiet[:, :-stable_steps] == stable_steps
    hit = window.any(axis=1)
    return np.where(hit, np.argmax(window, axis=1) + stable_steps, -1)


@dataclass
class _Batch:
    reached: np.ndarray     # (C, R*R) bool
    growth: np.ndarray      # (C, N + 1) new cells per step
    steps: np.ndarray       # (C,)
    stabilized: np.ndarray  # (C,) bool


class ShadowMap:
    """Single-successor transitions on a grid ``sub`` times finer than ``R``.

    ``sub`` should be odd so that one fine cell sits at each coarse center.
    """

    model = "shadow"

    def __init__(self, m: LiftedMap, R: int, sub: int = 5, collar: int = 1):
        m.require_identity_class()
        if R < 2:
            raise ValueError("resolution must be at least 2")
        if sub < 1:
            raise ValueError("sub must be positive")
        self.map = m
        self.R = R
        self.sub = sub
        self.F = R * sub
        self.collar = collar
        self.forward = self._successors(m.eval)
        self.backward = None if m.inverse_eval is None else self._successors(m.inverse_eval)
        fi, fj = np.divmod(np.arange(self.F * self.F), self.F)
        self._coarse = ((fi // sub) * R + fj // sub).astype(np.int32)

    def _successors(self, f) -> np.ndarray:
        F = self.F
        out = np.empty(F * F, dtype=np.int32)
        rows = max(1, (1 << 20) // F)
        for a in range(0, F, rows):
            i, j = np.meshgrid(np.arange(a, min(a + rows, F)), np.arange(F), indexing="ij")
            z = (np.stack([i, j], axis=-1) + 0.5) / F
            im = np.floor(f(z) * F).astype(np.int64) % F
            out[a * F:a * F + im.shape[0] * F] = (im[..., 0] * F + im[..., 1]).ravel()
        return out

    @property
    def has_backward(self) -> bool:
        return self.backward is not None

    def seeds(self, cells: np.ndarray) -> np.ndarray:
        """Fine cells at the centers of the given flat coarse cells."""
        h = self.sub // 2
        ci, cj = np.divmod(np.asarray(cells, dtype=np.int64), self.R)
        return ((ci * self.sub + h) * self.F + cj * self.sub + h).astype(np.int32)

    def coarse(self, fine: np.ndarray) -> np.ndarray:
        return self._coarse[fine]

    def _maps(self, directions: str):
        if directions not in ("both", "forward", "backward"):
            raise ValueError("directions must be 'both', 'forward' or 'backward'")
        if directions == "backward" and self.backward is None:
            raise ValueError(f"{self.map.label} has no inverse")
        out = []
        if directions != "backward":
            out.append(self.forward)
        if directions != "forward" and self.backward is not None:
            out.append(self.backward)
        return out

    def _run(self, cells: np.ndarray, N: int, stable_steps: int, directions: str) -> _Batch:
        """Follow the seed trajectories of ``C`` seed regions (rows of ``cells``).

        A region's reached set is cut at its stabilization step when it has
        one, so the result matches stopping the growth there.
        """
        maps = self._maps(directions)
        cells = np.asarray(cells, dtype=np.int64)
        C, B = cells.shape
        n = self.R * self.R
        never = np.iinfo(np.int32).max
        first = np.full((C, n), never, dtype=np.int32)
        rows = np.repeat(np.arange(C), B)
        first[rows, cells.ravel()] = 0
        growth = np.zeros((C, N + 1), dtype=np.int64)
        growth[:, 0] = (first == 0).sum(axis=1)
        cur = [self.seeds(cells).ravel() for _ in maps]
        all_rows = np.tile(rows, len(maps))
        slot = np.zeros((C, n), dtype=np.int32)
        order = np.arange(len(all_rows), dtype=np.int32)
        for t in range(1, N + 1):
            for d, succ in enumerate(maps):
                cur[d] = succ[cur[d]]
            hit = self._coarse[np.concatenate(cur)]
            new = first[all_rows, hit] == never
            r, h = all_rows[new], hit[new]
            first[r, h] = t
            if len(r):
                # a cell hit twice in one step counts once: keep the last writer
                k = order[:len(r)]
                slot[r, h] = k
                growth[:, t] = np.bincount(r[slot[r, h] == k], minlength=C)
        s = _stabilization(growth, N, stable_steps)
        stabilized = s >= 0
        steps = np.where(stabilized, s, N)
        reached = first <= steps[:, None]
        return _Batch(reached, growth, steps, stabilized)

    def _collared(self, reached: np.ndarray) -> np.ndarray:
        """Dilate ``(C, R, R)`` masks by the collar (torus wrapping)."""
        out = reached.copy()
        k = self.collar
        for di in range(-k, k + 1):
            for dj in range(-k, k + 1):
                if di or dj:
                    out |= np.roll(reached, (di, dj), axis=(1, 2))
        return out

    def grow(self, seed: GridRegion, N: int, stable_steps: int = STABLE_STEPS,
             stop_when=None, directions: str = "both") -> OrbitGrowth:
        """Cells visited within ``N`` steps by the trajectories of the seed centers.

        Stops when nothing new has been visited for ``stable_steps``
        consecutive steps.  ``stop_when`` is accepted for interface parity
        with :class:`CellDigraph` and ignored; the trajectories are cheap.
        """
        if seed.R != self.R:
            raise ValueError("seed resolution does not match the transition map")
        cells = np.flatnonzero(seed.cells)
        skipped = directions == "both" and self.backward is None
        if len(cells) == 0:
            empty = GridRegion.empty(self.R)
            return OrbitGrowth(empty, empty, 0, True, skipped, True, [0])
        b = self._run(cells[None, :], N, stable_steps, directions)
        R = self.R
        reached = b.reached.reshape(1, R, R)
        steps = int(b.steps[0])
        sizes = np.cumsum(b.growth[0, :steps + 1]).tolist()
        return OrbitGrowth(GridRegion(reached[0]), GridRegion(self._collared(reached)[0]),
                           steps, bool(b.stabilized[0]), skipped, False, sizes)

    def classify_cells(self, centers: np.ndarray, offsets: np.ndarray, N: int,
                       stable_steps: int = STABLE_STEPS, batch: int = 64):
        """Verdicts for the balls ``center + offsets`` of many cells at once.

        Yields ``(center, verdict, region)`` with ``region`` the collared
        orbit region for inessential verdicts and ``None`` otherwise.  The
        verdict logic is the one of :meth:`grow` followed by the region test.
        """
        R = self.R
        ci, cj = np.divmod(np.asarray(centers, dtype=np.int64), R)
        for a in range(0, len(ci), batch):
            bi = (ci[a:a + batch, None] + offsets[None, :, 0]) % R
            bj = (cj[a:a + batch, None] + offsets[None, :, 1]) % R
            b = self._run(bi * R + bj, N, stable_steps, "both")
            regions = self._collared(b.reached.reshape(-1, R, R))
            for k in range(len(regions)):
                c = int(ci[a + k] * R + cj[a + k])
                region = GridRegion(regions[k])
                if has_essential_component(region):
                    yield c, ESSENTIAL, None
                elif b.stabilized[k]:
                    yield c, INESSENTIAL, region
                else:
                    yield c, UNDECIDED, None


def _points_in_quads(px, py, quads):
    """Even-odd test of points against quadrilaterals, both batched along axis 0."""
    inside = np.zeros(px.shape, dtype=bool)
    for k in range(4):
        ax, ay = quads[:, k, 0], quads[:, k, 1]
        bx, by = quads[:, (k + 1) % 4, 0], quads[:, (k + 1) % 4, 1]
        straddle = (ay > py) != (by > py)
        with np.errstate(divide="ignore", invalid="ignore"):
            xcross = ax + (py - ay) * (bx - ax) / (by - ay)
        inside ^= straddle & (px < xcross)
    return inside


def _rasterize_images(m_eval, R: int):
    """Edge lists (source cell, target cell) of the transition digraph."""
    n = R * R
    i, j = np.meshgrid(np.arange(R), np.arange(R), indexing="ij")
    base = np.stack([i.ravel(), j.ravel()], axis=-1).astype(float)
    cells = np.arange(n)
    center_img = m_eval((base + 0.5) / R) * R
    ci = np.floor(center_img).astype(np.int64) % R
    src = [cells]
    dst = [ci[:, 0] * R + ci[:, 1]]

    quads = np.stack([m_eval((base + o) / R) for o in ((0, 0), (1, 0), (1, 1), (0, 1))],
                     axis=1) * R
    lo = np.floor(quads.min(axis=1) - 0.5).astype(np.int64)
    hi = np.ceil(quads.max(axis=1) - 0.5).astype(np.int64)
    span = hi - lo + 1
    small = (span[:, 0] <= _SMALL_BOX) & (span[:, 1] <= _SMALL_BOX)
    sel = np.nonzero(small)[0]
    for dx in range(_SMALL_BOX):
        for dy in range(_SMALL_BOX):
            ok = (dx < span[sel, 0]) & (dy < span[sel, 1])
            k = sel[ok]
            cx = lo[k, 0] + dx
            cy = lo[k, 1] + dy
            hit = _points_in_quads(cx + 0.5, cy + 0.5, quads[k])
            k, cx, cy = k[hit], cx[hit], cy[hit]
            src.append(k)
            dst.append((cx % R) * R + (cy % R))
    for k in np.nonzero(~small)[0]:
        xs = np.arange(lo[k, 0], hi[k, 0] + 1)
        ys = np.arange(lo[k, 1], hi[k, 1] + 1)
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        X, Y = X.ravel(), Y.ravel()
        q = np.broadcast_to(quads[k], (len(X), 4, 2))
        hit = _points_in_quads(X + 0.5, Y + 0.5, q)
        src.append(np.full(int(hit.sum()), k))
        dst.append((X[hit] % R) * R + (Y[hit] % R))
    return np.concatenate(src), np.concatenate(dst)


def _dilate_targets(src, dst, R: int, k: int):
    if k <= 0:
        return src, dst
    ti, tj = dst // R, dst % R
    s, d = [], []
    for di in range(-k, k + 1):
        for dj in range(-k, k + 1):
            s.append(src)
            d.append(((ti + di) % R) * R + (tj + dj) % R)
    return np.concatenate(s), np.concatenate(d)


def _as_csr(src, dst, n):
    A = sparse.csr_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(n, n))
    A.sum_duplicates()
    A.data[:] = 1
    return A


class CellDigraph:
    """Cell-transition digraph of a map (and of its inverse when available).

    ``image_dilation`` widens every cell image by that many cells; 0 keeps
    images at the quadrilateral rasterisation.  ``collar`` is the dilation
    applied once to the reached set before its topology is examined.
    """

    model = "quad"

    def __init__(self, m: LiftedMap, R: int, image_dilation: int = 0, collar: int = 1):
        m.require_identity_class()
        if R < 2:
            raise ValueError("resolution must be at least 2")
        self.map = m
        self.R = R
        self.n = R * R
        self.image_dilation = image_dilation
        self.collar = collar
        s, d = _dilate_targets(*_rasterize_images(m.eval, R), R, image_dilation)
        self.forward = _as_csr(s, d, self.n)
        self.backward = None
        if m.inverse_eval is not None:
            s, d = _dilate_targets(*_rasterize_images(m.inverse_eval, R), R, image_dilation)
            self.backward = _as_csr(s, d, self.n)

    @property
    def has_backward(self) -> bool:
        return self.backward is not None

    @staticmethod
    def _successors(A, frontier: np.ndarray) -> np.ndarray:
        if len(frontier) == 0:
            return frontier
        starts, ends = A.indptr[frontier], A.indptr[frontier + 1]
        lens = ends - starts
        total = int(lens.sum())
        if total == 0:
            return np.empty(0, dtype=np.int64)
        idx = np.repeat(starts - np.cumsum(np.r_[0, lens[:-1]]), lens) + np.arange(total)
        return A.indices[idx]

    def grow(self, seed: GridRegion, N: int, stable_steps: int = STABLE_STEPS,
             stop_when=None, directions: str = "both") -> OrbitGrowth:
        """Forward and backward reachable cells from ``seed`` within ``N`` steps.

        Stops early when nothing new has been reached for ``stable_steps``
        consecutive steps, or when ``stop_when(region)`` returns true (it is
        polled at steps 8, 16, 32, ...).
        """
        if seed.R != self.R:
            raise ValueError("seed resolution does not match the digraph")
        if directions not in ("both", "forward", "backward"):
            raise ValueError("directions must be 'both', 'forward' or 'backward'")
        forward = self.forward if directions != "backward" else None
        backward = self.backward if directions != "forward" else None
        if directions == "backward" and backward is None:
            raise ValueError(f"{self.map.label} has no inverse")
        reached = seed.cells.ravel().copy()
        seen_f = reached.copy()
        seen_b = reached.copy()
        start = np.nonzero(reached)[0]
        empty = np.empty(0, dtype=np.int64)
        fwd = start if forward is not None else empty
        bwd = start.copy() if backward is not None else empty
        quiet = 0
        sizes = [int(reached.sum())]
        steps = 0
        next_poll = 8
        stabilized = closed = False
        for steps in range(1, N + 1):
            new_f = empty
            if forward is not None:
                new_f = self._successors(forward, fwd)
                new_f = np.unique(new_f[~seen_f[new_f]])
                seen_f[new_f] = True
            new_b = empty
            if backward is not None:
                new_b = self._successors(backward, bwd)
                new_b = np.unique(new_b[~seen_b[new_b]])
                seen_b[new_b] = True
            fwd, bwd = new_f, new_b
            before = sizes[-1]
            reached[new_f] = True
            reached[new_b] = True
            sizes.append(int(reached.sum()))
            quiet = 0 if sizes[-1] > before else quiet + 1
            if len(fwd) + len(bwd) == 0:
                # both searches exhausted: the set is closed under the digraph
                closed = stabilized = True
                break
            if quiet >= stable_steps:
                stabilized = True
                break
            if stop_when is not None and steps == next_poll:
                next_poll *= 2
                if stop_when(self._region(reached)):
                    break
        reached_region = GridRegion(reached.reshape(self.R, self.R))
        skipped = directions == "both" and self.backward is None
        return OrbitGrowth(reached_region, reached_region.dilated(self.collar), steps,
                           stabilized, skipped, closed, sizes)

    def _region(self, reached: np.ndarray) -> GridRegion:
        return GridRegion(reached.reshape(self.R, self.R)).dilated(self.collar)


MODELS = {"shadow": ShadowMap, "quad": CellDigraph}


def transitions(m: LiftedMap, R: int, model: str = "shadow", **kw):
    """Build the discretisation named by ``model`` ('shadow' or 'quad')."""
    try:
        cls = MODELS[model]
    except KeyError:
        raise ValueError(f"unknown transition model {model!r}; expected one of "
                         f"{sorted(MODELS)}") from None
    return cls(m, R, **kw)


def orbit_region(m: LiftedMap, seed: GridRegion, N: int, digraph=None, model: str = "shadow",
                 **kw) -> GridRegion:
    """Bitmap estimate of the orbit of ``seed`` over ``N`` forward and backward steps."""
    g = digraph if digraph is not None else transitions(m, seed.R, model, **kw)
    return g.grow(seed, N, stable_steps=N + 1).region


@dataclass
class PointVerdict:
    verdict: str
    region_class: RegionClass
    region: GridRegion
    reached: GridRegion
    steps: int
    stabilized: bool
    backward_skipped: bool
    closed: bool
    eps: float
    N: int
    R: int

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "region_class": self.region_class.to_dict(),
            "steps": self.steps,
            "stabilized": self.stabilized,
            "backward_skipped": self.backward_skipped,
            "cells": len(self.region),
            "eps": self.eps, "N": self.N, "R": self.R,
        }


def essential_point_test(m: LiftedMap, x, eps: float, N: int, R: int,
                         digraph=None, model: str = "shadow") -> PointVerdict:
    """Is the torus point ``x`` essential at scale ``eps``?

    Essential when the orbit region of the ``eps``-ball is essential;
    inessential when that region stops growing while still inessential;
    undecided otherwise.
    """
    if eps < 2.0 / R:
        raise ValueError("eps must be at least 2/R")
    g = digraph if digraph is not None else transitions(m, R, model)
    growth = g.grow(GridRegion.ball(x, eps, R), N, stop_when=has_essential_component)
    rc = region_class(growth.region)
    if rc.essential:
        verdict = ESSENTIAL
    elif growth.stabilized:
        verdict = INESSENTIAL
    else:
        verdict = UNDECIDED
    return PointVerdict(verdict, rc, growth.region, growth.reached, growth.steps,
                        growth.stabilized, growth.backward_skipped, growth.closed, eps, N, R)


# -- whole-torus classification ----------------------------------------------

@dataclass
class Island:
    component: int
    rank: int
    direction: Optional[tuple]
    diameter: float
    cells: int
    region_cells: int

    def to_dict(self) -> dict:
        out = {"component": self.component, "rank": self.rank, "cells": self.cells,
               "region_cells": self.region_cells}
        if self.direction is not None:
            out["direction"] = list(self.direction)
        out["diameter"] = None if math.isinf(self.diameter) else self.diameter
        return out


@dataclass
class TorusClassification:
    """Per-cell verdicts (1 essential, 0 inessential, -1 undecided) and island census."""

    verdicts: np.ndarray
    census: list
    ess_class: RegionClass
    ess_components: int
    eps: float
    N: int
    R: int
    model: str
    backward_skipped: bool

    @property
    def ess(self) -> GridRegion:
        return GridRegion(self.verdicts == 1)

    @property
    def ine(self) -> GridRegion:
        return GridRegion(self.verdicts == 0)

    def summary(self) -> dict:
        return {
            "eps": self.eps, "N": self.N, "R": self.R, "model": self.model,
            "essential_cells": int((self.verdicts == 1).sum()),
            "inessential_cells": int((self.verdicts == 0).sum()),
            "undecided_cells": int((self.verdicts == -1).sum()),
            "ess_class": self.ess_class.to_dict(),
            "ess_components": self.ess_components,
            "islands": len(self.census),
            "backward_skipped": self.backward_skipped,
        }


def default_eps(R: int) -> float:
    return max(DEFAULT_EPS, 2.0 / R)


def ball_offsets(eps: float, R: int) -> np.ndarray:
    """Cell offsets ``(di, dj)`` whose centers lie within ``eps`` of a cell center."""
    k = int(math.ceil(eps * R))
    di, dj = np.meshgrid(np.arange(-k, k + 1), np.arange(-k, k + 1), indexing="ij")
    out = np.stack([di.ravel(), dj.ravel()], axis=-1)
    keep = (out[:, 0] ** 2 + out[:, 1] ** 2) <= (eps * R) ** 2 + 1e-9
    return out[keep]


def _explicit_cells(g, eps: float, N: int):
    """Per-cell point tests on a branching digraph.

    A cell whose ball lies inside an orbit region already shown to be closed
    and inessential inherits that verdict: its own orbit region is a subset.
    """
    R = g.R
    offsets = ball_offsets(eps, R)
    closed = np.zeros(R * R, dtype=bool)
    for c in range(R * R):
        ci, cj = divmod(c, R)
        ball = ((ci + offsets[:, 0]) % R) * R + (cj + offsets[:, 1]) % R
        if closed[ball].all():
            yield c, INESSENTIAL, None
            continue
        x = ((ci + 0.5) / R, (cj + 0.5) / R)
        pv = essential_point_test(g.map, x, eps, N, R, digraph=g)
        if pv.verdict == INESSENTIAL and pv.closed and not pv.backward_skipped:
            closed |= pv.reached.cells.ravel()
        yield c, pv.verdict, pv.region if pv.verdict == INESSENTIAL else None


def classify_torus(m: LiftedMap, eps: Optional[float], N: int, R: int, digraph=None,
                   model: str = "shadow", threads: int = 1) -> TorusClassification:
    """Essential/inessential verdict for every cell center, plus island census.

    Every cell gets the point test of :func:`essential_point_test` on one
    shared discretisation.  The census lists the components of the union of
    the stabilized inessential orbit regions, with their lifted diameters.
    ``eps=None`` picks :func:`default_eps`.  ``threads > 1`` splits the cells
    of the shadow model over a thread pool; verdicts do not depend on it.
    """
    eps = default_eps(R) if eps is None else eps
    if eps < 2.0 / R:
        raise ValueError("eps must be at least 2/R")
    g = digraph if digraph is not None else transitions(m, R, model)
    if g.R != R:
        raise ValueError("digraph resolution does not match R")
    code = {ESSENTIAL: 1, INESSENTIAL: 0, UNDECIDED: -1}
    verdicts = np.full(R * R, -1, dtype=np.int64)
    regions = {}
    if isinstance(g, ShadowMap):
        offsets = ball_offsets(eps, R)
        chunks = np.array_split(np.arange(R * R), max(1, threads))
        if len(chunks) == 1:
            results = g.classify_cells(chunks[0], offsets, N)
        else:
            with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
                parts = pool.map(lambda c: list(g.classify_cells(c, offsets, N)), chunks)
                results = [r for part in parts for r in part]
    else:
        results = _explicit_cells(g, eps, N)
    for c, verdict, region in results:
        verdicts[c] = code[verdict]
        if region is not None:
            regions[c] = np.flatnonzero(region.cells)

    grid = verdicts.reshape(R, R)
    census = _census(grid == 0, regions)
    ess = GridRegion(grid == 1)
    n_ess = len(label_components(ess).components) if len(ess) else 0
    return TorusClassification(grid, census, region_class(ess), n_ess, eps, N, R,
                               g.model, not g.has_backward)


def _census(ine: np.ndarray, regions: dict) -> list:
    """One entry per 4-connected component of the inessential cells.

    The island's orbit region is the union of the stabilized orbit regions
    of its cells; rank and lifted diameter refer to the component of that
    union containing the island.  Cells inheriting their verdict carry no
    region of their own and contribute only themselves.
    """
    if not ine.any():
        return []
    R = ine.shape[0]
    lab = label_components(GridRegion(ine))
    ids = lab.component_id.ravel()
    out = []
    for comp in lab.components:
        cells = np.flatnonzero(ids == comp.id)
        mask = np.zeros(R * R, dtype=bool)
        mask[cells] = True
        for c in cells:
            r = regions.get(int(c))
            if r is not None:
                mask[r] = True
        union = label_components(GridRegion(mask.reshape(R, R)))
        k = int(union.component_id.ravel()[cells[0]])
        info = union.components[k]
        d = component_diameter(union, k)
        out.append(Island(comp.id, info.rank, info.direction, d, len(cells), info.cells))
    return out
