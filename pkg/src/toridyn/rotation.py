"""Finite-horizon estimates of rotation sets, local rotation sets and diffusion rates."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np
from scipy.stats import qmc

from .geometry import ConvexPolygon, convex_hull, diffusion_rate, hausdorff_distance
from .regions import GridRegion
from .torus import LiftedMap


@dataclass(frozen=True)
class DisplacementSample:
    """One average displacement ``(F^n(start) - start) / n``."""

    start: tuple
    horizon: int
    value: tuple


@dataclass(frozen=True)
class Ball:
    """Round neighborhood of a torus point, used as a local sampling region."""

    center: tuple
    eps: float

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError("ball radius must be positive")


@dataclass
class RotationSetEstimate:
    """Sampled average displacements at a common horizon and their convex hull.

    ``starts`` and ``values`` are ``(k, 2)`` arrays; ``grid`` is ``G`` for a
    lattice of start points and ``None`` for an explicit start list.
    """

    starts: np.ndarray
    values: np.ndarray
    hull: ConvexPolygon
    horizon: int
    map_label: str
    grid: Optional[int] = None
    seed: Optional[int] = None
    meta: dict = field(default_factory=dict)

    @property
    def samples(self) -> list[DisplacementSample]:
        return [DisplacementSample(tuple(s), self.horizon, tuple(v))
                for s, v in zip(self.starts.tolist(), self.values.tolist())]

    @property
    def diffusion_rate(self) -> float:
        return diffusion_rate(self.hull)

    def to_dict(self) -> dict:
        out = {"map": self.map_label, "N": self.horizon}
        if self.grid is not None:
            out["G"] = self.grid
        else:
            out["S"] = len(self.starts)
        if self.seed is not None:
            out["seed"] = self.seed
        out["hull"] = self.hull.tolist()
        out["diffusion_rate"] = self.diffusion_rate
        out.update(self.meta)
        return out


def grid_starts(G: int) -> np.ndarray:
    """The ``G x G`` lattice ``((i + 1/2) / G, (j + 1/2) / G)``, row ``i`` major."""
    if G < 1:
        raise ValueError("grid size G must be at least 1")
    c = (np.arange(G) + 0.5) / G
    x, y = np.meshgrid(c, c, indexing="ij")
    return np.stack([x.ravel(), y.ravel()], axis=-1)


def _endpoints(m: LiftedMap, starts: np.ndarray, horizons: Sequence[int], threads: int = 1):
    """``F^n(starts)`` for every ``n`` in the increasing list ``horizons``."""
    horizons = list(horizons)

    def run(block):
        z = block.copy()
        out, n = [], 0
        for h in horizons:
            for _ in range(h - n):
                z = m.eval(z)
            n = h
            out.append(z.copy())
        return out

    if threads <= 1 or len(starts) < 2 * threads:
        return run(starts)
    blocks = np.array_split(starts, threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(run, blocks))
    return [np.concatenate([p[k] for p in parts]) for k in range(len(horizons))]


def estimate_from_starts(m: LiftedMap, starts, N: int, threads: int = 1,
                         grid: Optional[int] = None, seed: Optional[int] = None
                         ) -> RotationSetEstimate:
    """Rotation-set estimate from an explicit list of lifted start points."""
    m.require_identity_class()
    if N < 1:
        raise ValueError("horizon N must be at least 1")
    starts = np.asarray(starts, dtype=float).reshape(-1, 2)
    if len(starts) == 0:
        raise ValueError("no start points")
    end, = _endpoints(m, starts, [N], threads)
    values = (end - starts) / N
    return RotationSetEstimate(starts, values, convex_hull(values), N, m.label, grid, seed)


def estimate_rotation_set(m: LiftedMap, G: int, N: int, threads: int = 1) -> RotationSetEstimate:
    """Hull of ``(F^N(z) - z) / N`` over the ``G x G`` grid of start points."""
    return estimate_from_starts(m, grid_starts(G), N, threads, grid=G)


def _sobol(d: int, n: int, seed: int) -> np.ndarray:
    s = qmc.Sobol(d=d, scramble=True, seed=seed)
    m = int(np.ceil(np.log2(max(n, 2))))
    return s.random_base2(m)[:n]


def local_starts(U: Union[GridRegion, Ball], S: int, seed: int = 0) -> np.ndarray:
    """``S`` deterministic low-discrepancy start points lying over ``U``."""
    if S < 1:
        raise ValueError("number of samples S must be at least 1")
    if isinstance(U, Ball):
        c = np.asarray(U.center, dtype=float)
        out = np.empty((0, 2))
        n = 2 * S
        # rejection from the bounding square; the disk fills pi/4 of it
        while len(out) < S:
            u = 2.0 * _sobol(2, n, seed) - 1.0
            out = u[np.hypot(u[:, 0], u[:, 1]) <= 1.0]
            n *= 2
        return c + U.eps * out[:S]
    if isinstance(U, GridRegion):
        cells = np.argwhere(U.cells)
        if len(cells) == 0:
            raise ValueError("empty region")
        u = _sobol(3, S, seed)
        pick = np.minimum((u[:, 0] * len(cells)).astype(int), len(cells) - 1)
        return (cells[pick] + u[:, 1:]) / U.R
    raise TypeError("U must be a GridRegion or a Ball")


def estimate_local_rotation_set(m: LiftedMap, U: Union[GridRegion, Ball], S: int, N: int,
                                seed: int = 0, threads: int = 1) -> RotationSetEstimate:
    """Local rotation set over ``U``: only the start points are constrained to ``U``."""
    est = estimate_from_starts(m, local_starts(U, S, seed), N, threads, seed=seed)
    if isinstance(U, Ball):
        est.meta["region"] = {"center": list(map(float, U.center)), "eps": U.eps}
    else:
        est.meta["region"] = {"R": U.R, "cells": len(U)}
    return est


def birkhoff_rotation_vector(m: LiftedMap, z, N: int) -> np.ndarray:
    """Finite-time rotation vector ``(F^N(z) - z) / N`` of one orbit."""
    m.require_identity_class()
    if N < 1:
        raise ValueError("horizon N must be at least 1")
    z = np.asarray(z, dtype=float)
    end, = _endpoints(m, z.reshape(-1, 2), [N])
    return ((end - z.reshape(-1, 2)) / N).reshape(z.shape)


@dataclass
class Convergence:
    """Hulls at horizons ``N/2`` and ``N`` from the same starts."""

    half: RotationSetEstimate
    full: RotationSetEstimate
    distance: float

    @property
    def rate_change(self) -> float:
        """Relative change of the diffusion rate between the two horizons."""
        a, b = self.half.diffusion_rate, self.full.diffusion_rate
        return abs(b - a) / b if b > 0 else (0.0 if a == 0 else float("inf"))

    def to_dict(self) -> dict:
        return {"N_half": self.half.horizon, "N": self.full.horizon,
                "hausdorff": self.distance,
                "diffusion_rate_half": self.half.diffusion_rate,
                "diffusion_rate": self.full.diffusion_rate}


def convergence(m: LiftedMap, starts, N: int, threads: int = 1) -> Convergence:
    """Compare the estimates at ``N // 2`` and ``N``; one pass over the orbits."""
    m.require_identity_class()
    if N < 2:
        raise ValueError("convergence needs N >= 2")
    starts = np.asarray(starts, dtype=float).reshape(-1, 2)
    half_n = N // 2
    e1, e2 = _endpoints(m, starts, [half_n, N], threads)
    v1, v2 = (e1 - starts) / half_n, (e2 - starts) / N
    half = RotationSetEstimate(starts, v1, convex_hull(v1), half_n, m.label)
    full = RotationSetEstimate(starts, v2, convex_hull(v2), N, m.label)
    return Convergence(half, full, hausdorff_distance(half.hull, full.hull))
