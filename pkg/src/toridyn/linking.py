"""Winding indices of planar polylines and linking numbers of orbits with fixed points.

The isotopy from the identity to the map is taken to be the straight-line
one on the lift, so the trajectory of a point under the isotopy is the
polyline through its successive lifted iterates.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .regions import GridRegion, label_components
from .torus import LiftedMap, iterate_lift

NEAR_TOL = 1e-9
CLOSE_TOL = 1e-9
DISTINCT_TOL = 1e-12
ROUND_TOL = 1e-6
PERIODIC_TOL = 1e-7
FIXED_TOL = 1e-9


class LinkingError(ValueError):
    """A precondition of a winding or linking computation does not hold."""


@dataclass(frozen=True, eq=False)
class Polyline:
    """Planar polyline; ``closed`` loops repeat their first point at the end."""

    points: np.ndarray
    closed: bool = False

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 2:
            raise ValueError("a polyline needs at least two planar points")
        if not np.all(np.isfinite(pts)):
            raise ValueError("polyline points must be finite")
        step = np.hypot(*np.diff(pts, axis=0).T)
        if np.any(step <= DISTINCT_TOL):
            raise ValueError("consecutive polyline points must be distinct")
        if self.closed and np.hypot(*(pts[-1] - pts[0])) > CLOSE_TOL:
            raise ValueError("closed polyline must end where it starts")
        object.__setattr__(self, "points", pts)

    @classmethod
    def through(cls, points, closed: bool = False) -> "Polyline":
        """Build from points, dropping consecutive repeats first."""
        pts = _dedup(np.asarray(points, dtype=float).reshape(-1, 2))
        return cls(pts, closed)

    @property
    def start(self) -> np.ndarray:
        return self.points[0]

    @property
    def end(self) -> np.ndarray:
        return self.points[-1]

    def __len__(self):
        return len(self.points)

    def then(self, other: "Polyline") -> "Polyline":
        """Concatenation: this path followed by ``other``."""
        if np.hypot(*(self.end - other.start)) > CLOSE_TOL:
            raise ValueError("paths do not meet")
        pts = np.vstack([self.points, other.points[1:]])
        closed = bool(np.hypot(*(pts[-1] - pts[0])) <= CLOSE_TOL) and len(pts) > 2
        return Polyline(pts, closed)

    def distance_to(self, z) -> float:
        a, b = self.points[:-1], self.points[1:]
        z = np.asarray(z, dtype=float)
        ab = b - a
        L = np.einsum("ij,ij->i", ab, ab)
        t = np.clip(np.einsum("ij,ij->i", z - a, ab) / L, 0.0, 1.0)
        d = z - a - t[:, None] * ab
        return float(np.min(np.hypot(d[:, 0], d[:, 1])))


def _dedup(pts: np.ndarray) -> np.ndarray:
    keep = np.ones(len(pts), dtype=bool)
    keep[1:] = np.hypot(*np.diff(pts, axis=0).T) > DISTINCT_TOL
    return pts[keep]


def winding_angle(p: Polyline, z) -> float:
    """Total signed angle swept around ``z``, divided by 2 pi."""
    z = np.asarray(z, dtype=float)
    if p.distance_to(z) <= NEAR_TOL:
        raise LinkingError("point lies on or too near the polyline")
    u = p.points[:-1] - z
    v = p.points[1:] - z
    cross = u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0]
    dot = np.einsum("ij,ij->i", u, v)
    return float(np.sum(np.arctan2(cross, dot)) / (2.0 * math.pi))


def winding_index(p: Polyline, z):
    """Winding number of a loop (an int) or the winding of an arc (a float)."""
    w = winding_angle(p, z)
    if not p.closed:
        return w
    k = round(w)
    if abs(w - k) > ROUND_TOL:
        raise ArithmeticError(f"winding of a closed loop is {w!r}, not an integer")
    return int(k)


@dataclass(frozen=True, eq=False)
class IsotopyPath:
    """Trajectory of ``base`` under the straight-line isotopy, over ``steps`` iterates."""

    base: np.ndarray
    steps: int
    vertices: np.ndarray

    @property
    def degenerate(self) -> bool:
        """True when all vertices coincide (a fixed point): a constant path."""
        return len(_dedup(self.vertices)) < 2

    @property
    def polyline(self) -> Optional[Polyline]:
        if self.degenerate:
            return None
        return Polyline.through(self.vertices)

    def winding(self, z) -> float:
        if self.degenerate:
            if np.hypot(*(self.base - np.asarray(z, dtype=float))) <= NEAR_TOL:
                raise LinkingError("point lies on the (constant) path")
            return 0.0
        return winding_angle(self.polyline, z)


def isotopy_path(m: LiftedMap, z, k: int) -> IsotopyPath:
    """Straight segments ``z -> F(z) -> ... -> F^k(z)``."""
    m.require_identity_class()
    if k < 1:
        raise ValueError("k must be at least 1")
    z = np.asarray(z, dtype=float).reshape(2)
    return IsotopyPath(z, k, iterate_lift(m, z, k))


def _check_fixed(m: LiftedMap, p) -> np.ndarray:
    p = np.asarray(p, dtype=float).reshape(2)
    if np.hypot(*(m.eval(p) - p)) > FIXED_TOL:
        raise LinkingError("p is not a fixed point of the lift")
    return p


def _loop_winding(verts: np.ndarray, p: np.ndarray) -> int:
    """Winding of the loop through ``verts`` (last vertex equal to the first)."""
    pts = _dedup(verts)
    if len(pts) >= 4:
        return winding_index(Polyline(pts, closed=True), p)
    # a point or a back-and-forth segment sweeps no net angle
    if len(pts) == 1:
        near = np.hypot(*(pts[0] - p)) <= NEAR_TOL
    else:
        near = Polyline(pts[:2]).distance_to(p) <= NEAR_TOL
    if near:
        raise LinkingError("p lies on the loop")
    return 0


def linking_number_periodic(m: LiftedMap, q, k: int, p) -> int:
    """Linking number of the ``k``-periodic point ``q`` with the fixed point ``p``."""
    path = isotopy_path(m, q, k)
    gap = float(np.hypot(*(path.vertices[-1] - path.base)))
    if gap > PERIODIC_TOL:
        raise LinkingError(f"q is not {k}-periodic for the lift (gap {gap:.3g})")
    p = _check_fixed(m, p)
    verts = path.vertices.copy()
    verts[-1] = verts[0]
    return _loop_winding(verts, p)


# -- invariant regions ---------------------------------------------------------

_STEPS4 = ((1, 0), (-1, 0), (0, 1), (0, -1))


@dataclass
class RegionLift:
    """One lift of a rank-0 region component, as a set of plane cells."""

    R: int
    cells: set

    def cell_of(self, x) -> tuple:
        return tuple(int(v) for v in np.floor(np.asarray(x, dtype=float) * self.R))

    def center(self, c) -> np.ndarray:
        return (np.asarray(c, dtype=float) + 0.5) / self.R


def region_lift(U: GridRegion, near) -> RegionLift:
    """Lift of the rank-0 region ``U`` (one component) translated next to ``near``."""
    lab = label_components(U)
    if len(lab.components) != 1:
        raise LinkingError(f"U must be connected; it has {len(lab.components)} components")
    if lab.components[0].rank != 0:
        raise LinkingError("U is essential")
    R = U.R
    ij = np.argwhere(lab.component_id == 0)
    off = lab.offset[ij[:, 0], ij[:, 1]]
    plane = ij + R * off
    centroid = (plane.mean(axis=0) + 0.5) / R
    w = np.round(np.asarray(near, dtype=float) - centroid).astype(np.int64)
    plane = plane + R * w
    return RegionLift(R, set(map(tuple, plane.tolist())))


def _bfs(lift: RegionLift, start: tuple, goal: tuple) -> list:
    """Shortest 4-connected cell path inside the lift; neighbors in fixed order."""
    prev = {start: None}
    queue = deque([start])
    while queue:
        c = queue.popleft()
        if c == goal:
            break
        for di, dj in _STEPS4:
            n = (c[0] + di, c[1] + dj)
            if n in lift.cells and n not in prev:
                prev[n] = c
                queue.append(n)
    if goal not in prev:
        raise LinkingError("no path inside U (region not invariant at this resolution)")
    path = [goal]
    while prev[path[-1]] is not None:
        path.append(prev[path[-1]])
    return path[::-1]


def linking_number_region(m: LiftedMap, U: GridRegion, k: int, p, base_cell=None) -> int:
    """Linking number of the ``k``-periodic region ``U`` with the fixed point ``p``.

    The loop is the isotopy path of a base point ``z`` (a cell center of the
    lift of ``U`` nearest ``p``) closed up by a path from ``F^k(z)`` back
    to ``z`` through that lift.  ``base_cell`` picks the torus cell of ``z``;
    by default the first cell in row-major order.
    """
    m.require_identity_class()
    p = _check_fixed(m, p)
    lift = region_lift(U, p)
    R = U.R
    if lift.cell_of(p) in lift.cells:
        raise LinkingError("p lies inside U")
    if base_cell is None:
        zc = min(lift.cells, key=lambda c: (c[0] % R, c[1] % R))
    else:
        bi, bj = (int(base_cell[0]) % R, int(base_cell[1]) % R)
        hits = [c for c in lift.cells if c[0] % R == bi and c[1] % R == bj]
        if not hits:
            raise ValueError("base cell is not in U")
        zc = hits[0]
    z = lift.center(zc)
    path = isotopy_path(m, z, k)
    end = path.vertices[-1]
    cells = _bfs(lift, lift.cell_of(end), zc)
    back = np.vstack([end[None, :], np.array([lift.center(c) for c in cells])])
    return _loop_winding(np.vstack([path.vertices, back[1:]]), p)
