"""Planar convex geometry: hulls, inscribed radius, Hausdorff distance."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

DUP_TOL = 1e-12


def cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


@dataclass(frozen=True, eq=False)
class ConvexPolygon:
    """Counterclockwise, strictly convex vertex list.

    One vertex is a point, two a segment.
    """

    vertices: np.ndarray

    def __len__(self):
        return len(self.vertices)

    @property
    def is_point(self) -> bool:
        return len(self.vertices) == 1

    @property
    def is_segment(self) -> bool:
        return len(self.vertices) == 2

    def edges(self):
        v = self.vertices
        if len(v) == 1:
            return []
        if len(v) == 2:
            return [(v[0], v[1])]
        return [(v[k], v[(k + 1) % len(v)]) for k in range(len(v))]

    def translated(self, t) -> "ConvexPolygon":
        return ConvexPolygon(self.vertices + np.asarray(t, dtype=float))

    def scaled(self, s: float) -> "ConvexPolygon":
        v = self.vertices * float(s)
        if s < 0:
            v = v.copy()
        return ConvexPolygon(v)

    def diameter(self) -> float:
        v = self.vertices
        d = v[:, None, :] - v[None, :, :]
        return float(np.sqrt(np.max(np.einsum("ijk,ijk->ij", d, d))))

    def area(self) -> float:
        v = self.vertices
        if len(v) < 3:
            return 0.0
        x, y = v[:, 0], v[:, 1]
        return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))

    def contains(self, p, tol: float = 1e-12) -> bool:
        return point_polygon_distance(p, self) <= tol

    def tolist(self):
        return self.vertices.tolist()


def is_valid_polygon(poly: ConvexPolygon) -> bool:
    """Check the vertex-list invariants of :class:`ConvexPolygon`."""
    v = np.asarray(poly.vertices, dtype=float)
    n = len(v)
    if n == 0 or not np.all(np.isfinite(v)):
        return False
    for a in range(n):
        for b in range(a + 1, n):
            if np.max(np.abs(v[a] - v[b])) <= DUP_TOL:
                return False
    if n < 3:
        return True
    return all(cross(v[k], v[(k + 1) % n], v[(k + 2) % n]) > 0 for k in range(n))


def convex_hull(points) -> ConvexPolygon:
    """Andrew's monotone chain; collinear points are dropped."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        raise ValueError("convex hull of an empty point set")
    if not np.all(np.isfinite(pts)):
        raise ValueError("points must be finite")
    pts = np.unique(pts, axis=0)
    if len(pts) == 1:
        return ConvexPolygon(pts.copy())
    P = [tuple(p) for p in pts]

    def chain(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and cross(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = chain(P)
    upper = chain(reversed(P))
    hull = lower[:-1] + upper[:-1]
    hull = _clean_cycle(hull)
    return ConvexPolygon(np.array(hull, dtype=float))


def _clean_cycle(hull):
    """Drop near duplicates and non-left turns left over at the chain joints."""
    changed = True
    while changed and len(hull) > 2:
        changed = False
        n = len(hull)
        for k in range(n):
            a, b, c = hull[k - 1], hull[k], hull[(k + 1) % n]
            if max(abs(b[0] - c[0]), abs(b[1] - c[1])) <= DUP_TOL or cross(a, b, c) <= 0:
                del hull[k]
                changed = True
                break
    if len(hull) == 2 and max(abs(hull[0][0] - hull[1][0]), abs(hull[0][1] - hull[1][1])) <= DUP_TOL:
        hull = hull[:1]
    return hull


def point_segment_distance(p, a, b) -> float:
    p, a, b = (np.asarray(x, dtype=float) for x in (p, a, b))
    ab = b - a
    L = float(ab @ ab)
    t = 0.0 if L == 0 else min(1.0, max(0.0, float((p - a) @ ab) / L))
    return float(np.hypot(*(p - a - t * ab)))


def point_polygon_distance(p, poly: ConvexPolygon) -> float:
    """Euclidean distance from ``p`` to the (filled) polygon."""
    v = poly.vertices
    p = np.asarray(p, dtype=float)
    if len(v) == 1:
        return float(np.hypot(*(p - v[0])))
    if len(v) >= 3 and all(cross(a, b, p) >= 0 for a, b in poly.edges()):
        return 0.0
    return min(point_segment_distance(p, a, b) for a, b in poly.edges())


def _edge_constraints(poly: ConvexPolygon):
    v = poly.vertices
    d = np.roll(v, -1, axis=0) - v
    normals = np.stack([d[:, 1], -d[:, 0]], axis=-1)
    normals /= np.hypot(normals[:, 0], normals[:, 1])[:, None]
    offsets = np.einsum("ij,ij->i", normals, v)
    return normals, offsets


def chebyshev_center(poly: ConvexPolygon) -> tuple[np.ndarray, float]:
    """Center and radius of the largest disk inside the polygon."""
    v = poly.vertices
    if len(v) < 3:
        return v.mean(axis=0), 0.0
    normals, offsets = _edge_constraints(poly)
    # maximize t subject to <n_i, c> + t <= b_i
    A = np.hstack([normals, np.ones((len(v), 1))])
    res = linprog(c=[0.0, 0.0, -1.0], A_ub=A, b_ub=offsets,
                  bounds=[(None, None), (None, None), (0, None)], method="highs")
    if res.status != 0:
        raise RuntimeError(f"inscribed-disk LP failed: {res.message}")
    c = np.asarray(res.x[:2])
    slack = offsets - normals @ c - res.x[2]
    scale = max(1.0, float(np.max(np.abs(v))))
    active = np.nonzero(slack <= 1e-9 * scale)[0]
    if len(active) >= 3:
        # re-solve the active system exactly when it pins the center down
        sub = A[active]
        if np.linalg.matrix_rank(sub) == 3:
            sol, *_ = np.linalg.lstsq(sub, offsets[active], rcond=None)
            if np.all(offsets - normals @ sol[:2] >= sol[2] - 1e-9 * scale):
                c = sol[:2]
    r = float(np.min(offsets - normals @ c))
    return c, max(r, 0.0)


def diffusion_rate(hull: ConvexPolygon) -> float:
    """Inner (Chebyshev) radius of a convex polygon; 0 for points and segments."""
    return chebyshev_center(hull)[1]


def support(poly: ConvexPolygon, angles) -> np.ndarray:
    u = np.stack([np.cos(angles), np.sin(angles)], axis=-1)
    return np.max(poly.vertices @ u.T, axis=0)


def hausdorff_distance(A: ConvexPolygon, B: ConvexPolygon, n_angles: int = 360) -> float:
    """Symmetric Hausdorff distance between two convex polygons.

    For convex sets the farthest point of one set from the other is a
    vertex, so the vertex term is exact; the support-function term is a
    sampled lower bound kept as a cross-check.
    """
    vert = max(
        max(point_polygon_distance(a, B) for a in A.vertices),
        max(point_polygon_distance(b, A) for b in B.vertices),
    )
    th = np.linspace(0.0, 2.0 * math.pi, n_angles, endpoint=False)
    supp = float(np.max(np.abs(support(A, th) - support(B, th))))
    return max(vert, supp)
