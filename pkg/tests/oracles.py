"""Slow, independent reference computations used to check the fast code."""

import math

import numpy as np


def dense_winding(points, z, per_segment=64):
    """Winding number by sampling each segment densely and unwrapping the angle.

    Sampling is refined until no step between samples turns more than a
    quarter turn, so the unwrapped angle cannot skip a branch.
    """
    pts = np.asarray(points, dtype=float)
    z = np.asarray(z, dtype=float)
    while True:
        t = np.linspace(0.0, 1.0, per_segment, endpoint=False)
        dense = np.concatenate([a + t[:, None] * (b - a) for a, b in zip(pts[:-1], pts[1:])]
                               + [pts[-1:]])
        raw = np.arctan2(dense[:, 1] - z[1], dense[:, 0] - z[0])
        step = np.abs(np.diff(np.unwrap(raw)))
        if step.max() < math.pi / 2 or per_segment > 1 << 16:
            break
        per_segment *= 4
    ang = np.unwrap(raw)
    return (ang[-1] - ang[0]) / (2 * math.pi)


def qhull_vertices(points):
    """Hull vertices from Qhull, an implementation independent of ours."""
    from scipy.spatial import ConvexHull

    pts = np.asarray(points, dtype=float)
    return {tuple(pts[i]) for i in ConvexHull(pts).vertices}


def triangle_inradius(a, b, c):
    a, b, c = (np.asarray(x, dtype=float) for x in (a, b, c))
    la, lb, lc = np.hypot(*(b - c)), np.hypot(*(a - c)), np.hypot(*(a - b))
    area = abs((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])) / 2
    return 2 * area / (la + lb + lc)


def crossing_number_inside(poly, z):
    """Even-odd point-in-polygon test (closed polygon, last point = first)."""
    x, y = z
    inside = False
    for (x1, y1), (x2, y2) in zip(poly[:-1], poly[1:]):
        if (y1 > y) != (y2 > y):
            xc = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
            if xc > x:
                inside = not inside
    return inside
