"""Bitmap subsets of the torus and their covering-space homology.

A :class:`GridRegion` at resolution ``R`` is an ``R x R`` boolean array;
cell ``(i, j)`` is the square ``[i/R, (i+1)/R] x [j/R, (j+1)/R]`` (first
index is ``x``).  The region stands for the open set interior to the union
of its closed cells, so cells of the region connect through shared edges
(4-connectivity) while cells of the closed complement also connect through
shared corners (8-connectivity).

Components are labelled with a union-find whose links carry the integer
translation between lifted cells.  A link that closes a cycle contributes
its net translation to the component's homology subgroup ``H`` of ``Z^2``:
rank 0 is an inessential component, rank 1 an annular one with a primitive
direction, rank 2 a component whose lift is invariant under all of ``Z^2``.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy import ndimage

from .geometry import convex_hull

FOUR = ((1, 0), (-1, 0), (0, 1), (0, -1))
EIGHT = FOUR + ((1, 1), (1, -1), (-1, 1), (-1, -1))

_STRUCT = {
    4: ndimage.generate_binary_structure(2, 1),
    8: ndimage.generate_binary_structure(2, 2),
}


def _neighbors(connectivity: int):
    if connectivity == 4:
        return FOUR
    if connectivity == 8:
        return EIGHT
    raise ValueError("connectivity must be 4 or 8")


@dataclass(eq=False)
class GridRegion:
    """Resolution-``R`` bitmap on the torus."""

    cells: np.ndarray

    def __post_init__(self):
        cells = np.asarray(self.cells, dtype=bool)
        if cells.ndim != 2 or cells.shape[0] != cells.shape[1]:
            raise ValueError("cells must be a square 2-d array")
        if cells.shape[0] < 2:
            raise ValueError("resolution must be at least 2")
        self.cells = cells

    @property
    def R(self) -> int:
        return self.cells.shape[0]

    @classmethod
    def empty(cls, R: int) -> "GridRegion":
        return cls(np.zeros((R, R), dtype=bool))

    @classmethod
    def full(cls, R: int) -> "GridRegion":
        return cls(np.ones((R, R), dtype=bool))

    @classmethod
    def ball(cls, center, eps: float, R: int) -> "GridRegion":
        """Cells whose centers lie within torus distance ``eps`` of ``center``."""
        c = (np.arange(R) + 0.5) / R
        dx = c - float(center[0])
        dy = c - float(center[1])
        dx -= np.round(dx)
        dy -= np.round(dy)
        return cls(dx[:, None] ** 2 + dy[None, :] ** 2 <= eps * eps)

    @classmethod
    def from_points(cls, points, R: int) -> "GridRegion":
        """Cells containing at least one of the (torus-projected) points."""
        idx = cell_index(points, R).reshape(-1, 2)
        cells = np.zeros((R, R), dtype=bool)
        cells[idx[:, 0], idx[:, 1]] = True
        return cls(cells)

    def copy(self) -> "GridRegion":
        return GridRegion(self.cells.copy())

    def complement(self) -> "GridRegion":
        return GridRegion(~self.cells)

    def __or__(self, other: "GridRegion") -> "GridRegion":
        return GridRegion(self.cells | other.cells)

    def __and__(self, other: "GridRegion") -> "GridRegion":
        return GridRegion(self.cells & other.cells)

    def __eq__(self, other) -> bool:
        return isinstance(other, GridRegion) and np.array_equal(self.cells, other.cells)

    def __len__(self) -> int:
        return int(self.cells.sum())

    def issubset(self, other: "GridRegion") -> bool:
        return not np.any(self.cells & ~other.cells)

    def shifted(self, di: int, dj: int) -> "GridRegion":
        return GridRegion(np.roll(self.cells, (di, dj), axis=(0, 1)))

    def dilated(self, k: int = 1) -> "GridRegion":
        """Add every cell within Chebyshev distance ``k`` (torus wrapping)."""
        if k <= 0:
            return self.copy()
        out = self.cells.copy()
        src = self.cells
        for di in range(-k, k + 1):
            for dj in range(-k, k + 1):
                if di or dj:
                    out |= np.roll(src, (di, dj), axis=(0, 1))
        return GridRegion(out)

    def centers(self) -> np.ndarray:
        i, j = np.nonzero(self.cells)
        return (np.stack([i, j], axis=-1) + 0.5) / self.R

    # -- portable bitmap --------------------------------------------------

    def to_pbm(self) -> str:
        """``P1`` text; the top row is the highest ``y``."""
        R = self.R
        rows = ["P1", f"{R} {R}"]
        img = self.cells.T[::-1].astype(np.uint8)
        rows += [" ".join(str(int(v)) for v in row) for row in img]
        return "\n".join(rows) + "\n"

    @classmethod
    def from_pbm(cls, text: str) -> "GridRegion":
        tokens = []
        for line in text.splitlines():
            line = line.split("#", 1)[0]
            tokens.extend(line.split())
        if not tokens or tokens[0] != "P1":
            raise ValueError("not a P1 portable bitmap")
        w, h = int(tokens[1]), int(tokens[2])
        if w != h:
            raise ValueError("bitmap must be square")
        body = "".join(tokens[3:])
        if len(body) != w * h or set(body) - {"0", "1"}:
            raise ValueError("bitmap body has the wrong size or stray characters")
        img = np.frombuffer(body.encode(), dtype=np.uint8).reshape(h, w) == ord("1")
        return cls(img[::-1].T.copy())


def cell_index(points, R: int) -> np.ndarray:
    """Integer cell indices ``(i, j)`` of the torus projections of points."""
    p = np.asarray(points, dtype=float)
    idx = np.floor(p * R).astype(np.int64) % R
    return idx


# -- union-find with translations --------------------------------------------

class OffsetUnionFind:
    """Union-find whose elements carry an integer vector relative to their root.

    ``union(a, b, d)`` records ``pos(b) = pos(a) + d``.  When ``a`` and ``b``
    are already joined the mismatch ``pos(a) + d - pos(b)`` is a cycle
    translation and is stored on the root.
    """

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.offset = [(0, 0)] * n
        self.size = [1] * n
        self.cycles: dict[int, list[tuple[int, int]]] = {}

    def find(self, a: int) -> tuple[int, tuple[int, int]]:
        path = []
        while self.parent[a] != a:
            path.append(a)
            a = self.parent[a]
        root = a
        # compress, accumulating offsets from the top of the path down
        acc = (0, 0)
        for node in reversed(path):
            ox, oy = self.offset[node]
            acc = (acc[0] + ox, acc[1] + oy)
            self.offset[node] = acc
            self.parent[node] = root
        if path:
            return root, self.offset[path[0]]
        return root, (0, 0)

    def union(self, a: int, b: int, d=(0, 0)) -> None:
        ra, oa = self.find(a)
        rb, ob = self.find(b)
        # pos(b) = pos(a) + d with pos(x) = pos(root_x) + o_x
        if ra == rb:
            net = (oa[0] + d[0] - ob[0], oa[1] + d[1] - ob[1])
            if net != (0, 0):
                self.cycles.setdefault(ra, []).append(net)
            return
        # pos(rb) = pos(ra) + oa + d - ob
        shift = (oa[0] + d[0] - ob[0], oa[1] + d[1] - ob[1])
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
            shift = (-shift[0], -shift[1])
        self.parent[rb] = ra
        self.offset[rb] = shift
        self.size[ra] += self.size[rb]
        moved = self.cycles.pop(rb, None)
        if moved:
            self.cycles.setdefault(ra, []).extend(moved)


def lattice_basis(vectors) -> list[tuple[int, int]]:
    """Hermite basis of the subgroup of ``Z^2`` spanned by ``vectors``.

    Returns ``[]``, ``[(a, b)]`` or ``[(a, b), (0, h)]`` with ``a > 0``
    (or ``a == 0 < b``) and ``0 <= b < h`` in the rank-2 case.
    """
    rows = [(int(x), int(y)) for x, y in vectors if (x, y) != (0, 0)]
    if not rows:
        return []
    pivot = None
    zero_first: list[int] = []
    for x, y in rows:
        if x == 0:
            zero_first.append(y)
            continue
        if pivot is None:
            pivot = (x, y)
            continue
        # Euclid on the first coordinate between pivot and (x, y)
        a, b = pivot, (x, y)
        while b[0] != 0:
            q = a[0] // b[0]
            a, b = b, (a[0] - q * b[0], a[1] - q * b[1])
        pivot = a
        zero_first.append(b[1])
    h = 0
    for y in zero_first:
        h = math.gcd(h, y)
    if pivot is None:
        return [(0, h)] if h else []
    if pivot[0] < 0:
        pivot = (-pivot[0], -pivot[1])
    if h == 0:
        return [pivot]
    return [(pivot[0], pivot[1] % h), (0, h)]


def primitive(v) -> tuple[int, int]:
    """Divide by the gcd and make the leading nonzero entry positive."""
    a, b = int(v[0]), int(v[1])
    g = math.gcd(a, b)
    if g == 0:
        raise ValueError("zero vector has no direction")
    a, b = a // g, b // g
    if a < 0 or (a == 0 and b < 0):
        a, b = -a, -b
    return a, b


@dataclass
class ComponentInfo:
    id: int
    rank: int
    direction: Optional[tuple[int, int]]
    basis: list
    cells: int

    @property
    def essential(self) -> bool:
        return self.rank > 0


@dataclass(eq=False)
class LiftedLabeling:
    """Per-cell component ids and lift offsets plus per-component homology.

    ``component_id`` is ``-1`` off the region.  The lift of cell ``(i, j)``
    in its component's chosen lift is the square with lower-left corner
    ``((i, j) + R * offset[i, j]) / R``; offsets are consistent modulo the
    component's subgroup ``H``.
    """

    R: int
    connectivity: int
    component_id: np.ndarray
    offset: np.ndarray
    components: list = field(default_factory=list)

    def component(self, k: int) -> ComponentInfo:
        return self.components[k]

    def cells_of(self, k: int) -> np.ndarray:
        i, j = np.nonzero(self.component_id == k)
        return np.stack([i, j], axis=-1)

    def lifted_cells(self, k: int) -> np.ndarray:
        """Lower-left corners (in cell units) of the lifted cells of component ``k``."""
        ij = self.cells_of(k)
        return ij + self.R * self.offset[ij[:, 0], ij[:, 1]]

    def mask(self, k: int) -> GridRegion:
        return GridRegion(self.component_id == k)

    @property
    def ranks(self) -> list[int]:
        return [c.rank for c in self.components]


@lru_cache(maxsize=8)
def _frame(R: int) -> np.ndarray:
    """Cells on the border of the fundamental square (corners repeated)."""
    t = np.arange(R)
    z, e = np.zeros_like(t), np.full_like(t, R - 1)
    return np.concatenate([np.stack(p, -1) for p in ((z, t), (e, t), (t, z), (t, e))])


def _boundary_links(active: np.ndarray, connectivity: int):
    """Neighbor pairs that cross the seam of the fundamental domain.

    Returns flat source indices, flat target indices and the wrap vectors.
    """
    R = active.shape[0]
    edge = _frame(R)
    edge = edge[active[edge[:, 0], edge[:, 1]]]
    src, dst, wrap = [], [], []
    for di, dj in _neighbors(connectivity):
        ii, jj = edge[:, 0] + di, edge[:, 1] + dj
        out = (ii < 0) | (ii >= R) | (jj < 0) | (jj >= R)
        ti, tj = ii % R, jj % R
        ok = out & active[ti, tj]
        src.append(edge[ok, 0] * R + edge[ok, 1])
        dst.append(ti[ok] * R + tj[ok])
        wrap.append(np.stack([ii[ok] // R, jj[ok] // R], -1))
    return np.concatenate(src), np.concatenate(dst), np.concatenate(wrap).reshape(-1, 2)


def _seam_union_find(active, patches, npatch, connectivity):
    uf = OffsetUnionFind(npatch + 1)
    src, dst, wrap = _boundary_links(active, connectivity)
    flat = patches.ravel()
    # one union per distinct (patch, patch, wrap) triple is enough
    links = np.unique(np.column_stack([flat[src], flat[dst], wrap]), axis=0)
    for a, b, wi, wj in links.tolist():
        uf.union(a, b, (wi, wj))
    return uf, np.unique(links[:, :2]).tolist()


def has_essential_component(region: GridRegion, connectivity: int = 4) -> bool:
    """True when some component of the region carries a nontrivial loop."""
    active = region.cells
    if not active.any():
        return False
    patches, npatch = ndimage.label(active, structure=_STRUCT[connectivity])
    uf, _ = _seam_union_find(active, patches, npatch, connectivity)
    return bool(uf.cycles)


def label_components(region: GridRegion, connectivity: int = 4) -> LiftedLabeling:
    """Components of a region with their lift offsets and homology rank.

    Cells inside the fundamental square are first grouped into patches
    (no seam crossings, so every patch lifts with a common offset); the
    offset union-find then runs over patches, fed by the seam-crossing links.
    """
    active = region.cells
    R = region.R
    patches, npatch = ndimage.label(active, structure=_STRUCT[connectivity])
    uf, touched = _seam_union_find(active, patches, npatch, connectivity)
    root = np.arange(npatch + 1)
    patch_off = np.zeros((npatch + 1, 2), dtype=np.int64)
    for p in touched:
        r, o = uf.find(p)
        root[p] = r
        patch_off[p] = o
    # components numbered by their smallest patch label
    roots, first = np.unique(root[1:], return_index=True)
    order = np.argsort(first)
    comp_root = roots[order]
    rank_of = np.empty(len(roots), dtype=np.int64)
    rank_of[order] = np.arange(len(roots))
    patch_comp = np.full(npatch + 1, -1, dtype=np.int64)
    patch_comp[1:] = rank_of[np.searchsorted(roots, root[1:])]
    sizes = np.bincount(patches.ravel(), minlength=npatch + 1)
    comp_cells = np.bincount(patch_comp[1:], weights=sizes[1:], minlength=len(roots)).astype(int)

    components = []
    for k, r in enumerate(comp_root.tolist()):
        cyc = uf.cycles.get(r)
        if not cyc:
            components.append(ComponentInfo(k, 0, None, [], int(comp_cells[k])))
            continue
        basis = lattice_basis(cyc)
        rank = len(basis)
        direction = primitive(basis[0]) if rank == 1 else None
        components.append(ComponentInfo(k, rank, direction, basis, int(comp_cells[k])))

    component_id = patch_comp[patches]
    offset = patch_off[patches]
    component_id[~active] = -1
    offset[~active] = 0
    return LiftedLabeling(R, connectivity, component_id, offset, components)


# -- classification ----------------------------------------------------------

INESSENTIAL = "inessential"
ANNULAR = "essential_annular"
NOT_FULLY = "essential_not_fully"
FULLY = "fully_essential"

_ORDER = {INESSENTIAL: 0, ANNULAR: 1, NOT_FULLY: 1, FULLY: 2}


@dataclass
class RegionClass:
    tag: str
    direction: Optional[tuple[int, int]] = None
    components: list = field(default_factory=list)
    complement_components: list = field(default_factory=list)

    @property
    def essential(self) -> bool:
        return self.tag != INESSENTIAL

    @property
    def level(self) -> int:
        """0 inessential, 1 essential but not fully, 2 fully essential."""
        return _ORDER[self.tag]

    def to_dict(self) -> dict:
        out = {"tag": self.tag}
        if self.direction is not None:
            out["direction"] = list(self.direction)
        return out


def region_class(region: GridRegion, connectivity: int = 4) -> RegionClass:
    """Inessential / annular / essential-not-fully / fully essential."""
    comps = label_components(region, connectivity).components if len(region) else []
    comp_conn = 8 if connectivity == 4 else 4
    rest = region.complement()
    ccomps = label_components(rest, comp_conn).components if len(rest) else []
    if all(c.rank == 0 for c in comps):
        return RegionClass(INESSENTIAL, None, comps, ccomps)
    if all(c.rank == 0 for c in ccomps):
        return RegionClass(FULLY, None, comps, ccomps)
    essential = [c for c in comps if c.rank > 0]
    if len(essential) >= 1 and all(c.rank == 1 for c in essential):
        dirs = {c.direction for c in essential}
        if len(dirs) == 1:
            return RegionClass(ANNULAR, essential[0].direction, comps, ccomps)
    return RegionClass(NOT_FULLY, None, comps, ccomps)


def fill(region: GridRegion, connectivity: int = 4) -> GridRegion:
    """Add every inessential component of the complement."""
    rest = region.complement()
    if not len(rest):
        return region.copy()
    lab = label_components(rest, 8 if connectivity == 4 else 4)
    holes = [c.id for c in lab.components if c.rank == 0]
    add = np.isin(lab.component_id, holes) if holes else np.zeros_like(region.cells)
    return GridRegion(region.cells | add)


def component_diameter(labeling: LiftedLabeling, k: int) -> float:
    """Diameter of one lift of component ``k`` as a union of closed cells.

    ``inf`` for essential components.
    """
    if labeling.components[k].rank > 0:
        return math.inf
    pts = _lifted_corners(labeling, k)
    hull = convex_hull(pts).vertices
    if len(hull) == 1:
        return 0.0
    d = hull[:, None, :] - hull[None, :, :]
    return float(np.sqrt(np.max(np.einsum("ijk,ijk->ij", d, d))))


def component_directional_diameter(labeling: LiftedLabeling, k: int, v) -> float:
    """Width of the projection of one lift of component ``k`` on ``v/|v|``."""
    v = np.asarray(v, dtype=float)
    u = v / np.hypot(*v)
    comp = labeling.components[k]
    if comp.rank == 2:
        return math.inf
    if comp.rank == 1:
        a, b = comp.direction
        # projection is bounded only along directions orthogonal to the generator
        if abs(u[0] * a + u[1] * b) > 1e-12:
            return math.inf
    pts = _lifted_corners(labeling, k)
    proj = pts @ u
    return float(proj.max() - proj.min())


def _lifted_corners(labeling: LiftedLabeling, k: int) -> np.ndarray:
    R = labeling.R
    base = labeling.lifted_cells(k).astype(float)
    corners = np.concatenate([base, base + (1, 0), base + (0, 1), base + (1, 1)]) / R
    return np.unique(corners, axis=0)


# -- independent check: brute-force unfolding ----------------------------------

def unfold_oracle(region: GridRegion, connectivity: int = 4) -> dict:
    """Essentiality of each torus component by BFS on a 3x3 unfolded copy.

    A torus component is reported essential when some connected piece of
    the unfolded (non-wrapping) ``3R x 3R`` patch holds two cells that are
    congruent mod ``R`` but lie in different copies.  Keys of the result
    are the torus components, each given as the lexicographically smallest
    cell it contains; values are booleans.
    """
    R = region.R
    act = region.cells
    big = np.tile(act, (3, 3))
    n = 3 * R
    seen = np.zeros((n, n), dtype=bool)
    essential_base: set = set()
    # torus components via plain BFS with wrapping, for the keys
    torus_label = -np.ones((R, R), dtype=np.int64)
    keys = []
    for i0 in range(R):
        for j0 in range(R):
            if not act[i0, j0] or torus_label[i0, j0] >= 0:
                continue
            lab = len(keys)
            keys.append((i0, j0))
            torus_label[i0, j0] = lab
            q = deque([(i0, j0)])
            while q:
                i, j = q.popleft()
                for di, dj in _neighbors(connectivity):
                    ii, jj = (i + di) % R, (j + dj) % R
                    if act[ii, jj] and torus_label[ii, jj] < 0:
                        torus_label[ii, jj] = lab
                        q.append((ii, jj))
    for I0 in range(n):
        for J0 in range(n):
            if not big[I0, J0] or seen[I0, J0]:
                continue
            seen[I0, J0] = True
            q = deque([(I0, J0)])
            first_copy: dict = {}
            hit = False
            while q:
                I, J = q.popleft()
                base = (I % R, J % R)
                copy = (I // R, J // R)
                prev = first_copy.setdefault(base, copy)
                if prev != copy:
                    hit = True
                for di, dj in _neighbors(connectivity):
                    II, JJ = I + di, J + dj
                    if 0 <= II < n and 0 <= JJ < n and big[II, JJ] and not seen[II, JJ]:
                        seen[II, JJ] = True
                        q.append((II, JJ))
            if hit:
                essential_base.add(int(torus_label[I0 % R, J0 % R]))
    return {keys[k]: (k in essential_base) for k in range(len(keys))}
