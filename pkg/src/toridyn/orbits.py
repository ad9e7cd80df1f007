"""Periodic orbits realizing rational rotation vectors, and deviation probes."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import diffusion_rate
from .rotation import _endpoints, _sobol, estimate_rotation_set, grid_starts
from .torus import LiftedMap, perp, project, torus_distance

FD_STEP = 1e-6
MAX_HALVINGS = 20

GROWTH_RATIO = 1.2
GROWTH_FLOOR = 1.0
STAGNATION_RATIO = 1.02
STAGNATION_SLACK = 1e-6

BOUNDED = "bounded-looking"
GROWING = "growing"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class RealizationTarget:
    """Rotation vector ``(p1/q, p2/q)`` in reduced form."""

    p1: int
    p2: int
    q: int

    def __post_init__(self):
        if int(self.q) != self.q or self.q < 1:
            raise ValueError("q must be a positive integer")
        if math.gcd(math.gcd(int(self.p1), int(self.p2)), int(self.q)) != 1:
            raise ValueError(f"({self.p1}, {self.p2}, {self.q}) is not in reduced form")

    @classmethod
    def parse(cls, text: str) -> "RealizationTarget":
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 3:
            raise ValueError(f"target must read 'p1,p2,q', got {text!r}")
        try:
            p1, p2, q = (int(p) for p in parts)
        except ValueError:
            raise ValueError(f"target must hold three integers, got {text!r}") from None
        return cls(p1, p2, q)

    @property
    def shift(self) -> np.ndarray:
        return np.array([self.p1, self.p2], dtype=float)

    @property
    def vector(self) -> tuple:
        return (self.p1 / self.q, self.p2 / self.q)


def _g(m: LiftedMap, z: np.ndarray, t: RealizationTarget) -> np.ndarray:
    end, = _endpoints(m, z, [t.q])
    return end - z - t.shift


def verify_realization(m: LiftedMap, z, t: RealizationTarget) -> float:
    """``|F^q(z) - z - (p1, p2)|``."""
    z = np.asarray(z, dtype=float).reshape(1, 2)
    return float(np.hypot(*_g(m, z, t)[0]))


def _jacobian(m: LiftedMap, z: np.ndarray, t: RealizationTarget, h: float) -> np.ndarray:
    """Central finite-difference Jacobians of ``g`` at every row of ``z``."""
    k = len(z)
    e = np.array([[h, 0.0], [0.0, h]])
    pts = np.concatenate([z + e[0], z - e[0], z + e[1], z - e[1]])
    g = _g(m, pts, t)
    J = np.empty((k, 2, 2))
    J[:, :, 0] = (g[:k] - g[k:2 * k]) / (2 * h)
    J[:, :, 1] = (g[2 * k:3 * k] - g[3 * k:]) / (2 * h)
    return J


@dataclass
class Realization:
    """Distinct roots (projected to the unit square) with their residuals."""

    target: RealizationTarget
    roots: np.ndarray
    residuals: np.ndarray
    seeds: int
    tol: float

    @property
    def found(self) -> bool:
        return len(self.roots) > 0

    def to_dict(self) -> dict:
        return {"target": [self.target.p1, self.target.p2, self.target.q],
                "seeds": self.seeds, "tol": self.tol, "found": self.found,
                "roots": [[float(x), float(y), float(r)]
                          for (x, y), r in zip(self.roots.tolist(), self.residuals.tolist())]}


def newton(m: LiftedMap, z0, t: RealizationTarget, iters: int = 50, tol: float = 1e-10,
           h: float = FD_STEP):
    """Damped Newton on ``g(z) = F^q(z) - z - (p1, p2)`` from every row of ``z0``.

    A step is halved (up to 20 times) until the residual decreases; seeds
    whose step cannot be made to decrease it are abandoned.  Returns the
    final points and residual norms.
    """
    z = np.array(z0, dtype=float).reshape(-1, 2)
    r = np.hypot(*_g(m, z, t).T)
    active = r >= tol
    for _ in range(iters):
        idx = np.flatnonzero(active)
        if len(idx) == 0:
            break
        za = z[idx]
        ga = _g(m, za, t)
        J = _jacobian(m, za, t, h)
        det = J[:, 0, 0] * J[:, 1, 1] - J[:, 0, 1] * J[:, 1, 0]
        ok = np.abs(det) > 1e-14
        step = np.zeros_like(za)
        if ok.any():
            step[ok] = -np.linalg.solve(J[ok], ga[ok][..., None])[..., 0]
        if (~ok).any():
            # singular Jacobian: least-squares direction, then damping decides
            step[~ok] = -np.einsum("kij,kj->ki", np.linalg.pinv(J[~ok]), ga[~ok])
        lam = np.ones(len(idx))
        pending = np.ones(len(idx), dtype=bool)
        for _ in range(MAX_HALVINGS + 1):
            p = np.flatnonzero(pending)
            if len(p) == 0:
                break
            trial = za[p] + lam[p, None] * step[p]
            rt = np.hypot(*_g(m, trial, t).T)
            better = np.isfinite(rt) & (rt < r[idx[p]])
            z[idx[p[better]]] = trial[better]
            r[idx[p[better]]] = rt[better]
            pending[p[better]] = False
            lam[p[~better]] *= 0.5
        # stuck seeds stop; converged seeds stop
        active[idx[pending]] = False
        active &= r >= tol
    return z, r


def find_periodic_realizing(m: LiftedMap, t: RealizationTarget, grid: int = 16,
                            newton_iters: int = 50, tol: float = 1e-10,
                            h: float = FD_STEP) -> Realization:
    """Points ``z`` with ``F^q(z) - z = (p1, p2)``, seeded from a ``grid x grid`` lattice.

    Roots closer than ``10 tol`` on the torus are merged (first seed wins).
    """
    m.require_identity_class()
    seeds = grid_starts(grid)
    z, r = newton(m, seeds, t, newton_iters, tol, h)
    good = np.flatnonzero(np.isfinite(r) & (r < tol))
    kept: list = []
    for i in good:
        p = project(z[i])
        # fold 1 - tiny back onto 0 so printed roots read naturally
        p = np.where(p > 1.0 - 1e-12, 0.0, p)
        if all(torus_distance(p, q) > 10 * tol for q in kept):
            kept.append(p)
    roots = np.array(kept).reshape(-1, 2)
    res = np.hypot(*_g(m, roots, t).T) if len(roots) else np.zeros(0)
    return Realization(t, roots, res, len(seeds), tol)


# -- deviation probes ----------------------------------------------------------

@dataclass
class DeviationCurve:
    """Largest deviation ``|<F^n(x) - x, v_perp>|`` over the samples, per horizon."""

    direction: tuple
    horizons: list
    values: list
    verdict: str = INCONCLUSIVE
    thresholds: dict = field(default_factory=lambda: {
        "growth_ratio": GROWTH_RATIO, "growth_floor": GROWTH_FLOOR,
        "stagnation_ratio": STAGNATION_RATIO, "stagnation_slack": STAGNATION_SLACK})

    def to_dict(self) -> dict:
        return {"direction": list(self.direction), "horizons": list(self.horizons),
                "values": list(self.values), "verdict": self.verdict,
                "thresholds": dict(self.thresholds)}


def _primitive_direction(v) -> tuple:
    a, b = (int(x) for x in v)
    if (a, b) != tuple(v) or (a, b) == (0, 0) or math.gcd(a, b) != 1:
        raise ValueError(f"direction must be a primitive integer vector, got {v!r}")
    return a, b


def deviation_verdict(d_half: float, d_full: float) -> str:
    if d_half > 0 and d_full / d_half >= GROWTH_RATIO and d_full > GROWTH_FLOOR:
        return GROWING
    if d_full <= d_half * STAGNATION_RATIO + STAGNATION_SLACK:
        return BOUNDED
    return INCONCLUSIVE


def probe_starts(samples: int, seed: int = 0) -> np.ndarray:
    """Deterministic low-discrepancy start points in the unit square."""
    if samples < 1:
        raise ValueError("samples must be at least 1")
    return _sobol(2, samples, seed)


def annularity_probe(m: LiftedMap, v, samples: int, N: int, seed: int = 0,
                     threads: int = 1) -> DeviationCurve:
    """Growth of deviations transverse to ``v`` at horizons N/8, N/4, N/2, N."""
    m.require_identity_class()
    if N < 8:
        raise ValueError("N must be at least 8")
    a, b = _primitive_direction(v)
    u = np.array(perp((a, b)), dtype=float)
    u /= math.hypot(*u)
    horizons = [N // 8, N // 4, N // 2, N]
    starts = probe_starts(samples, seed)
    ends = _endpoints(m, starts, horizons, threads)
    values = [float(np.max(np.abs((e - starts) @ u))) for e in ends]
    return DeviationCurve((a, b), horizons, values, deviation_verdict(values[2], values[3]))


@dataclass
class IrrotationalVerdict:
    true_looking: bool
    hull_diameter: float
    bound: float
    contains_origin: bool
    max_displacement: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def irrotational_probe(m: LiftedMap, G: int, N: int) -> IrrotationalVerdict:
    """Does the rotation-set estimate look like ``{0}``?

    True-looking when the hull contains the origin and its diameter is at
    most ``2 D / N``, ``D`` being the largest displacement ``|F^k(z) - z|``
    seen over the grid for ``k <= N/2``.  Bounded orbits saturate ``D``, so
    their hull (of size about ``D / N``) passes; drifting orbits make ``D``
    grow with ``N`` and their hull is about twice as wide as the bound.
    """
    m.require_identity_class()
    if N < 2:
        raise ValueError("N must be at least 2")
    est = estimate_rotation_set(m, G, N)
    z0 = grid_starts(G)
    z = z0.copy()
    D = 0.0
    for _ in range(N // 2):
        z = m.eval(z)
        D = max(D, float(np.max(np.hypot(*(z - z0).T))))
    diam = est.hull.diameter()
    bound = 2.0 * D / N
    inside = est.hull.contains((0.0, 0.0), tol=1e-12)
    return IrrotationalVerdict(bool(inside and diam <= bound), diam, bound, bool(inside), D)


def strict_torality_flags(m: LiftedMap, G: int, N: int, samples: int, seed: int = 0) -> dict:
    """Heuristic flags: growing deviations along both axes and a hull with interior."""
    est = estimate_rotation_set(m, G, N)
    rate = diffusion_rate(est.hull)
    curves = {name: annularity_probe(m, v, samples, N, seed)
              for name, v in (("x", (1, 0)), ("y", (0, 1)))}
    both = all(c.verdict == GROWING for c in curves.values())
    return {
        "growing_both_directions": both,
        "positive_diffusion_rate": rate > 0,
        "strictly_toral_looking": bool(both and rate > 0),
        "diffusion_rate": rate,
        "deviations": {k: c.to_dict() for k, c in curves.items()},
    }
