"""Points of the plane and torus, and torus maps presented by their lifts.

A torus map is carried around as a :class:`LiftedMap`: a vectorised
function on the covering plane together with the integer matrix ``L``
satisfying ``F(z + v) = F(z) + L v``.  Everything that talks about
rotation vectors needs ``L`` to be the identity.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

TWO_PI = 2.0 * math.pi

IDENTITY = np.eye(2, dtype=np.int64)
QUARTER_TURN = np.array([[0, 1], [-1, 0]], dtype=np.int64)
DEHN_TWIST = np.array([[1, 1], [0, 1]], dtype=np.int64)

EQUIVARIANCE_TOL = 1e-9
INVERSE_TOL = 1e-7

ArrayFn = Callable[[np.ndarray], np.ndarray]


class LinearPartError(ValueError):
    """Raised when an operation needs a map homotopic to the identity."""


class MapSpecError(ValueError):
    """Unknown map name, bad parameter count or malformed spec text."""


def perp(v):
    """Return ``v`` rotated a quarter turn counterclockwise: (a, b) -> (-b, a)."""
    a, b = v
    return (-b, a)


def project(z) -> np.ndarray:
    """Componentwise fractional part, the covering projection onto [0, 1)^2."""
    z = np.asarray(z, dtype=float)
    p = z - np.floor(z)
    # x - floor(x) can round up to exactly 1.0 for tiny negative x
    return np.where(p >= 1.0, 0.0, p)


def torus_distance(a, b) -> np.ndarray:
    """Distance on the flat torus between (arrays of) points."""
    d = np.asarray(a, dtype=float) - np.asarray(b, dtype=float)
    d = d - np.round(d)
    return np.hypot(d[..., 0], d[..., 1])


@dataclass(frozen=True, eq=False)
class LiftedMap:
    """A torus map given by a lift ``F`` to the plane.

    ``eval`` and ``inverse_eval`` take arrays of shape ``(..., 2)`` and
    return arrays of the same shape.  They must be pure; a map is never
    mutated after construction, so sharing one between threads is fine.
    """

    eval: ArrayFn
    linear_part: np.ndarray = field(default_factory=lambda: IDENTITY.copy())
    label: str = "map"
    inverse_eval: Optional[ArrayFn] = None

    def __call__(self, z):
        return self.eval(np.asarray(z, dtype=float))

    @property
    def homotopic_to_identity(self) -> bool:
        return bool(np.array_equal(self.linear_part, IDENTITY))

    @property
    def has_inverse(self) -> bool:
        return self.inverse_eval is not None

    @property
    def inverse(self) -> "LiftedMap":
        if self.inverse_eval is None:
            raise ValueError(f"{self.label} has no inverse")
        lin = np.rint(np.linalg.inv(self.linear_part)).astype(np.int64)
        return LiftedMap(self.inverse_eval, lin, f"inverse({self.label})", self.eval)

    def require_identity_class(self) -> None:
        if not self.homotopic_to_identity:
            raise LinearPartError(
                f"{self.label} has linear part {self.linear_part.tolist()}, "
                "operation requires a map homotopic to the identity")


def compose(outer: LiftedMap, inner: LiftedMap, label: Optional[str] = None) -> LiftedMap:
    """The lift ``outer o inner``."""
    f, g = outer.eval, inner.eval
    inv = None
    if outer.inverse_eval is not None and inner.inverse_eval is not None:
        fi, gi = outer.inverse_eval, inner.inverse_eval
        inv = lambda z: gi(fi(z))  # noqa: E731
    return LiftedMap(lambda z: f(g(z)), outer.linear_part @ inner.linear_part,
                     label or f"{outer.label}*{inner.label}", inv)


def power(m: LiftedMap, n: int) -> LiftedMap:
    """The ``n``-th iterate of ``m`` as a map of its own (``n >= 1``)."""
    if n < 1:
        raise ValueError("power needs n >= 1")
    f, finv = m.eval, m.inverse_eval

    def fn(z):
        for _ in range(n):
            z = f(z)
        return z

    inv = None
    if finv is not None:
        def inv(z):
            for _ in range(n):
                z = finv(z)
            return z

    return LiftedMap(fn, np.linalg.matrix_power(m.linear_part, n),
                     f"{m.label}^{n}", inv)


def translate_lift(m: LiftedMap, v) -> LiftedMap:
    """Another lift of the same torus map: ``z -> F(z) + v`` for integer ``v``."""
    v = np.asarray(v, dtype=float)
    f, finv = m.eval, m.inverse_eval
    inv = None if finv is None else (lambda z: finv(z - v))
    return LiftedMap(lambda z: f(z) + v, m.linear_part, f"{m.label}+{v.tolist()}", inv)


# -- built-in maps ---------------------------------------------------------

def _identity() -> LiftedMap:
    return LiftedMap(lambda z: z.copy(), IDENTITY.copy(), "identity()", lambda z: z.copy())


def _translation(a: float, b: float) -> LiftedMap:
    alpha = np.array([a, b], dtype=float)
    return LiftedMap(lambda z: z + alpha, IDENTITY.copy(),
                     f"translation({a!r},{b!r})", lambda z: z - alpha)


def _standard(K: float) -> LiftedMap:
    # Two-kick form: a vertical kick then a horizontal kick, both shears of the
    # form x -> x + periodic(y), so the lift commutes with all of Z^2.
    a = K / TWO_PI

    def fwd(z):
        x, y = z[..., 0], z[..., 1]
        y1 = y + a * np.sin(TWO_PI * x)
        x1 = x + a * np.sin(TWO_PI * y1)
        return np.stack([x1, y1], axis=-1)

    def inv(z):
        x1, y1 = z[..., 0], z[..., 1]
        x = x1 - a * np.sin(TWO_PI * y1)
        y = y1 - a * np.sin(TWO_PI * x)
        return np.stack([x, y], axis=-1)

    return LiftedMap(fwd, IDENTITY.copy(), f"standard({K!r})", inv)


def _chirikov(K: float) -> LiftedMap:
    a = K / TWO_PI

    def fwd(z):
        x, y = z[..., 0], z[..., 1]
        y1 = y + a * np.sin(TWO_PI * x)
        return np.stack([x + y1, y1], axis=-1)

    def inv(z):
        x1, y1 = z[..., 0], z[..., 1]
        x = x1 - y1
        return np.stack([x, y1 - a * np.sin(TWO_PI * x)], axis=-1)

    return LiftedMap(fwd, DEHN_TWIST.copy(), f"chirikov({K!r})", inv)


def _zaslavsky_generator(K: float, c: float) -> LiftedMap:
    def fwd(z):
        x, y = z[..., 0], z[..., 1]
        return np.stack([y, -x - K * np.sin(TWO_PI * y - c)], axis=-1)

    def inv(z):
        u, w = z[..., 0], z[..., 1]
        return np.stack([-w - K * np.sin(TWO_PI * u - c), u], axis=-1)

    return LiftedMap(fwd, QUARTER_TURN.copy(), f"zaslavsky_generator({K!r},{c!r})", inv)


def _zaslavsky(K: float, c: float) -> LiftedMap:
    gen = _zaslavsky_generator(K, c)
    m = power(gen, 4)
    return LiftedMap(m.eval, IDENTITY.copy(), f"zaslavsky({K!r},{c!r})", m.inverse_eval)


def _skew(beta: float) -> LiftedMap:
    def fwd(z):
        x, y = z[..., 0], z[..., 1]
        return np.stack([x + 0.5, y + beta * np.cos(TWO_PI * x)], axis=-1)

    def inv(z):
        x1, y1 = z[..., 0], z[..., 1]
        x = x1 - 0.5
        return np.stack([x, y1 - beta * np.cos(TWO_PI * x)], axis=-1)

    return LiftedMap(fwd, IDENTITY.copy(), f"skew({beta!r})", inv)


def twist_angle(r, r0: float, angle: float):
    """Rotation angle of ``disk_twist`` at distance ``r`` from its center.

    Rigid rotation by ``angle`` on the inner half disk, then a linear
    decay to zero at ``r0``.
    """
    return angle * np.clip(2.0 * (1.0 - np.asarray(r, dtype=float) / r0), 0.0, 1.0)


def _disk_twist(cx: float, cy: float, r0: float, angle: float) -> LiftedMap:
    if not 0.0 < r0 < 0.5:
        raise MapSpecError("disk_twist needs 0 < r0 < 1/2 so lattice copies stay disjoint")
    center = np.array([cx, cy], dtype=float)

    def rotate(z, sign):
        z = np.asarray(z, dtype=float)
        near = center + np.round(z - center)
        d = z - near
        r = np.hypot(d[..., 0], d[..., 1])
        th = sign * twist_angle(r, r0, angle)
        c, s = np.cos(th), np.sin(th)
        rx = c * d[..., 0] - s * d[..., 1]
        ry = s * d[..., 0] + c * d[..., 1]
        out = near + np.stack([rx, ry], axis=-1)
        return np.where((r < r0)[..., None], out, z)

    return LiftedMap(lambda z: rotate(z, 1.0), IDENTITY.copy(),
                     f"disk_twist({cx!r},{cy!r},{r0!r},{angle!r})",
                     lambda z: rotate(z, -1.0))


_BUILTINS = {
    "identity": (_identity, 0),
    "translation": (_translation, 2),
    "standard": (_standard, 1),
    "chirikov": (_chirikov, 1),
    "zaslavsky": (_zaslavsky, 2),
    "zaslavsky_generator": (_zaslavsky_generator, 2),
    "skew": (_skew, 1),
    "disk_twist": (_disk_twist, 4),
}


def map_names() -> list[str]:
    return sorted(_BUILTINS)


def make_map(name: str, params: Sequence[float] = ()) -> LiftedMap:
    """Build one of the built-in maps.

    ``translation(a, b)``, ``standard(K)``, ``chirikov(K)``,
    ``zaslavsky(K, c)``, ``zaslavsky_generator(K, c)``, ``skew(beta)``,
    ``disk_twist(cx, cy, r0, angle)`` and ``identity()``.
    """
    try:
        factory, arity = _BUILTINS[name]
    except KeyError:
        raise MapSpecError(f"unknown map {name!r}; known: {', '.join(map_names())}") from None
    params = [float(p) for p in params]
    if len(params) != arity:
        raise MapSpecError(f"{name} takes {arity} parameter(s), got {len(params)}")
    if not all(math.isfinite(p) for p in params):
        raise MapSpecError("map parameters must be finite")
    return factory(*params)


_NUMBER = r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_SPEC_RE = re.compile(
    rf"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*\(\s*((?:{_NUMBER})(?:\s*,\s*{_NUMBER})*)?\s*\)\s*$")


def parse_map_spec(text: str) -> tuple[str, list[float]]:
    """Split ``"zaslavsky(0.19,1.69)"`` into ``("zaslavsky", [0.19, 1.69])``."""
    m = _SPEC_RE.match(text)
    if m is None:
        raise MapSpecError(f"malformed map spec {text!r}; expected name(p1,p2,...)")
    args = m.group(2)
    params = [float(t) for t in args.split(",")] if args else []
    return m.group(1), params


def map_from_spec(text: str) -> LiftedMap:
    return make_map(*parse_map_spec(text))


# -- orbits ----------------------------------------------------------------

def iterate_lift(m: LiftedMap, z, n: int) -> np.ndarray:
    """Return ``z, F(z), ..., F^n(z)`` stacked along a new leading axis.

    ``z`` may be a single point or a batch of shape ``(k, 2)``; negative
    ``n`` iterates the inverse.
    """
    z = np.asarray(z, dtype=float)
    if n < 0:
        if m.inverse_eval is None:
            raise ValueError(f"{m.label} has no inverse; cannot iterate backwards")
        step = m.inverse_eval
    else:
        step = m.eval
    out = np.empty((abs(n) + 1,) + z.shape)
    out[0] = z
    for k in range(abs(n)):
        out[k + 1] = step(out[k])
    return out


def iterate_end(m: LiftedMap, z, n: int) -> np.ndarray:
    """Only the endpoint ``F^n(z)``; keeps memory flat for long horizons."""
    z = np.array(z, dtype=float)
    step = m.eval
    if n < 0:
        if m.inverse_eval is None:
            raise ValueError(f"{m.label} has no inverse; cannot iterate backwards")
        step = m.inverse_eval
    for _ in range(abs(n)):
        z = step(z)
    return z


def displacement(m: LiftedMap, z, n: int) -> np.ndarray:
    """``F^n(z) - z`` (not divided by ``n``)."""
    m.require_identity_class()
    if n < 1:
        raise ValueError("displacement needs n >= 1")
    z = np.asarray(z, dtype=float)
    return iterate_end(m, z, n) - z


def max_step(m: LiftedMap, z) -> float:
    """Largest one-step displacement ``|F(z) - z|`` over the given points."""
    z = np.asarray(z, dtype=float).reshape(-1, 2)
    d = m.eval(z) - z
    return float(np.max(np.hypot(d[:, 0], d[:, 1])))


def equivariance_error(m: LiftedMap, n: int = 100, seed: int = 0, span: int = 3) -> float:
    """Worst ``|F(z+v) - F(z) - L v|`` over random ``z`` and integer ``v``."""
    rng = np.random.default_rng(seed)
    z = rng.uniform(0.0, 1.0, size=(n, 2))
    v = rng.integers(-span, span + 1, size=(n, 2)).astype(float)
    err = m.eval(z + v) - m.eval(z) - v @ m.linear_part.T.astype(float)
    return float(np.max(np.abs(err)))


def inverse_error(m: LiftedMap, n: int = 100, seed: int = 0) -> float:
    """Worst ``|F(F^{-1}(z)) - z|`` over random points; 0 when no inverse."""
    if m.inverse_eval is None:
        return 0.0
    rng = np.random.default_rng(seed)
    z = rng.uniform(-2.0, 3.0, size=(n, 2))
    return float(np.max(np.abs(m.eval(m.inverse_eval(z)) - z)))
