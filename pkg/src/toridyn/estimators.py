"""scikit-learn style wrappers around the functional API.

Each estimator takes a map spec string (or a ``LiftedMap``) plus the
numerical parameters as constructor arguments, so ``get_params``,
``set_params`` and ``clone`` behave as usual.  Fitted state lives in
trailing-underscore attributes.  The functional API remains the primary
interface; these classes only adapt it.
"""

from __future__ import annotations

from typing import Optional, Union

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .geometry import convex_hull, diffusion_rate
from .orbit_regions import ESSENTIAL, INESSENTIAL, UNDECIDED, classify_torus
from .orbits import RealizationTarget, find_periodic_realizing
from .regions import cell_index
from .rotation import _endpoints, grid_starts
from .torus import LiftedMap, map_from_spec

MapLike = Union[str, LiftedMap]


def _resolve(lift: MapLike) -> LiftedMap:
    m = map_from_spec(lift) if isinstance(lift, str) else lift
    m.require_identity_class()
    return m


def _check_points(X) -> np.ndarray:
    Z = check_array(X, dtype=np.float64)
    if Z.shape[1] != 2:
        raise ValueError(f"expected points with 2 coordinates, got {Z.shape[1]}")
    return Z


class BirkhoffTransformer(TransformerMixin, BaseEstimator):
    """Map start points to their finite-time rotation vectors ``(F^N(z) - z) / N``.

    Stateless: ``fit`` only validates the map and records the input width.
    """

    def __init__(self, lift: MapLike = "identity", N: int = 1000, threads: int = 1):
        self.lift = lift
        self.N = N
        self.threads = threads

    def fit(self, X=None, y=None):
        self.map_ = _resolve(self.lift)
        if self.N < 1:
            raise ValueError("N must be at least 1")
        self.n_features_in_ = 2
        return self

    def transform(self, X) -> np.ndarray:
        check_is_fitted(self, "map_")
        Z = _check_points(X)
        end, = _endpoints(self.map_, Z, [self.N], self.threads)
        return (end - Z) / self.N


class RotationSetEstimator(BaseEstimator):
    """Convex hull of average displacements, refined batch by batch.

    ``fit(X)`` uses the start points ``X`` (or the ``G x G`` grid when ``X``
    is None); ``partial_fit`` adds more starts to the running hull.
    """

    def __init__(self, lift: MapLike = "identity", N: int = 1000, G: int = 16,
                 threads: int = 1):
        self.lift = lift
        self.N = N
        self.G = G
        self.threads = threads

    def _values(self, X) -> np.ndarray:
        Z = grid_starts(self.G) if X is None else _check_points(X)
        end, = _endpoints(self.map_, Z, [self.N], self.threads)
        return (end - Z) / self.N

    def fit(self, X=None, y=None):
        self.__dict__.pop("hull_", None)
        return self.partial_fit(X)

    def partial_fit(self, X=None, y=None):
        if "hull_" not in self.__dict__:
            self.map_ = _resolve(self.lift)
            if self.N < 1:
                raise ValueError("N must be at least 1")
            prev, self.n_samples_seen_ = np.empty((0, 2)), 0
        else:
            # hull vertices suffice to carry the running estimate forward
            prev = self.hull_.vertices
        v = self._values(X)
        self.hull_ = convex_hull(np.vstack([prev, v]))
        self.n_samples_seen_ += len(v)
        self.diffusion_rate_ = diffusion_rate(self.hull_)
        return self

    def score(self, X=None, y=None) -> float:
        """Diffusion rate of the fitted hull."""
        check_is_fitted(self, "hull_")
        return self.diffusion_rate_


class EssentialityClassifier(ClassifierMixin, BaseEstimator):
    """Ess/Ine verdicts on an ``R x R`` grid; ``predict`` looks points up.

    Labels are ``'essential'``, ``'inessential'`` and ``'undecided'``.
    """

    def __init__(self, lift: MapLike = "identity", eps: Optional[float] = None,
                 N: int = 300, R: int = 128, model: str = "shadow"):
        self.lift = lift
        self.eps = eps
        self.N = N
        self.R = R
        self.model = model

    def fit(self, X=None, y=None):
        m = _resolve(self.lift)
        self.classification_ = classify_torus(m, self.eps, self.N, self.R, model=self.model)
        self.classes_ = np.array([ESSENTIAL, INESSENTIAL, UNDECIDED])
        return self

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "classification_")
        Z = _check_points(X)
        ij = cell_index(Z, self.R)
        v = self.classification_.verdicts[ij[:, 0], ij[:, 1]]
        return np.where(v == 1, ESSENTIAL, np.where(v == 0, INESSENTIAL, UNDECIDED))


class PeriodicOrbitFinder(BaseEstimator):
    """Grid-seeded Newton search for points realizing a rational rotation vector."""

    def __init__(self, lift: MapLike = "identity", target: str = "0,0,1", grid: int = 16,
                 tol: float = 1e-10, newton_iters: int = 50):
        self.lift = lift
        self.target = target
        self.grid = grid
        self.tol = tol
        self.newton_iters = newton_iters

    def fit(self, X=None, y=None):
        m = _resolve(self.lift)
        t = self.target if isinstance(self.target, RealizationTarget) \
            else RealizationTarget.parse(self.target)
        self.realization_ = find_periodic_realizing(m, t, self.grid, self.newton_iters, self.tol)
        self.roots_ = self.realization_.roots
        self.residuals_ = self.realization_.residuals
        return self
