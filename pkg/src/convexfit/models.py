"""Domain types: datasets, max-affine models, ensembles, anchor models.

All models are immutable after construction (backing arrays are marked
read-only), so concurrent evaluation is safe.  Evaluation of an ensemble
sums member predictions in member-index order, which makes the average
bit-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import DataError, DimensionError

__all__ = [
    "Dataset",
    "Hyperplane",
    "MaxAffineModel",
    "EnsembleModel",
    "LseModel",
    "Model",
    "evaluate",
    "subgradient",
]

LSE_FEASIBILITY_TOL = 1e-6


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.float64, order="C")
    a.setflags(write=False)
    return a


class Dataset:
    """n observations of a p-dimensional covariate with scalar response."""

    def __init__(self, x, y):
        x = np.asarray(x, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        if x.ndim != 2:
            raise DataError(f"covariates must be a 2-d array, got shape {x.shape}")
        if y.ndim != 1:
            raise DataError(f"responses must be a 1-d array, got shape {y.shape}")
        n, p = x.shape
        if n < 1 or p < 1:
            raise DataError(f"need n >= 1 and p >= 1, got n={n}, p={p}")
        if y.shape[0] != n:
            raise DataError(f"{n} covariate rows but {y.shape[0]} responses")
        if not np.isfinite(x).all():
            i, j = np.argwhere(~np.isfinite(x))[0]
            raise DataError(f"non-finite covariate at row {i}, column {j}")
        if not np.isfinite(y).all():
            i = int(np.flatnonzero(~np.isfinite(y))[0])
            raise DataError(f"non-finite response at row {i}")
        self.x = _frozen(x)
        self.y = _frozen(y)

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def p(self) -> int:
        return self.x.shape[1]

    def subset(self, indices) -> "Dataset":
        return Dataset(self.x[indices], self.y[indices])

    def with_responses(self, y) -> "Dataset":
        return Dataset(self.x, y)

    def __repr__(self):
        return f"Dataset(n={self.n}, p={self.p})"


@dataclass(frozen=True)
class Hyperplane:
    """Affine piece x -> alpha + beta @ x."""

    alpha: float
    beta: np.ndarray

    def __post_init__(self):
        beta = _frozen(np.atleast_1d(self.beta))
        if beta.ndim != 1:
            raise DataError("beta must be a 1-d vector")
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "alpha", float(self.alpha))
        if not np.isfinite(self.alpha) or not np.isfinite(beta).all():
            raise DataError("hyperplane coefficients must be finite")


class MaxAffineModel:
    """Pointwise maximum of K affine pieces; convex by construction."""

    kind = "max_affine"

    def __init__(self, hyperplanes: Sequence[Hyperplane]):
        if len(hyperplanes) < 1:
            raise DataError("a max-affine model needs at least one hyperplane")
        p = hyperplanes[0].beta.shape[0]
        for i, h in enumerate(hyperplanes):
            if h.beta.shape[0] != p:
                raise DimensionError(
                    f"hyperplane {i} has dimension {h.beta.shape[0]}, expected {p}"
                )
        self._alpha = _frozen([h.alpha for h in hyperplanes])
        self._beta = _frozen(np.stack([h.beta for h in hyperplanes]))
        self.p = p

    @classmethod
    def from_planes(cls, planes: np.ndarray) -> "MaxAffineModel":
        """Build from a (K, p+1) array whose rows are [alpha, beta...]."""
        planes = np.asarray(planes, dtype=np.float64)
        return cls([Hyperplane(row[0], row[1:]) for row in planes])

    @property
    def hyperplanes(self) -> tuple:
        return tuple(
            Hyperplane(float(a), b) for a, b in zip(self._alpha, self._beta)
        )

    @property
    def k(self) -> int:
        return self._alpha.shape[0]

    def planes(self) -> np.ndarray:
        """(K, p+1) array of [alpha, beta...] rows (read-only view copy)."""
        return np.concatenate([self._alpha[:, None], self._beta], axis=1)

    def piece_values(self, x: np.ndarray) -> np.ndarray:
        return self._alpha + self._beta @ x

    def evaluate(self, x) -> float:
        x = _check_point(x, self.p)
        return float(np.max(self.piece_values(x)))

    def subgradient(self, x) -> np.ndarray:
        """Slope of the active piece; ties go to the lowest piece index."""
        x = _check_point(x, self.p)
        k = int(np.argmax(self.piece_values(x)))
        return self._beta[k].copy()

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = _check_matrix(X, self.p)
        return (X @ self._beta.T + self._alpha).max(axis=1)

    def __repr__(self):
        return f"MaxAffineModel(k={self.k}, p={self.p})"


class EnsembleModel:
    """Equal-weight average of max-affine members; still convex."""

    kind = "ensemble"

    def __init__(self, members: Sequence[MaxAffineModel]):
        if len(members) < 1:
            raise DataError("an ensemble needs at least one member")
        p = members[0].p
        for i, m in enumerate(members):
            if not isinstance(m, MaxAffineModel):
                raise DataError(f"member {i} is not a max-affine model")
            if m.p != p:
                raise DimensionError(
                    f"member {i} has dimension {m.p}, expected {p}"
                )
        self.members = tuple(members)
        self.p = p

    @property
    def m(self) -> int:
        return len(self.members)

    def evaluate(self, x) -> float:
        x = _check_point(x, self.p)
        total = 0.0
        for member in self.members:
            total += member.evaluate(x)
        return total / self.m

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = _check_matrix(X, self.p)
        total = np.zeros(X.shape[0])
        for member in self.members:
            total += member.predict(X)
        return total / self.m

    def __repr__(self):
        return f"EnsembleModel(m={self.m}, p={self.p})"


class LseModel:
    """Anchor-based convex model: max over supporting planes at the
    training points, f(x) = max_i yhat_i + g_i @ (x - x_i).

    Construction verifies the pairwise supporting-plane feasibility
    yhat_j >= yhat_i + g_i @ (x_j - x_i) - tol on all n^2 pairs.
    """

    kind = "lse"

    def __init__(self, x, yhat, g, feasibility_tol: float = LSE_FEASIBILITY_TOL):
        x = np.asarray(x, dtype=np.float64)
        yhat = np.asarray(yhat, dtype=np.float64)
        g = np.asarray(g, dtype=np.float64)
        if x.ndim != 2 or g.shape != x.shape or yhat.shape != (x.shape[0],):
            raise DataError(
                f"inconsistent anchor shapes: x{x.shape}, yhat{yhat.shape}, g{g.shape}"
            )
        if not (np.isfinite(x).all() and np.isfinite(yhat).all() and np.isfinite(g).all()):
            raise DataError("anchors must be finite")
        # supporting-plane value of anchor i at anchor j
        vals = yhat[:, None] + g @ x.T - (g * x).sum(axis=1)[:, None]
        worst = float((vals - yhat[None, :]).max())
        if worst > feasibility_tol:
            i, j = np.unravel_index(
                int(np.argmax(vals - yhat[None, :])), vals.shape
            )
            raise DataError(
                f"anchor constraints violated by {worst:.3e} at pair ({i}, {j}); "
                f"tolerance is {feasibility_tol:.1e}"
            )
        self.x = _frozen(x)
        self.yhat = _frozen(yhat)
        self.g = _frozen(g)
        self.p = x.shape[1]

    @property
    def n_anchors(self) -> int:
        return self.x.shape[0]

    def evaluate(self, x) -> float:
        x = _check_point(x, self.p)
        vals = self.yhat + ((x[None, :] - self.x) * self.g).sum(axis=1)
        return float(vals.max())

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = _check_matrix(X, self.p)
        offsets = self.yhat - (self.g * self.x).sum(axis=1)
        return (X @ self.g.T + offsets).max(axis=1)

    def as_max_affine(self) -> MaxAffineModel:
        """Equivalent max-affine form: alpha_i = yhat_i - g_i @ x_i."""
        offsets = self.yhat - (self.g * self.x).sum(axis=1)
        planes = np.concatenate([offsets[:, None], self.g], axis=1)
        return MaxAffineModel.from_planes(planes)

    def __repr__(self):
        return f"LseModel(n_anchors={self.n_anchors}, p={self.p})"


Model = Union[MaxAffineModel, EnsembleModel, LseModel]


def _check_point(x, p: int) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise DimensionError(f"expected a 1-d point, got shape {x.shape}")
    if x.shape[0] != p:
        raise DimensionError(f"point has dimension {x.shape[0]}, model expects {p}")
    if not np.isfinite(x).all():
        raise DataError("evaluation point contains non-finite entries")
    return x


def _check_matrix(X, p: int) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != p:
        raise DimensionError(f"expected shape (n, {p}), got {X.shape}")
    if not np.isfinite(X).all():
        raise DataError("evaluation points contain non-finite entries")
    return X


def evaluate(model: Model, x) -> float:
    """Value of a fitted model at a single point."""
    return model.evaluate(x)


def subgradient(model: MaxAffineModel, x) -> np.ndarray:
    """Subgradient of a max-affine model at x (argmax slope, lowest index
    on ties)."""
    if not isinstance(model, MaxAffineModel):
        raise TypeError("subgradient is defined for max-affine models")
    return model.subgradient(x)
