"""Strongly convex, Lipschitz loss families.

Three concrete losses, each lam-strongly convex in w:

  RegQuadratic        l(x, w) = (lam/2) ||w - x||^2          (lam-smooth)
  RegGeometricMedian  l(x, w) = ||w - x|| + (lam/2) ||w||^2  (non-smooth)
  RegHinge            l((a, y), w) = max(0, 1 - y <a, w>) + (lam/2) ||w||^2

All array operations accept leading batch dimensions: datasets are
``X (..., n, d)`` (plus labels ``y (..., n)`` for the hinge) and decision
vectors are ``W (..., d)``.  Reductions run along the sample/coordinate
axes only, so batched results are bitwise identical to per-row results.

Subgradients use a fixed selection at kinks (zero vector for the median
at w == x, zero hinge part at margin exactly 1): the minimal-norm valid
choice, keeping the solvers deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np


def _wmean(values: np.ndarray, weights: np.ndarray | None, axis: int) -> np.ndarray:
    """Mean (or prob-weighted sum) over the sample axis."""
    if weights is None:
        return np.mean(values, axis=axis)
    w = np.asarray(weights, dtype=float)
    if values.ndim == w.ndim + 1:
        w = w[..., None]  # broadcast over trailing coordinate axis
    return np.sum(values * w, axis=axis)


class LossModel:
    """Base class; subclasses define the three batched primitives."""

    lam: float
    labeled = False

    @property
    def beta(self) -> float | None:
        """Gradient-Lipschitz (smoothness) constant, None when non-smooth."""
        return None

    @property
    def kind(self) -> str:
        raise NotImplementedError

    def per_sample(self, X, y, W) -> np.ndarray:
        """Per-sample loss values, shape (..., n)."""
        raise NotImplementedError

    def batch_subgrad_fn(self, X, y, weights=None) -> Callable[[np.ndarray], np.ndarray]:
        """Return W -> full-batch subgradient of the (weighted) empirical risk."""
        raise NotImplementedError

    def lipschitz(self, domain_radius: float, support_radius: float) -> float:
        """Valid Lipschitz constant over domain x support."""
        raise NotImplementedError

    def risk(self, X, y, W, weights=None) -> np.ndarray:
        """Average (or prob-weighted) loss over the sample axis, shape (...,)."""
        return _wmean(self.per_sample(X, y, W), weights, axis=-1)

    # datum-level conveniences -------------------------------------------
    def value(self, x, y, w) -> float:
        X = np.asarray(x, dtype=float)[None, :]
        yy = None if y is None else np.asarray([y], dtype=float)
        return float(self.per_sample(X, yy, np.asarray(w, dtype=float))[0])

    def subgrad(self, x, y, w) -> np.ndarray:
        X = np.asarray(x, dtype=float)[None, :]
        yy = None if y is None else np.asarray([y], dtype=float)
        return self.batch_subgrad_fn(X, yy)(np.asarray(w, dtype=float))

    def _validate(self):
        if not (self.lam > 0 and np.isfinite(self.lam)):
            raise ValueError("lam must be positive and finite")


@dataclass(frozen=True)
class RegQuadratic(LossModel):
    lam: float

    def __post_init__(self):
        self._validate()

    @property
    def beta(self) -> float:
        return self.lam

    @property
    def kind(self) -> str:
        return "quadratic"

    def per_sample(self, X, y, W):
        diff = W[..., None, :] - X
        return 0.5 * self.lam * np.sum(diff * diff, axis=-1)

    def batch_subgrad_fn(self, X, y, weights=None):
        # mean_i lam (w - x_i) = lam (w - xbar): O(d) per evaluation
        xbar = _wmean(X, weights, axis=-2)
        lam = self.lam

        def grad(W):
            return lam * (W - xbar)

        return grad

    def lipschitz(self, domain_radius, support_radius):
        return self.lam * (domain_radius + support_radius)


@dataclass(frozen=True)
class RegGeometricMedian(LossModel):
    lam: float

    def __post_init__(self):
        self._validate()

    @property
    def kind(self) -> str:
        return "geometric_median"

    def per_sample(self, X, y, W):
        diff = W[..., None, :] - X
        dist = np.sqrt(np.sum(diff * diff, axis=-1))
        reg = 0.5 * self.lam * np.sum(W * W, axis=-1)
        return dist + reg[..., None]

    def batch_subgrad_fn(self, X, y, weights=None):
        lam = self.lam

        def grad(W):
            diff = W[..., None, :] - X
            dist = np.sqrt(np.sum(diff * diff, axis=-1))
            pos = dist > 0
            unit = diff / np.where(pos, dist, 1.0)[..., None]
            unit = np.where(pos[..., None], unit, 0.0)
            return _wmean(unit, weights, axis=-2) + lam * W

        return grad

    def lipschitz(self, domain_radius, support_radius):
        return 1.0 + self.lam * domain_radius


@dataclass(frozen=True)
class RegHinge(LossModel):
    lam: float
    labeled = True

    def __post_init__(self):
        self._validate()

    @property
    def kind(self) -> str:
        return "hinge"

    def per_sample(self, X, y, W):
        if y is None:
            raise ValueError("hinge loss requires labeled data")
        margins = np.asarray(y, dtype=float) * np.sum(X * W[..., None, :], axis=-1)
        reg = 0.5 * self.lam * np.sum(W * W, axis=-1)
        return np.maximum(0.0, 1.0 - margins) + reg[..., None]

    def batch_subgrad_fn(self, X, y, weights=None):
        if y is None:
            raise ValueError("hinge loss requires labeled data")
        lam = self.lam
        ya = np.asarray(y, dtype=float)

        def grad(W):
            margins = ya * np.sum(X * W[..., None, :], axis=-1)
            active = margins < 1.0  # margin exactly 1: zero hinge part
            contrib = np.where(active[..., None], -ya[..., None] * X, 0.0)
            return _wmean(contrib, weights, axis=-2) + lam * W

        return grad

    def lipschitz(self, domain_radius, support_radius):
        return support_radius + self.lam * domain_radius


LOSS_KINDS = {
    "quadratic": RegQuadratic,
    "geometric_median": RegGeometricMedian,
    "hinge": RegHinge,
}
