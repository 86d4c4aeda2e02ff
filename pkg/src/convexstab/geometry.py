"""Closed convex feasible sets with Euclidean projection.

Three families are supported: L2 balls, axis-aligned boxes and the
probability simplex.  All projections accept arrays with arbitrary
leading batch dimensions, ``(..., d)``, and are written with plain
elementwise/axis reductions so that a batched call is bitwise identical
to projecting each row on its own.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def as_point(x, dim: int | None = None) -> np.ndarray:
    """Validate and return a finite float vector."""
    p = np.asarray(x, dtype=float)
    if p.ndim == 0:
        p = p.reshape(1)
    if p.ndim != 1:
        raise ValueError(f"point must be a vector, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise ValueError("point has non-finite entries")
    if dim is not None and p.shape[0] != dim:
        raise ValueError(f"dimension mismatch: expected {dim}, got {p.shape[0]}")
    return p


class ConvexDomain:
    """Base class for closed convex sets with a projection operator."""

    @property
    def dim(self) -> int:
        raise NotImplementedError

    @property
    def diameter(self) -> float:
        raise NotImplementedError

    def max_norm(self) -> float:
        """sup_{w in set} ||w||, used for Lipschitz-constant bookkeeping."""
        raise NotImplementedError

    def project(self, y: np.ndarray) -> np.ndarray:
        """Euclidean-nearest point of the set, batched over leading axes."""
        raise NotImplementedError

    def contains(self, w: np.ndarray, tol: float = 1e-9) -> bool:
        w = np.asarray(w, dtype=float)
        p = self.project(w)
        return bool(np.all(np.sqrt(np.sum((p - w) ** 2, axis=-1)) <= tol))

    def sample_uniform(self, rng: np.random.Generator, m: int) -> np.ndarray:
        """m points drawn uniformly from the set, shape (m, d)."""
        raise NotImplementedError


@dataclass(frozen=True)
class L2Ball(ConvexDomain):
    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        if not (self.radius > 0 and np.isfinite(self.radius)):
            raise ValueError("radius must be positive and finite")

    @property
    def dim(self) -> int:
        return self.center.shape[0]

    @property
    def diameter(self) -> float:
        return 2.0 * self.radius

    def max_norm(self) -> float:
        return float(np.sqrt(np.sum(self.center**2))) + self.radius

    def project(self, y: np.ndarray) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        diff = y - self.center
        nrm = np.sqrt(np.sum(diff * diff, axis=-1, keepdims=True))
        outside = nrm > self.radius
        # scale is exactly 1.0 for interior points so projection is a no-op
        scale = np.where(outside, self.radius / np.where(outside, nrm, 1.0), 1.0)
        return self.center + diff * scale

    def sample_uniform(self, rng: np.random.Generator, m: int) -> np.ndarray:
        d = self.dim
        u = rng.standard_normal((m, d))
        nrm = np.sqrt(np.sum(u * u, axis=-1, keepdims=True))
        nrm = np.where(nrm > 0, nrm, 1.0)
        r = self.radius * rng.random((m, 1)) ** (1.0 / d)
        return self.center + u / nrm * r


@dataclass(frozen=True)
class Box(ConvexDomain):
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "lower", as_point(self.lower))
        object.__setattr__(self, "upper", as_point(self.upper, self.lower.shape[0]))
        if not np.all(self.upper >= self.lower):
            raise ValueError("box upper bounds must dominate lower bounds")

    @property
    def dim(self) -> int:
        return self.lower.shape[0]

    @property
    def diameter(self) -> float:
        return float(np.sqrt(np.sum((self.upper - self.lower) ** 2)))

    def max_norm(self) -> float:
        return float(np.sqrt(np.sum(np.maximum(self.lower**2, self.upper**2))))

    def project(self, y: np.ndarray) -> np.ndarray:
        return np.clip(np.asarray(y, dtype=float), self.lower, self.upper)

    def sample_uniform(self, rng: np.random.Generator, m: int) -> np.ndarray:
        return self.lower + (self.upper - self.lower) * rng.random((m, self.dim))


@dataclass(frozen=True)
class Simplex(ConvexDomain):
    """Probability simplex {w : w_i >= 0, sum w_i = 1}."""

    dimension: int

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("simplex dimension must be >= 1")

    @property
    def dim(self) -> int:
        return self.dimension

    @property
    def diameter(self) -> float:
        return float(np.sqrt(2.0)) if self.dimension > 1 else 0.0

    def max_norm(self) -> float:
        return 1.0

    def project(self, y: np.ndarray) -> np.ndarray:
        # sort-and-threshold: the projection is max(y - theta, 0) where
        # theta makes the positive part sum to one
        y = np.asarray(y, dtype=float)
        d = self.dimension
        if y.shape[-1] != d:
            raise ValueError(f"dimension mismatch: expected {d}, got {y.shape[-1]}")
        u = np.sort(y, axis=-1)[..., ::-1]
        css = np.cumsum(u, axis=-1) - 1.0
        ks = np.arange(1, d + 1, dtype=float)
        cond = u - css / ks > 0  # entry 0 is always True
        rho = d - 1 - np.argmax(cond[..., ::-1], axis=-1)
        theta = np.take_along_axis(css, rho[..., None], axis=-1) / (rho[..., None] + 1.0)
        return np.maximum(y - theta, 0.0)

    def sample_uniform(self, rng: np.random.Generator, m: int) -> np.ndarray:
        return rng.dirichlet(np.ones(self.dimension), size=m)


def project(dom: ConvexDomain, y) -> np.ndarray:
    """Euclidean projection of y onto the domain."""
    return dom.project(np.asarray(y, dtype=float))
