"""Data distributions with bounded support.

FiniteSupport is the canonical experiment distribution: population risk,
population minimizers and excess risks are then exact finite sums.  The
two continuous families exist for Monte Carlo probing; both are bounded,
which keeps the declared Lipschitz constants valid.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import as_point

PROB_TOL = 1e-12


class DataDistribution:
    labeled = False

    @property
    def dim(self) -> int:
        raise NotImplementedError

    @property
    def is_finite(self) -> bool:
        return False

    def support_radius(self) -> float:
        """Bound on the norm of a datum's feature vector."""
        raise NotImplementedError

    def sample(self, rng: np.random.Generator, n: int):
        """Draw n points; returns (features (n, d), labels (n,) or None)."""
        raise NotImplementedError


@dataclass(frozen=True)
class FiniteSupport(DataDistribution):
    """Atoms (x_j, p_j); labels y_j in {-1, +1} only for the hinge loss."""

    features: np.ndarray  # (k, d)
    probs: np.ndarray  # (k,)
    labels: np.ndarray | None = None  # (k,)

    def __post_init__(self):
        f = np.atleast_2d(np.asarray(self.features, dtype=float))
        p = np.asarray(self.probs, dtype=float)
        object.__setattr__(self, "features", f)
        object.__setattr__(self, "probs", p)
        if f.ndim != 2 or not np.all(np.isfinite(f)):
            raise ValueError("atom features must be a finite (k, d) array")
        if p.shape != (f.shape[0],):
            raise ValueError("probs must have one entry per atom")
        if np.any(p < 0) or abs(float(np.sum(p)) - 1.0) > PROB_TOL:
            raise ValueError("probs must be nonnegative and sum to 1")
        if self.labels is not None:
            lab = np.asarray(self.labels, dtype=float)
            object.__setattr__(self, "labels", lab)
            if lab.shape != (f.shape[0],) or not np.all(np.isin(lab, (-1.0, 1.0))):
                raise ValueError("labels must be +-1, one per atom")

    @property
    def labeled(self) -> bool:
        return self.labels is not None

    @property
    def dim(self) -> int:
        return self.features.shape[1]

    @property
    def n_atoms(self) -> int:
        return self.features.shape[0]

    @property
    def is_finite(self) -> bool:
        return True

    def support_radius(self) -> float:
        return float(np.max(np.sqrt(np.sum(self.features**2, axis=1))))

    def mean(self) -> np.ndarray:
        return np.sum(self.probs[:, None] * self.features, axis=0)

    def cumulative(self) -> np.ndarray:
        return np.cumsum(self.probs)

    def sample_indices(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """Inverse-CDF sampling over the atoms."""
        u = rng.random(n)
        idx = np.searchsorted(self.cumulative(), u, side="right")
        return np.minimum(idx, self.n_atoms - 1)

    def sample(self, rng, n):
        idx = self.sample_indices(rng, n)
        lab = None if self.labels is None else self.labels[idx]
        return self.features[idx], lab


@dataclass(frozen=True)
class UniformBall(DataDistribution):
    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        if not (self.radius > 0 and np.isfinite(self.radius)):
            raise ValueError("radius must be positive and finite")

    @property
    def dim(self) -> int:
        return self.center.shape[0]

    def support_radius(self) -> float:
        return float(np.sqrt(np.sum(self.center**2))) + self.radius

    def sample(self, rng, n):
        d = self.dim
        u = rng.standard_normal((n, d))
        nrm = np.sqrt(np.sum(u * u, axis=-1, keepdims=True))
        nrm = np.where(nrm > 0, nrm, 1.0)
        r = self.radius * rng.random((n, 1)) ** (1.0 / d)
        return self.center + u / nrm * r, None


@dataclass(frozen=True)
class TruncatedGaussian(DataDistribution):
    """Gaussian conditioned on ||x - mean|| <= radius (rejection sampling)."""

    mean: np.ndarray
    cov: np.ndarray
    radius: float

    def __post_init__(self):
        m = as_point(self.mean)
        c = np.atleast_2d(np.asarray(self.cov, dtype=float))
        object.__setattr__(self, "mean", m)
        object.__setattr__(self, "cov", c)
        if c.shape != (m.shape[0], m.shape[0]):
            raise ValueError("cov must be (d, d)")
        if not (self.radius > 0 and np.isfinite(self.radius)):
            raise ValueError("truncation radius must be positive and finite")
        object.__setattr__(self, "_chol", np.linalg.cholesky(c))

    @property
    def dim(self) -> int:
        return self.mean.shape[0]

    def support_radius(self) -> float:
        return float(np.sqrt(np.sum(self.mean**2))) + self.radius

    def sample(self, rng, n):
        d = self.dim
        out = np.empty((n, d))
        filled = 0
        while filled < n:
            m = max(n - filled, 16)
            z = rng.standard_normal((m, d)) @ self._chol.T
            keep = np.sqrt(np.sum(z * z, axis=-1)) <= self.radius
            z = z[keep]
            take = min(z.shape[0], n - filled)
            out[filled : filled + take] = self.mean + z[:take]
            filled += take
        return out, None
