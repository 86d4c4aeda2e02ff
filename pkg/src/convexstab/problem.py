"""Problem instances: loss + domain + distribution, with exact risks.

The population risk of a FiniteSupport distribution is an exact weighted
sum, which is what makes the excess-risk experiments noise-free on the
evaluation side.  Continuous distributions only admit Monte Carlo
estimates and are rejected by the exact operations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .distributions import DataDistribution, FiniteSupport
from .geometry import ConvexDomain, as_point
from .losses import LossModel, RegQuadratic

RANGE_BOUND_TOL = 1e-9


@dataclass(frozen=True)
class Dataset:
    """An i.i.d. sample: features (n, d), labels (n,) for hinge data."""

    features: np.ndarray
    labels: np.ndarray | None
    seed: int

    def __post_init__(self):
        f = np.atleast_2d(np.asarray(self.features, dtype=float))
        object.__setattr__(self, "features", f)
        if f.shape[0] < 1:
            raise ValueError("dataset must contain at least one sample")
        if self.labels is not None:
            object.__setattr__(self, "labels", np.asarray(self.labels, dtype=float))

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def dim(self) -> int:
        return self.features.shape[1]


@dataclass(frozen=True)
class ProblemInstance:
    loss: LossModel
    domain: ConvexDomain
    distribution: DataDistribution
    dimension: int
    lipschitz: float
    range_bound: float  # M, bound on |l(x, w) - l(x, w*)| over the domain

    def __post_init__(self):
        if self.domain.dim != self.dimension or self.distribution.dim != self.dimension:
            raise ValueError("domain, distribution and instance dimensions must agree")
        if self.loss.labeled != self.distribution.labeled:
            raise ValueError("hinge loss requires a labeled distribution (and vice versa)")
        if not (self.lipschitz > 0 and np.isfinite(self.lipschitz)):
            raise ValueError("lipschitz must be positive and finite")
        cap = 2.0 * self.lipschitz**2 / self.loss.lam
        if self.range_bound < 0 or self.range_bound > cap + RANGE_BOUND_TOL:
            raise ValueError(
                f"range_bound M={self.range_bound} inconsistent with 2L^2/lam={cap}"
            )

    @property
    def lam(self) -> float:
        return self.loss.lam

    def datum(self, x):
        """Split a datum into (features, label); label is None when unlabeled."""
        if self.loss.labeled:
            a, y = x
            return as_point(a, self.dimension), float(y)
        return as_point(x, self.dimension), None

    def atoms(self):
        """FiniteSupport atoms as a list of data usable as probe points."""
        dist = self.distribution
        if not isinstance(dist, FiniteSupport):
            raise ValueError("atoms are only defined for FiniteSupport distributions")
        if dist.labeled:
            return [(dist.features[j], dist.labels[j]) for j in range(dist.n_atoms)]
        return [dist.features[j] for j in range(dist.n_atoms)]


def make_instance(
    loss: LossModel,
    domain: ConvexDomain,
    distribution: DataDistribution,
    lipschitz: float | None = None,
    range_bound: float | None = None,
) -> ProblemInstance:
    """Build an instance, filling in the analytic L and the default M = 2L^2/lam."""
    if lipschitz is None:
        lipschitz = loss.lipschitz(domain.max_norm(), distribution.support_radius())
    if range_bound is None:
        range_bound = 2.0 * lipschitz**2 / loss.lam
    return ProblemInstance(
        loss=loss,
        domain=domain,
        distribution=distribution,
        dimension=domain.dim,
        lipschitz=float(lipschitz),
        range_bound=float(range_bound),
    )


# ---------------------------------------------------------------------------
# operations


def loss_value(inst: ProblemInstance, x, w) -> float:
    a, y = inst.datum(x)
    return inst.loss.value(a, y, as_point(w, inst.dimension))


def subgradient(inst: ProblemInstance, x, w) -> np.ndarray:
    a, y = inst.datum(x)
    return inst.loss.subgrad(a, y, as_point(w, inst.dimension))


def empirical_risk(inst: ProblemInstance, S: Dataset, w) -> float:
    if S.n < 1:
        raise ValueError("empty dataset")
    w = as_point(w, inst.dimension)
    return float(inst.loss.risk(S.features, S.labels, w))


def population_risk(inst: ProblemInstance, w) -> float:
    """Exact population risk; FiniteSupport distributions only."""
    dist = inst.distribution
    if not isinstance(dist, FiniteSupport):
        raise ValueError(
            "exact population risk needs FiniteSupport; use estimate_population_risk"
        )
    w = as_point(w, inst.dimension)
    return float(inst.loss.risk(dist.features, dist.labels, w, weights=dist.probs))


def estimate_population_risk(
    inst: ProblemInstance, w, mc_budget: int, rng: np.random.Generator
) -> tuple[float, float]:
    """Monte Carlo estimate (mean, standard error) for continuous distributions."""
    if mc_budget < 1:
        raise ValueError("Monte Carlo budget must be >= 1")
    w = as_point(w, inst.dimension)
    X, y = inst.distribution.sample(rng, mc_budget)
    vals = inst.loss.per_sample(X, y, w)
    se = float(np.std(vals, ddof=1) / np.sqrt(mc_budget)) if mc_budget > 1 else float("inf")
    return float(np.mean(vals)), se


def population_minimizer(inst: ProblemInstance, tol: float) -> tuple[np.ndarray, float]:
    """Near-exact risk minimizer over the domain.

    RegQuadratic admits the closed form project(mean).  Other losses run
    decaying-step projected subgradient descent on the exact population
    risk for T = ceil(4 L^2 / (lam tol)) steps, which guarantees
    R(w) - R* <= tol.
    """
    dist = inst.distribution
    if not isinstance(dist, FiniteSupport):
        raise ValueError("population_minimizer needs a FiniteSupport distribution")
    if not tol > 0:
        raise ValueError("tol must be positive")
    if isinstance(inst.loss, RegQuadratic):
        w = inst.domain.project(dist.mean())
        return w, population_risk(inst, w)
    from . import solvers  # deferred: solvers builds on this module

    T = int(np.ceil(4.0 * inst.lipschitz**2 / (inst.lam * tol)))
    w = solvers.run_pgd_decaying(
        inst.loss, inst.domain, dist.features, dist.labels, dist.probs, T
    )
    return w, population_risk(inst, w)


def sample_dataset(inst: ProblemInstance, n: int, seed: int) -> Dataset:
    """Deterministic i.i.d. sample of size n for the given seed."""
    from .seeding import make_rng

    if n < 1:
        raise ValueError("n must be >= 1")
    X, y = inst.distribution.sample(make_rng(seed), n)
    return Dataset(features=X, labels=y, seed=seed)


def spot_check_lipschitz(inst: ProblemInstance, seed: int = 0, triples: int = 200) -> float:
    """Max observed |dl| / ||dw|| over sampled (x, w1, w2); must be <= declared L."""
    from .seeding import make_rng

    rng = make_rng(seed, "lipschitz-check")
    W1 = inst.domain.sample_uniform(rng, triples)
    W2 = inst.domain.sample_uniform(rng, triples)
    X, y = inst.distribution.sample(rng, triples)
    worst = 0.0
    for i in range(triples):
        v1 = inst.loss.value(X[i], None if y is None else y[i], W1[i])
        v2 = inst.loss.value(X[i], None if y is None else y[i], W2[i])
        dw = float(np.sqrt(np.sum((W1[i] - W2[i]) ** 2)))
        if dw > 1e-12:
            worst = max(worst, abs(v1 - v2) / dw)
    return worst
