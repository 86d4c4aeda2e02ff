"""Exact verification of the Bernstein condition on FiniteSupport instances.

For w sampled uniformly from the domain, computes the exact variance-type
moment V(w) = E (l(w, X) - l(w*, X))^2 and the exact excess risk, and
checks the ratio against 2 L^2 / lam together with the two inequalities
that produce it: V(w) <= L^2 ||w - w*||^2 and
R(w) - R(w*) >= (lam/2) ||w - w*||^2.

The minimizer is computed to accuracy ``minimizer_tol``; the strong
convexity check carries the induced slack lam * r * sqrt(2 tol / lam) + tol
since the base point may be off by sqrt(2 tol / lam).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..bounds import bernstein_constant
from ..distributions import FiniteSupport
from ..losses import RegQuadratic
from ..problem import ProblemInstance, population_minimizer
from ..seeding import make_rng

EXCESS_GUARD = 1e-12
CHAIN_TOL = 1e-9


@dataclass(frozen=True)
class BernsteinReport:
    bernstein_b: float  # 2 L^2 / lam
    max_ratio: float  # max V(w) / excess(w) over sampled w
    argmax_w: np.ndarray
    n_checked: int
    n_excluded: int  # excess below the division guard
    variance_chain_ok: bool  # V(w) <= L^2 ||w - w*||^2
    curvature_chain_ok: bool  # excess >= (lam/2) ||w - w*||^2 - slack
    w_star: np.ndarray
    risk_star: float
    minimizer_tol: float

    @property
    def satisfied(self) -> bool:
        return self.max_ratio <= self.bernstein_b * (1.0 + 1e-6)


def verify_bernstein(
    inst: ProblemInstance,
    n_w_samples: int,
    seed: int = 0,
    minimizer_tol: float = 1e-4,
) -> BernsteinReport:
    dist = inst.distribution
    if not isinstance(dist, FiniteSupport):
        raise ValueError("verify_bernstein needs a FiniteSupport distribution")
    if n_w_samples < 1:
        raise ValueError("n_w_samples must be >= 1")

    tol = 0.0 if isinstance(inst.loss, RegQuadratic) else minimizer_tol
    w_star, risk_star = population_minimizer(inst, max(minimizer_tol, 1e-15))

    rng = make_rng(seed, "bernstein")
    W = inst.domain.sample_uniform(rng, n_w_samples)

    # per-atom losses at the sampled w's and at w*
    vals = inst.loss.per_sample(dist.features, dist.labels, W)  # (m, k)
    vals_star = inst.loss.per_sample(dist.features, dist.labels, w_star)  # (k,)
    probs = dist.probs
    V = np.sum(probs * (vals - vals_star) ** 2, axis=-1)
    risks = np.sum(probs * vals, axis=-1)
    excess = risks - risk_star
    dist_sq = np.sum((W - w_star) ** 2, axis=-1)

    keep = excess >= EXCESS_GUARD
    n_excluded = int(np.sum(~keep))
    if not np.any(keep):
        raise ValueError("all sampled w were excluded by the excess-risk guard")
    ratios = V[keep] / excess[keep]
    imax = int(np.argmax(ratios))
    max_ratio = float(ratios[imax])
    argmax_w = W[keep][imax]

    L, lam = inst.lipschitz, inst.lam
    variance_ok = bool(np.all(V <= L**2 * dist_sq + CHAIN_TOL))
    r = np.sqrt(dist_sq)
    slack = lam * r * np.sqrt(2.0 * tol / lam) + tol if tol > 0 else 0.0
    curvature_ok = bool(np.all(excess >= 0.5 * lam * dist_sq - slack - CHAIN_TOL))

    return BernsteinReport(
        bernstein_b=bernstein_constant(L, lam),
        max_ratio=max_ratio,
        argmax_w=argmax_w,
        n_checked=int(np.sum(keep)),
        n_excluded=n_excluded,
        variance_chain_ok=variance_ok,
        curvature_chain_ok=curvature_ok,
        w_star=w_star,
        risk_star=risk_star,
        minimizer_tol=tol,
    )
