"""Empirical risk minimization: exact ERM and full-batch projected
(sub)gradient descent.

Two PGD variants:

  * decaying step nu_t = 2 / (lam (t + 1)), output the weighted iterate
    average wbar_T = (2 / (T (T + 1))) sum_t t w_t, with the guarantee
    R_n(wbar_T) - min R_n <= 4 L^2 / (lam T) on every dataset;
  * constant step nu = 1 / beta for smooth losses, output the last
    iterate, with optimization error c_opt (beta L^2 / lam^2) exp(-lam T / beta).

The cores operate on dataset arrays with arbitrary leading batch
dimensions, ``X (..., n, d)``; experiment harnesses exploit this to run
many replications in one vectorized pass.  Batched rows are bitwise
identical to solving each dataset alone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import bounds
from .geometry import ConvexDomain, as_point
from .losses import LossModel, RegQuadratic
from .problem import Dataset, ProblemInstance, empirical_risk

DELTA_OPT_SLACK = 1e-10


@dataclass(frozen=True)
class SolverResult:
    w_final: np.ndarray
    t_steps: int
    delta_bar: float | None = None  # a-priori deterministic bound on delta_opt
    delta_opt: float | None = None  # measured against a reference minimum
    trajectory: list[np.ndarray] | None = None

    def __post_init__(self):
        if self.delta_opt is not None:
            if self.delta_opt < -DELTA_OPT_SLACK:
                raise ValueError(f"delta_opt = {self.delta_opt} significantly negative")
            object.__setattr__(self, "delta_opt", max(0.0, float(self.delta_opt)))
            if self.delta_bar is not None and self.delta_opt > self.delta_bar + DELTA_OPT_SLACK:
                raise ValueError(
                    f"delta_opt = {self.delta_opt} exceeds delta_bar = {self.delta_bar}"
                )


def decaying_step(lam: float, t: int) -> float:
    """Step size nu_t = 2 / (lam (t + 1))."""
    return 2.0 / (lam * (t + 1))


def run_pgd_decaying(
    loss: LossModel,
    domain: ConvexDomain,
    X: np.ndarray,
    y: np.ndarray | None,
    weights: np.ndarray | None,
    T: int,
    keep_trajectory: bool = False,
):
    """Decaying-step PGD core; returns the weighted iterate average.

    The average is maintained incrementally as
    wbar_s = (1 - 2/(s+1)) wbar_{s-1} + (2/(s+1)) w_s, which equals the
    direct weighted sum (2/(T(T+1))) sum_s s w_s.
    """
    if T < 1:
        raise ValueError("T must be >= 1")
    d = X.shape[-1]
    batch_shape = X.shape[:-2]
    lam = loss.lam
    grad = loss.batch_subgrad_fn(X, y, weights)
    w1 = domain.project(np.zeros(d))
    w = np.broadcast_to(w1, batch_shape + (d,)).copy()
    wbar = w.copy()
    traj = [w.copy()] if keep_trajectory else None
    for t in range(1, T):
        g = grad(w)
        w = domain.project(w - decaying_step(lam, t) * g)
        c = 2.0 / (t + 2)  # iterate index s = t + 1
        wbar = (1.0 - c) * wbar + c * w
        if keep_trajectory:
            traj.append(w.copy())
    if keep_trajectory:
        return wbar, traj
    return wbar


def run_pgd_constant(
    loss: LossModel,
    domain: ConvexDomain,
    X: np.ndarray,
    y: np.ndarray | None,
    weights: np.ndarray | None,
    T: int,
    keep_trajectory: bool = False,
):
    """Constant-step (1/beta) PGD core; returns the last iterate."""
    if T < 1:
        raise ValueError("T must be >= 1")
    if loss.beta is None:
        raise ValueError("constant-step PGD requires a smooth loss")
    d = X.shape[-1]
    batch_shape = X.shape[:-2]
    step = 1.0 / loss.beta
    grad = loss.batch_subgrad_fn(X, y, weights)
    w = np.broadcast_to(domain.project(np.zeros(d)), batch_shape + (d,)).copy()
    traj = [w.copy()] if keep_trajectory else None
    for _ in range(T):
        w = domain.project(w - step * grad(w))
        if keep_trajectory:
            traj.append(w.copy())
    if keep_trajectory:
        return w, traj
    return w


def _quadratic_erm(inst: ProblemInstance, X: np.ndarray) -> np.ndarray:
    """Closed-form ERM for the regularized quadratic: project(sample mean)."""
    return inst.domain.project(np.mean(X, axis=-2))


def pgd_decaying(
    inst: ProblemInstance, S: Dataset, T: int, keep_trajectory: bool = False
) -> SolverResult:
    """Decaying-step PGD on the empirical risk of S."""
    out = run_pgd_decaying(
        inst.loss, inst.domain, S.features, S.labels, None, T, keep_trajectory
    )
    w, traj = out if keep_trajectory else (out, None)
    delta_bar = bounds.pgd_opt_error_bound(inst.lipschitz, inst.lam, T)
    delta_opt = None
    if isinstance(inst.loss, RegQuadratic):
        ref = _quadratic_erm(inst, S.features)
        delta_opt = empirical_risk(inst, S, w) - empirical_risk(inst, S, ref)
    return SolverResult(
        w_final=w, t_steps=T, delta_bar=delta_bar, delta_opt=delta_opt, trajectory=traj
    )


def pgd_constant(
    inst: ProblemInstance,
    S: Dataset,
    T: int,
    c_opt: float = 1.0,
    keep_trajectory: bool = False,
) -> SolverResult:
    """Constant-step PGD for smooth losses (step 1/beta, last iterate)."""
    out = run_pgd_constant(
        inst.loss, inst.domain, S.features, S.labels, None, T, keep_trajectory
    )
    w, traj = out if keep_trajectory else (out, None)
    delta_bar = bounds.smooth_pgd_opt_error_bound(
        inst.lipschitz, inst.lam, inst.loss.beta, T, c_opt
    )
    delta_opt = None
    if isinstance(inst.loss, RegQuadratic):
        ref = _quadratic_erm(inst, S.features)
        delta_opt = empirical_risk(inst, S, w) - empirical_risk(inst, S, ref)
    return SolverResult(
        w_final=w, t_steps=T, delta_bar=delta_bar, delta_opt=delta_opt, trajectory=traj
    )


def erm_steps(inst: ProblemInstance, tol: float) -> int:
    """Step count making the decaying-PGD guarantee reach tol."""
    return int(np.ceil(4.0 * inst.lipschitz**2 / (inst.lam * tol)))


def erm_reference(inst: ProblemInstance, S: Dataset, tol: float) -> SolverResult:
    """Exact or tol-accurate empirical risk minimizer.

    RegQuadratic uses the closed form (delta_opt = 0 exactly); other
    losses run decaying PGD for T = ceil(4 L^2 / (lam tol)) steps so that
    delta_bar = 4 L^2 / (lam T) <= tol.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    if isinstance(inst.loss, RegQuadratic):
        w = _quadratic_erm(inst, S.features)
        return SolverResult(w_final=w, t_steps=0, delta_bar=0.0, delta_opt=0.0)
    T = erm_steps(inst, tol)
    w = run_pgd_decaying(inst.loss, inst.domain, S.features, S.labels, None, T)
    delta_bar = bounds.pgd_opt_error_bound(inst.lipschitz, inst.lam, T)
    return SolverResult(w_final=w, t_steps=T, delta_bar=delta_bar, delta_opt=None)


def optimization_error(inst: ProblemInstance, S: Dataset, w, tol: float) -> float:
    """R_n(w) - R_n(reference minimizer), clipped at 0, accurate to +-tol."""
    ref = erm_reference(inst, S, tol)
    w = as_point(w, inst.dimension)
    return max(0.0, empirical_risk(inst, S, w) - empirical_risk(inst, S, ref.w_final))


def erm_batch(inst: ProblemInstance, X: np.ndarray, y: np.ndarray | None, tol: float):
    """Batched ERM over datasets X (..., n, d); returns (W, delta_bar)."""
    if isinstance(inst.loss, RegQuadratic):
        return _quadratic_erm(inst, X), 0.0
    T = erm_steps(inst, tol)
    W = run_pgd_decaying(inst.loss, inst.domain, X, y, None, T)
    return W, bounds.pgd_opt_error_bound(inst.lipschitz, inst.lam, T)


def weighted_average_direct(iterates: list[np.ndarray]) -> np.ndarray:
    """(2 / (T (T + 1))) sum_t t w_t, for testing the incremental average."""
    T = len(iterates)
    acc = np.zeros_like(iterates[0])
    for t, w in enumerate(iterates, start=1):
        acc = acc + t * w
    return 2.0 / (T * (T + 1)) * acc
