"""Algorithm specifications shared by the experiment harnesses and the CLI.

An AlgorithmSpec names one of the learning rules under study and its
parameters.  ``solve_batch`` runs it on a stack of datasets at once;
batching is what keeps the replication loops fast, and batched rows are
bitwise identical to one-at-a-time solves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .. import bounds, solvers
from ..problem import ProblemInstance

ALGORITHM_KINDS = ("erm", "pgd_decaying", "pgd_constant", "constant")
STEP_RULES = ("n_squared", "log_n")


@dataclass(frozen=True)
class AlgorithmSpec:
    """One of: erm | pgd_decaying | pgd_constant | constant.

    steps: fixed iteration count for the PGD variants, or None with
    step_rule set ("n_squared" resolves T = ceil(4 L^2 n^2 / lam) so the
    decaying-PGD error bound is <= 1/n^2; "log_n" resolves
    T = ceil((beta/lam) log(c_opt beta L^2 n^2 / lam^2)) so the smooth
    bound is <= 1/n^2).
    """

    kind: str
    steps: int | None = None
    step_rule: str | None = None
    tol: float = 1e-9  # reference accuracy for non-closed-form ERM
    w0: np.ndarray | None = None  # constant algorithm output
    c_opt: float = 1.0

    def __post_init__(self):
        if self.kind not in ALGORITHM_KINDS:
            raise ValueError(f"unknown algorithm kind {self.kind!r}")
        if self.kind in ("pgd_decaying", "pgd_constant"):
            if (self.steps is None) == (self.step_rule is None):
                raise ValueError("PGD needs exactly one of steps or step_rule")
            if self.step_rule is not None and self.step_rule not in STEP_RULES:
                raise ValueError(f"unknown step rule {self.step_rule!r}")
            if self.steps is not None and self.steps < 1:
                raise ValueError("steps must be >= 1")
        if self.kind == "constant" and self.w0 is None:
            raise ValueError("constant algorithm needs w0")
        if self.tol <= 0:
            raise ValueError("tol must be positive")

    def describe(self) -> dict:
        out = {"kind": self.kind}
        if self.steps is not None:
            out["steps"] = int(self.steps)
        if self.step_rule is not None:
            out["step_rule"] = self.step_rule
        if self.kind == "erm":
            out["tol"] = self.tol
        if self.kind == "pgd_constant":
            out["c_opt"] = self.c_opt
        if self.w0 is not None:
            out["w0"] = [float(v) for v in np.atleast_1d(self.w0)]
        return out


def resolve_steps(spec: AlgorithmSpec, inst: ProblemInstance, n: int) -> int:
    """Concrete iteration count for sample size n."""
    if spec.steps is not None:
        return spec.steps
    L, lam = inst.lipschitz, inst.lam
    if spec.step_rule == "n_squared":
        return int(math.ceil(4.0 * L**2 * n**2 / lam))
    beta = inst.loss.beta
    if beta is None:
        raise ValueError("log_n step rule requires a smooth loss")
    target = spec.c_opt * beta * L**2 * n**2 / lam**2
    return max(1, int(math.ceil(beta / lam * math.log(max(target, math.e)))))


def solve_batch(
    spec: AlgorithmSpec,
    inst: ProblemInstance,
    X: np.ndarray,
    y: np.ndarray | None,
    n: int,
) -> tuple[np.ndarray, float]:
    """Run the algorithm on datasets X (..., n, d); returns (W, delta_bar)."""
    if spec.kind == "erm":
        return solvers.erm_batch(inst, X, y, spec.tol)
    if spec.kind == "pgd_decaying":
        T = resolve_steps(spec, inst, n)
        W = solvers.run_pgd_decaying(inst.loss, inst.domain, X, y, None, T)
        return W, bounds.pgd_opt_error_bound(inst.lipschitz, inst.lam, T)
    if spec.kind == "pgd_constant":
        T = resolve_steps(spec, inst, n)
        W = solvers.run_pgd_constant(inst.loss, inst.domain, X, y, None, T)
        delta_bar = bounds.smooth_pgd_opt_error_bound(
            inst.lipschitz, inst.lam, inst.loss.beta, T, spec.c_opt
        )
        return W, delta_bar
    w0 = inst.domain.project(np.asarray(spec.w0, dtype=float))
    W = np.broadcast_to(w0, X.shape[:-2] + (inst.dimension,)).copy()
    return W, float("inf")


def theoretical_gamma(spec: AlgorithmSpec, inst: ProblemInstance, n: int) -> float:
    """Proved uniform-stability constant of the algorithm at sample size n."""
    L, lam = inst.lipschitz, inst.lam
    if spec.kind == "constant":
        return 0.0
    if spec.kind == "pgd_constant":
        return bounds.smooth_pgd_gamma(L, lam, n)
    if spec.kind == "pgd_decaying":
        T = resolve_steps(spec, inst, n)
        delta_bar = bounds.pgd_opt_error_bound(L, lam, T)
        return bounds.erm_stability_gamma(L, lam, n, delta_bar)
    # ERM: exact for the closed-form quadratic, tol-approximate otherwise
    from ..losses import RegQuadratic

    delta_bar = 0.0 if isinstance(inst.loss, RegQuadratic) else spec.tol
    return bounds.erm_stability_gamma(L, lam, n, delta_bar)
