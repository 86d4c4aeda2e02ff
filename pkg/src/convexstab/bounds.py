"""Closed-form right-hand sides of the generalization, excess-risk and
concentration inequalities, with every unspecified absolute constant
exposed as a parameter (default 1).

Conventions: natural logarithm throughout; log n always means
max(log n, 1).  Sample sizes and step counts are accepted as reals so
that inversion identities (e.g. T = 4 L^2 n^2 / lam giving a 1/n^2
optimization error) evaluate exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


def log_n(n: float) -> float:
    """max(log n, 1)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return max(math.log(n), 1.0)


def _check_delta(delta: float) -> float:
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    return math.log(1.0 / delta)


@dataclass(frozen=True)
class BoundQuery:
    """Inputs shared by the generalization / excess-risk evaluators."""

    gamma: float  # uniform stability
    M: float  # loss range bound
    B: float  # Bernstein constant
    n: float  # sample size
    delta: float  # failure probability
    eta: float = 1.0  # trade-off parameter
    delta_opt: float = 0.0
    e_delta_opt: float = 0.0  # expected optimization error
    c: float = 1.0  # absolute-constant stand-in

    def __post_init__(self):
        if self.gamma < 0 or self.M < 0 or self.B < 0:
            raise ValueError("gamma, M, B must be nonnegative")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not 0.0 < self.delta < 1.0:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")
        if self.eta <= 0:
            raise ValueError("eta must be positive")
        if self.delta_opt < 0 or self.e_delta_opt < 0:
            raise ValueError("optimization errors must be nonnegative")
        if self.c <= 0:
            raise ValueError("c must be positive")


def gen_bound_rhs(q: BoundQuery) -> float:
    """Stability error + sampling error:
    c (gamma log n log(1/delta) + M sqrt(log(1/delta) / n))."""
    ld = _check_delta(q.delta)
    return q.c * (q.gamma * log_n(q.n) * ld + q.M * math.sqrt(ld / q.n))


def thm1_rhs(q: BoundQuery) -> float:
    """Excess-risk bound under the Bernstein condition:
    delta_opt + eta E delta_opt
      + c (1 + 1/eta) (gamma log n + (M + B)/n) log(1/delta)."""
    ld = _check_delta(q.delta)
    if q.eta <= 0:
        raise ValueError("eta must be positive")
    stab = q.gamma * log_n(q.n) + (q.M + q.B) / q.n
    return q.delta_opt + q.eta * q.e_delta_opt + q.c * (1.0 + 1.0 / q.eta) * stab * ld


def thm2_rhs(q: BoundQuery, r_n: float) -> float:
    """Variance-type bound on the population risk given realized empirical
    risk r_n: (1 + eta) r_n + c (1 + 1/eta) (gamma log n + M/n) log(1/delta)."""
    if r_n < 0:
        raise ValueError("empirical risk must be nonnegative")
    ld = _check_delta(q.delta)
    if q.eta <= 0:
        raise ValueError("eta must be positive")
    stab = q.gamma * log_n(q.n) + q.M / q.n
    return (1.0 + q.eta) * r_n + q.c * (1.0 + 1.0 / q.eta) * stab * ld


def prop1_rhs(
    L: float, lam: float, n: float, delta: float, delta_bar: float, c: float = 1.0
) -> float:
    """Excess risk of a delta_bar-approximate empirical minimizer:
    c [delta_bar + (L^2/(lam n) + sqrt(L^2 delta_bar / lam)) log n log(1/delta)]."""
    if L <= 0 or lam <= 0:
        raise ValueError("L and lam must be positive")
    if delta_bar < 0:
        raise ValueError("delta_bar must be nonnegative")
    ld = _check_delta(delta)
    term = L**2 / (lam * n) + math.sqrt(L**2 * delta_bar / lam)
    return c * (delta_bar + term * log_n(n) * ld)


def erm_stability_gamma(L: float, lam: float, n: float, delta_bar: float = 0.0) -> float:
    """Uniform stability of a delta_bar-approximate empirical minimizer:
    4 L^2 / (lam n) + sqrt(8 L^2 delta_bar / lam)."""
    if L <= 0 or lam <= 0:
        raise ValueError("L and lam must be positive")
    if n < 1:
        raise ValueError("n must be >= 1")
    if delta_bar < 0:
        raise ValueError("delta_bar must be nonnegative")
    return 4.0 * L**2 / (lam * n) + math.sqrt(8.0 * L**2 * delta_bar / lam)


def smooth_pgd_gamma(L: float, lam: float, n: float) -> float:
    """Uniform stability of constant-step PGD on smooth losses: 2 L^2 / (lam n)."""
    if L <= 0 or lam <= 0:
        raise ValueError("L and lam must be positive")
    if n < 1:
        raise ValueError("n must be >= 1")
    return 2.0 * L**2 / (lam * n)


def bernstein_constant(L: float, lam: float) -> float:
    """Bernstein constant for lam-strongly convex, L-Lipschitz losses: 2 L^2 / lam."""
    if L <= 0 or lam <= 0:
        raise ValueError("L and lam must be positive")
    return 2.0 * L**2 / lam


def pgd_opt_error_bound(L: float, lam: float, T: float) -> float:
    """Optimization error of decaying-step PGD's averaged iterate: 4 L^2 / (lam T)."""
    if L <= 0 or lam <= 0:
        raise ValueError("L and lam must be positive")
    if T < 1:
        raise ValueError("T must be >= 1")
    return 4.0 * L**2 / (lam * T)


def smooth_pgd_opt_error_bound(
    L: float, lam: float, beta: float, T: float, c_opt: float = 1.0
) -> float:
    """Optimization error of constant-step PGD on smooth losses:
    c_opt (beta L^2 / lam^2) exp(-lam T / beta)."""
    if L <= 0 or lam <= 0:
        raise ValueError("L and lam must be positive")
    if beta < lam:
        raise ValueError("beta must be >= lam")
    if T < 0:
        raise ValueError("T must be nonnegative")
    if c_opt <= 0:
        raise ValueError("c_opt must be positive")
    return c_opt * beta * L**2 / lam**2 * math.exp(-lam * T / beta)


def moment_to_whp(a: float, b: float, delta: float, C: float = 1.0) -> float:
    """High-probability level implied by ||Z||_p <= a sqrt(p) + b p:
    C (a sqrt(log(1/delta)) + b log(1/delta))."""
    if a < 0 or b < 0:
        raise ValueError("a and b must be nonnegative")
    ld = _check_delta(delta)
    return C * (a * math.sqrt(ld) + b * ld)


def bernstein_moment_rhs(var_sum: float, p: float, M: float) -> float:
    """Moment Bernstein inequality for bounded centered sums:
    6 sqrt(var_sum p) + 4 p M."""
    if p < 2:
        raise ValueError("p must be >= 2")
    if var_sum < 0 or M < 0:
        raise ValueError("var_sum and M must be nonnegative")
    return 6.0 * math.sqrt(var_sum * p) + 4.0 * p * M


def selfbounding_tail_bound(a: float, b: float, e_f: float, t: float) -> float:
    """Lower-tail bound for (a, b)-weakly self-bounded f:
    Pr(E f >= f + t) <= exp(-t^2 / (2 a E f + 2 b))."""
    if a < 0 or b < 0:
        raise ValueError("a and b must be nonnegative")
    if t <= 0:
        raise ValueError("t must be positive")
    denom = 2.0 * a * e_f + 2.0 * b
    if denom <= 0:
        raise ValueError("degenerate case: a * e_f + b must be positive")
    return math.exp(-t * t / denom)
