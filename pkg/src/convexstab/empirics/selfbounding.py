"""Monte Carlo validation of the lower-tail bound for weakly self-bounded
functions.

A case supplies a nonnegative function f of n independent coordinates
together with coordinate-wise majorants f_i >= f satisfying
sum_i (f - f_i)^2 <= a f + b on every input.  The harness verifies that
inequality on every draw, estimates E f, and compares the empirical
lower-tail frequency Pr(Ef - f >= t) against exp(-t^2 / (2 a Ef + 2 b)).

Two built-in cases:

  * the squared-loss construction: f = E'(l(X', w_n))^2 with w_n the
    closed-form quadratic ERM, f_i the exact max over replacements of the
    i-th sample by any atom, which is (8 n g^2, 2 n g^4)-weakly
    self-bounded for the ERM stability constant g = 4 L^2 / (lam n);
  * an additive case f(x) = sum_j x_j with x_j uniform on [0, 1] and
    f_i replacing x_i by 1.  Note (a, b) = (2, 0) fails at x = 0, where
    sum_i (f - f_i)^2 = n and f = 0; the shipped pair is (2, n), which
    holds deterministically since (1 - x)^2 <= 2 x + 1 on [0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..distributions import FiniteSupport
from ..errors import InvariantViolation
from ..losses import RegQuadratic
from ..problem import ProblemInstance
from ..seeding import derive_seed, make_rng
from .parallel import chunk_ranges, map_chunks

GAP_TOL = 1e-12
WSB_TOL = 1e-9


@dataclass(frozen=True)
class SelfBoundingCase:
    description: str
    a: float
    b: float
    n: int
    draw_one: Callable[[np.random.Generator], np.ndarray]  # raw coordinates, (n,)
    evaluate: Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]]  # (m,n)->(f,(m,n) f_i)

    def __post_init__(self):
        if self.a < 0 or self.b < 0:
            raise ValueError("a and b must be nonnegative")
        if self.n < 1:
            raise ValueError("n must be >= 1")


@dataclass(frozen=True)
class SelfBoundingReport:
    description: str
    a: float
    b: float
    n: int
    replications: int
    e_f_hat: float
    t_grid: np.ndarray
    tail_freq: np.ndarray  # empirical Pr(Ef_hat - f >= t)
    tail_bound: np.ndarray  # exp(-t^2 / (2 a Ef_hat + 2 b))
    tail_se: np.ndarray  # Monte Carlo standard error per t
    invariant_holds_all_draws: bool
    f_values: np.ndarray = field(default=None, repr=False)

    @property
    def tail_ok(self) -> np.ndarray:
        return self.tail_freq <= self.tail_bound + 3.0 * self.tail_se


def uniform_sum_case(n: int) -> SelfBoundingCase:
    """f(x) = sum x_j, x_j ~ U[0, 1]; f_i replaces x_i by its sup 1."""

    def draw_one(rng):
        return rng.random(n)

    def evaluate(X):
        f = np.sum(X, axis=-1)
        f_i = f[:, None] - X + 1.0
        return f, f_i

    return SelfBoundingCase(
        description=f"uniform-sum(n={n})", a=2.0, b=float(n), n=n,
        draw_one=draw_one, evaluate=evaluate,
    )


def erm_squared_loss_case(inst: ProblemInstance, n: int) -> SelfBoundingCase:
    """f = E'(l(X', w_n))^2 for the closed-form quadratic ERM.

    f_i is computed as the exact max of f over replacement of the i-th
    sample by each support atom (the sup over the support).
    """
    if not isinstance(inst.loss, RegQuadratic):
        raise ValueError("squared-loss case uses the closed-form quadratic ERM")
    dist = inst.distribution
    if not isinstance(dist, FiniteSupport):
        raise ValueError("squared-loss case needs a FiniteSupport distribution")
    gamma = 4.0 * inst.lipschitz**2 / (inst.lam * n)
    atoms, probs = dist.features, dist.probs
    loss, domain = inst.loss, inst.domain

    def draw_one(rng):
        return dist.sample_indices(rng, n).astype(float)

    def second_moment(W):
        vals = loss.per_sample(atoms, None, W)  # (..., k)
        return np.sum(probs * vals * vals, axis=-1)

    def evaluate(idx):
        X = atoms[idx.astype(int)]  # (m, n, d)
        mean = np.mean(X, axis=-2)  # (m, d)
        f = second_moment(domain.project(mean))
        f_i = np.full((X.shape[0], n), -np.inf)
        for r in range(atoms.shape[0]):
            shifted = mean[:, None, :] + (atoms[r] - X) / n  # (m, n, d)
            f_i = np.maximum(f_i, second_moment(domain.project(shifted)))
        return f, f_i

    return SelfBoundingCase(
        description=f"erm-squared-loss(n={n})",
        a=8.0 * n * gamma**2,
        b=2.0 * n * gamma**4,
        n=n,
        draw_one=draw_one,
        evaluate=evaluate,
    )


def _selfbounding_chunk(payload):
    case, seed, start, stop = payload
    rows = np.empty((stop - start, case.n))
    for j, rep in enumerate(range(start, stop)):
        rows[j] = case.draw_one(make_rng(seed, "selfbounding", rep))
    f, f_i = case.evaluate(rows)
    gap_ok = f_i >= f[:, None] - GAP_TOL
    wsb = np.sum((f[:, None] - f_i) ** 2, axis=-1)
    wsb_ok = wsb <= case.a * f + case.b + WSB_TOL
    bad = ~(np.all(gap_ok, axis=-1) & wsb_ok & (f >= -GAP_TOL))
    first_bad = int(np.argmax(bad)) + start if np.any(bad) else -1
    return f, first_bad


def selfbounding_mc_validation(
    case: SelfBoundingCase,
    reps: int,
    t_grid: np.ndarray | None = None,
    seed: int = 0,
    parallelism: int = 1,
    assert_tail: bool = True,
) -> SelfBoundingReport:
    if reps < 2:
        raise ValueError("reps must be >= 2")
    payloads = [
        (case, seed, r.start, r.stop) for r in chunk_ranges(reps, parallelism)
    ]
    results = map_chunks(_selfbounding_chunk, payloads, parallelism)
    for _, first_bad in results:
        if first_bad >= 0:
            raise InvariantViolation(
                f"weak self-bounding inequality violated for {case.description}",
                replication=first_bad,
                seed=derive_seed(seed, "selfbounding", first_bad),
            )
    f = np.concatenate([r[0] for r in results])
    e_f_hat = float(np.mean(f))

    if t_grid is None:
        scale = max(float(np.std(f)), 1e-12)
        t_grid = 4.0 * scale * np.arange(1, 11) / 10.0
    t_grid = np.asarray(t_grid, dtype=float)
    if np.any(t_grid <= 0):
        raise ValueError("t_grid entries must be positive")

    from ..bounds import selfbounding_tail_bound

    freq = np.array([float(np.mean(e_f_hat - f >= t)) for t in t_grid])
    bound = np.array(
        [selfbounding_tail_bound(case.a, case.b, e_f_hat, t) for t in t_grid]
    )
    # Bernoulli standard error at the more conservative of the two rates
    p_ref = np.clip(np.maximum(freq, bound), 1.0 / reps, 0.5)
    se = np.sqrt(p_ref * (1.0 - p_ref) / reps)

    report = SelfBoundingReport(
        description=case.description,
        a=case.a,
        b=case.b,
        n=case.n,
        replications=reps,
        e_f_hat=e_f_hat,
        t_grid=t_grid,
        tail_freq=freq,
        tail_bound=bound,
        tail_se=se,
        invariant_holds_all_draws=True,
        f_values=f,
    )
    if assert_tail and not bool(np.all(report.tail_ok)):
        k = int(np.argmin(report.tail_ok))
        raise InvariantViolation(
            f"lower-tail frequency {freq[k]:.3g} exceeds bound {bound[k]:.3g} "
            f"+ 3 se at t = {t_grid[k]:.3g} for {case.description}"
        )
    return report
