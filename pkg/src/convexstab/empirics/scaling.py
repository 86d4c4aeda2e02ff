"""Excess-risk scaling in the sample size.

For each n in a grid and each replication, draws a dataset, runs the
algorithm, and evaluates the exact excess risk R(w_n) - R* (FiniteSupport
population quantities, no holdout noise).  Reports the conservative
(1 - delta)-quantile per n, the log-log slope of quantile vs n, and a
bootstrap confidence interval for the slope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..distributions import FiniteSupport
from ..problem import ProblemInstance, population_minimizer, population_risk
from ..seeding import derive_seed, make_rng
from .algorithms import AlgorithmSpec, solve_batch
from .parallel import chunk_ranges, map_chunks

DEFAULT_EXTRA_DELTAS = (0.1, 0.01)
DEFAULT_BOOTSTRAP = 200


def upper_quantile_index(delta: float, reps: int) -> int:
    """1-based order statistic ceil((1 - delta) reps), guarded against fp."""
    k = int(math.ceil((1.0 - delta) * reps - 1e-9))
    return min(max(k, 1), reps)


def empirical_quantile(values: np.ndarray, delta: float) -> float:
    """Conservative (1 - delta)-quantile: the ceil((1-delta) R) order statistic."""
    vals = np.sort(np.asarray(values, dtype=float))
    return float(vals[upper_quantile_index(delta, vals.shape[0]) - 1])


@dataclass(frozen=True)
class ScalingReport:
    n_grid: list[int]
    delta: float
    replications: int
    quantiles: list[float]  # per-n (1 - delta)-quantile of excess risk
    means: list[float]
    slope: float
    intercept: float
    slope_ci: tuple[float, float]  # bootstrap 95% interval
    bootstrap: int
    extra_quantiles: dict[str, list[float]] = field(default_factory=dict)
    algorithm: dict = field(default_factory=dict)
    # raw per-replication data, ordered by (n index, replication index)
    values: list[np.ndarray] = field(default_factory=list)
    emp_risks: list[np.ndarray] = field(default_factory=list)
    pop_risks: list[np.ndarray] = field(default_factory=list)
    seeds: list[np.ndarray] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "experiment": "scaling",
            "n_grid": [int(n) for n in self.n_grid],
            "delta": self.delta,
            "replications": self.replications,
            "quantiles": self.quantiles,
            "means": self.means,
            "slope": self.slope,
            "intercept": self.intercept,
            "slope_ci": list(self.slope_ci),
            "bootstrap": self.bootstrap,
            "extra_quantiles": self.extra_quantiles,
            "algorithm": self.algorithm,
        }


def _scaling_chunk(payload):
    inst, spec, n, n_idx, seed, start, stop, risk_star = payload
    m = stop - start
    d = inst.dimension
    X = np.empty((m, n, d))
    labeled = inst.distribution.labeled
    y = np.empty((m, n)) if labeled else None
    seeds = np.empty(m, dtype=np.uint64)
    for j, rep in enumerate(range(start, stop)):
        seeds[j] = derive_seed(seed, "scaling", n_idx, rep)
        rng = make_rng(seed, "scaling", n_idx, rep)
        feats, labs = inst.distribution.sample(rng, n)
        X[j] = feats
        if labeled:
            y[j] = labs
    W, _ = solve_batch(spec, inst, X, y, n)

    dist = inst.distribution
    atom_vals = inst.loss.per_sample(dist.features, dist.labels, W)  # (m, k)
    pop = np.sum(dist.probs * atom_vals, axis=-1)
    emp = np.mean(inst.loss.per_sample(X, y, W), axis=-1)
    excess = pop - risk_star
    return excess, emp, pop, seeds


def excess_risk_experiment(
    inst: ProblemInstance,
    spec: AlgorithmSpec,
    n_grid: list[int],
    reps: int,
    delta: float,
    seed: int = 0,
    parallelism: int = 1,
    minimizer_tol: float = 1e-4,
    bootstrap: int = DEFAULT_BOOTSTRAP,
    extra_deltas: tuple[float, ...] = DEFAULT_EXTRA_DELTAS,
) -> ScalingReport:
    if not isinstance(inst.distribution, FiniteSupport):
        raise ValueError("excess-risk experiments need a FiniteSupport distribution")
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    if reps < math.ceil(10.0 / delta):
        raise ValueError(
            f"reps = {reps} too small to estimate the (1 - {delta})-quantile; "
            f"need at least {math.ceil(10.0 / delta)}"
        )
    if sorted(set(n_grid)) != list(n_grid):
        raise ValueError("n_grid must be strictly increasing")

    _, risk_star = population_minimizer(inst, minimizer_tol)

    values, emps, pops, seeds = [], [], [], []
    for n_idx, n in enumerate(n_grid):
        payloads = [
            (inst, spec, n, n_idx, seed, r.start, r.stop, risk_star)
            for r in chunk_ranges(reps, parallelism)
        ]
        results = map_chunks(_scaling_chunk, payloads, parallelism)
        values.append(np.concatenate([r[0] for r in results]))
        emps.append(np.concatenate([r[1] for r in results]))
        pops.append(np.concatenate([r[2] for r in results]))
        seeds.append(np.concatenate([r[3] for r in results]))

    quantiles = [empirical_quantile(v, delta) for v in values]
    means = [float(np.mean(v)) for v in values]
    extra = {
        str(dd): [empirical_quantile(v, dd) for v in values] for dd in extra_deltas
    }
    slope, intercept, ci = fit_scaling_slope(
        n_grid, values, delta, bootstrap=bootstrap, seed=seed
    )
    return ScalingReport(
        n_grid=list(n_grid),
        delta=delta,
        replications=reps,
        quantiles=quantiles,
        means=means,
        slope=slope,
        intercept=intercept,
        slope_ci=ci,
        bootstrap=bootstrap,
        extra_quantiles=extra,
        algorithm=spec.describe(),
        values=values,
        emp_risks=emps,
        pop_risks=pops,
        seeds=seeds,
    )


def _fit_loglog(n_grid, quantiles) -> tuple[float, float]:
    x = np.log(np.asarray(n_grid, dtype=float))
    yv = np.log(np.asarray(quantiles, dtype=float))
    slope, intercept = np.polyfit(x, yv, 1)
    return float(slope), float(intercept)


def fit_scaling_slope(
    n_grid,
    values_or_quantiles,
    delta: float,
    bootstrap: int = DEFAULT_BOOTSTRAP,
    seed: int = 0,
) -> tuple[float, float, tuple[float, float]]:
    """Least-squares log-log slope of the per-n quantiles.

    When raw per-n replication values are supplied, a bootstrap over
    replications gives a 95% interval for the slope; with quantiles only,
    the interval degenerates to the point estimate.
    """
    if len(n_grid) < 4:
        raise ValueError("slope fit needs at least 4 grid points")
    raw = [np.asarray(v, dtype=float) for v in values_or_quantiles]
    has_raw = raw[0].ndim > 0 and raw[0].size > 1
    quantiles = (
        [empirical_quantile(v, delta) for v in raw] if has_raw else [float(v) for v in raw]
    )
    if any(q <= 0 for q in quantiles):
        raise ValueError(
            "quantile is zero at some n; reduce reps or report the mean instead"
        )
    slope, intercept = _fit_loglog(n_grid, quantiles)
    if not has_raw or bootstrap < 1:
        return slope, intercept, (slope, slope)
    rng = make_rng(seed, "bootstrap")
    slopes = np.empty(bootstrap)
    for b in range(bootstrap):
        qs = []
        for v in raw:
            resampled = v[rng.integers(0, v.shape[0], size=v.shape[0])]
            qs.append(max(empirical_quantile(resampled, delta), 1e-300))
        slopes[b] = _fit_loglog(n_grid, qs)[0]
    lo, hi = np.percentile(slopes, [2.5, 97.5])
    return slope, intercept, (float(lo), float(hi))
