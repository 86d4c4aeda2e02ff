"""Generalization-gap experiment.

Records, per replication, the population and empirical risks of the
learned rule; reports quantiles of the gap R(w_n) - R_n(w_n) and of the
variance-type margin R(w_n) - (1 + eta) R_n(w_n), and calibrates the
smallest absolute constant that makes the variance-type bound hold
empirically at each n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..bounds import log_n
from ..distributions import FiniteSupport
from ..problem import ProblemInstance
from .algorithms import AlgorithmSpec, theoretical_gamma
from .parallel import chunk_ranges, map_chunks
from .scaling import _scaling_chunk, empirical_quantile


@dataclass(frozen=True)
class GapReport:
    n_grid: list[int]
    delta: float
    eta: float
    c: float
    replications: int
    gap_quantiles: list[float]  # (1 - delta)-quantile of R - R_n
    margin_quantiles: list[float]  # same for R - (1 + eta) R_n
    rhs_terms: list[float]  # (1 + 1/eta)(gamma log n + M/n) log(1/delta)
    min_empirical_c: list[float]  # smallest c making the bound hold, per n
    overall_min_c: float
    holds_at_configured_c: bool
    algorithm: dict = field(default_factory=dict)
    gaps: list[np.ndarray] = field(default_factory=list)
    emp_risks: list[np.ndarray] = field(default_factory=list)
    pop_risks: list[np.ndarray] = field(default_factory=list)
    values: list[np.ndarray] = field(default_factory=list)  # excess risks
    seeds: list[np.ndarray] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "experiment": "gap",
            "n_grid": [int(n) for n in self.n_grid],
            "delta": self.delta,
            "eta": self.eta,
            "c": self.c,
            "replications": self.replications,
            "gap_quantiles": self.gap_quantiles,
            "margin_quantiles": self.margin_quantiles,
            "rhs_terms": self.rhs_terms,
            "min_empirical_c": self.min_empirical_c,
            "overall_min_c": self.overall_min_c,
            "holds_at_configured_c": self.holds_at_configured_c,
            "algorithm": self.algorithm,
        }


def generalization_gap_experiment(
    inst: ProblemInstance,
    spec: AlgorithmSpec,
    n_grid: list[int],
    reps: int,
    delta: float,
    eta: float = 1.0,
    c: float = 1.0,
    seed: int = 0,
    parallelism: int = 1,
    minimizer_tol: float = 1e-4,
) -> GapReport:
    if not isinstance(inst.distribution, FiniteSupport):
        raise ValueError("gap experiments need a FiniteSupport distribution")
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    if eta <= 0:
        raise ValueError("eta must be positive")
    if reps < math.ceil(10.0 / delta):
        raise ValueError(f"reps = {reps} too small; need at least {math.ceil(10.0 / delta)}")

    from ..problem import population_minimizer

    _, risk_star = population_minimizer(inst, minimizer_tol)

    ld = math.log(1.0 / delta)
    gaps, emps, pops, excesses, seeds = [], [], [], [], []
    gap_q, margin_q, rhs_terms, min_cs = [], [], [], []
    for n_idx, n in enumerate(n_grid):
        payloads = [
            (inst, spec, n, n_idx, seed, r.start, r.stop, risk_star)
            for r in chunk_ranges(reps, parallelism)
        ]
        results = map_chunks(_scaling_chunk, payloads, parallelism)
        excess = np.concatenate([r[0] for r in results])
        emp = np.concatenate([r[1] for r in results])
        pop = np.concatenate([r[2] for r in results])
        sds = np.concatenate([r[3] for r in results])
        gap = pop - emp
        margin = pop - (1.0 + eta) * emp
        gaps.append(gap)
        emps.append(emp)
        pops.append(pop)
        excesses.append(excess)
        seeds.append(sds)
        gap_q.append(empirical_quantile(gap, delta))
        mq = empirical_quantile(margin, delta)
        margin_q.append(mq)
        gamma = theoretical_gamma(spec, inst, n)
        term = (1.0 + 1.0 / eta) * (gamma * log_n(n) + inst.range_bound / n) * ld
        rhs_terms.append(term)
        min_cs.append(max(0.0, mq) / term if term > 0 else 0.0)

    overall = max(min_cs) if min_cs else 0.0
    holds = all(mq <= c * t for mq, t in zip(margin_q, rhs_terms))
    # calibration sanity: with c = overall min the bound holds at every n
    assert all(mq <= overall * t + 1e-12 for mq, t in zip(margin_q, rhs_terms))
    return GapReport(
        n_grid=list(n_grid),
        delta=delta,
        eta=eta,
        c=c,
        replications=reps,
        gap_quantiles=gap_q,
        margin_quantiles=margin_q,
        rhs_terms=rhs_terms,
        min_empirical_c=min_cs,
        overall_min_c=overall,
        holds_at_configured_c=holds,
        algorithm=spec.describe(),
        gaps=gaps,
        emp_risks=emps,
        pop_risks=pops,
        values=excesses,
        seeds=seeds,
    )
