"""Empirical uniform-stability estimation.

Per replication: draw a dataset, replace one sample (uniform position,
i.i.d. replacement), solve both datasets and take the largest loss
change over the probe points.  On FiniteSupport distributions the probes
are all atoms, so the sup over x is exact; the max over replications
remains a lower estimate of the true worst case over datasets.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..distributions import FiniteSupport
from ..problem import ProblemInstance
from ..seeding import make_rng
from .algorithms import AlgorithmSpec, solve_batch, theoretical_gamma
from .parallel import chunk_ranges, map_chunks


@dataclass(frozen=True)
class StabilityEstimate:
    gamma_hat: float  # empirical max |l(x, w_n) - l(x, w_n^(i))|
    theoretical_gamma: float
    n: int
    replications: int
    probes: int
    exact_sup_over_support: bool
    per_rep: np.ndarray  # (reps,) max loss change per replication
    seeds: np.ndarray  # (reps,) derived seeds, for reproduction


def _probe_arrays(inst: ProblemInstance, rng, probes: int):
    dist = inst.distribution
    if isinstance(dist, FiniteSupport):
        return dist.features, dist.labels, True
    X, y = dist.sample(rng, probes)
    return X, y, False


def _stability_chunk(payload) -> tuple[np.ndarray, np.ndarray]:
    inst, spec, n, seed, start, stop, probes = payload
    m = stop - start
    d = inst.dimension
    X = np.empty((m, n, d))
    Xs = np.empty((m, n, d))
    labeled = inst.distribution.labeled
    y = np.empty((m, n)) if labeled else None
    ys = np.empty((m, n)) if labeled else None
    probe_sets = []
    seeds = np.empty(m, dtype=np.uint64)
    for j, rep in enumerate(range(start, stop)):
        from ..seeding import derive_seed

        seeds[j] = derive_seed(seed, "stability", rep)
        rng = make_rng(seed, "stability", rep)
        feats, labs = inst.distribution.sample(rng, n)
        pos = int(rng.integers(n))
        rep_feat, rep_lab = inst.distribution.sample(rng, 1)
        X[j] = feats
        Xs[j] = feats
        Xs[j, pos] = rep_feat[0]
        if labeled:
            y[j] = labs
            ys[j] = labs
            ys[j, pos] = rep_lab[0]
        probe_sets.append(_probe_arrays(inst, rng, probes))

    both_X = np.concatenate([X, Xs], axis=0)
    both_y = None if y is None else np.concatenate([y, ys], axis=0)
    W, _ = solve_batch(spec, inst, both_X, both_y, n)

    gammas = np.empty(m)
    for j in range(m):
        pX, py, _ = probe_sets[j]
        vals = inst.loss.per_sample(pX, py, W[[j, m + j]])  # (2, p)
        gammas[j] = float(np.max(np.abs(vals[0] - vals[1])))
    return gammas, seeds


def estimate_stability(
    inst: ProblemInstance,
    spec: AlgorithmSpec,
    n: int,
    reps: int,
    probes: int = 64,
    seed: int = 0,
    parallelism: int = 1,
) -> StabilityEstimate:
    if n < 2:
        raise ValueError("stability needs n >= 2")
    if reps < 1:
        raise ValueError("reps must be >= 1")
    payloads = [
        (inst, spec, n, seed, r.start, r.stop, probes)
        for r in chunk_ranges(reps, parallelism)
    ]
    results = map_chunks(_stability_chunk, payloads, parallelism)
    per_rep = np.concatenate([g for g, _ in results])
    seeds = np.concatenate([s for _, s in results])
    exact = isinstance(inst.distribution, FiniteSupport)
    n_probes = inst.distribution.n_atoms if exact else probes
    return StabilityEstimate(
        gamma_hat=float(np.max(per_rep)),
        theoretical_gamma=theoretical_gamma(spec, inst, n),
        n=n,
        replications=reps,
        probes=n_probes,
        exact_sup_over_support=exact,
        per_rep=per_rep,
        seeds=seeds,
    )
