"""Chunked execution of independent replications.

Replications carry their own derived seeds, so results are a pure
function of (config, base seed) and never of the chunking or the worker
count.  Workers must be module-level callables (picklable) taking a
single payload argument.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor


def resolve_parallelism(parallelism: int | str) -> int:
    if parallelism == "auto":
        return os.cpu_count() or 1
    p = int(parallelism)
    if p < 1:
        raise ValueError("parallelism must be >= 1")
    return p


def chunk_ranges(reps: int, parallelism: int) -> list[range]:
    """Split range(reps) into contiguous chunks, at most one per worker."""
    n_chunks = min(max(parallelism, 1), reps)
    base, extra = divmod(reps, n_chunks)
    out, start = [], 0
    for i in range(n_chunks):
        size = base + (1 if i < extra else 0)
        out.append(range(start, start + size))
        start += size
    return out


def map_chunks(worker, payloads, parallelism: int) -> list:
    """Apply worker to each payload, serially or on a process pool."""
    if parallelism <= 1 or len(payloads) <= 1:
        return [worker(p) for p in payloads]
    with ProcessPoolExecutor(max_workers=parallelism) as pool:
        return list(pool.map(worker, payloads))
