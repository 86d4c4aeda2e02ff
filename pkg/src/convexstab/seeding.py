"""Deterministic seed derivation and counter-based random generators.

Every random draw in the package flows through a Philox (counter-based)
generator keyed by a 64-bit seed.  Per-task seeds are derived by hashing
(base_seed, task indices...), so replications can run in any order or on
any number of workers and still produce identical streams.
"""

from __future__ import annotations

import hashlib

import numpy as np

_MASK64 = (1 << 64) - 1


def derive_seed(*parts: int | str) -> int:
    """Derive a 64-bit seed from a base seed and task indices.

    Parts may be integers (e.g. base seed, replication index) or short
    string labels used to separate independent streams.
    """
    h = hashlib.sha256()
    for p in parts:
        if isinstance(p, str):
            h.update(b"s")
            h.update(p.encode("utf-8"))
        else:
            h.update(b"i")
            h.update(int(p).to_bytes(17, "little", signed=True))
        h.update(b"\x00")
    return int.from_bytes(h.digest()[:8], "little") & _MASK64


def make_rng(*parts: int | str) -> np.random.Generator:
    """Counter-based generator keyed by ``derive_seed(*parts)``."""
    return np.random.Generator(np.random.Philox(key=derive_seed(*parts)))
