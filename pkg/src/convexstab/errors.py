"""Package exceptions."""

from __future__ import annotations


class InvariantViolation(RuntimeError):
    """A proved property failed on a concrete draw.

    Carries the replication index and derived seed so the failing case
    can be reproduced in isolation.
    """

    def __init__(self, message: str, replication: int | None = None, seed: int | None = None):
        if replication is not None:
            message = f"{message} (replication {replication}, seed {seed})"
        super().__init__(message)
        self.replication = replication
        self.seed = seed


class ConfigError(ValueError):
    """Invalid experiment configuration; carries all validation errors."""

    def __init__(self, errors: list[str]):
        super().__init__("; ".join(errors))
        self.errors = list(errors)
