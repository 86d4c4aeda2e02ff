"""convexstab: a stochastic convex optimization laboratory.

Solvers (exact ERM, projected subgradient descent), closed-form bound
evaluators, and Monte Carlo experiments measuring uniform stability, the
Bernstein condition, excess-risk scaling in the sample size, and
lower-tail concentration of weakly self-bounded functions.
"""

from . import bounds, empirics, solvers
from .distributions import FiniteSupport, TruncatedGaussian, UniformBall
from .errors import ConfigError, InvariantViolation
from .geometry import Box, ConvexDomain, L2Ball, Simplex, project
from .losses import LossModel, RegGeometricMedian, RegHinge, RegQuadratic
from .problem import (
    Dataset,
    ProblemInstance,
    empirical_risk,
    estimate_population_risk,
    loss_value,
    make_instance,
    population_minimizer,
    population_risk,
    sample_dataset,
    subgradient,
)
from .seeding import derive_seed, make_rng
from .solvers import (
    SolverResult,
    erm_reference,
    optimization_error,
    pgd_constant,
    pgd_decaying,
)

__version__ = "0.1.0"

__all__ = [
    "Box",
    "ConfigError",
    "ConvexDomain",
    "Dataset",
    "FiniteSupport",
    "InvariantViolation",
    "L2Ball",
    "LossModel",
    "ProblemInstance",
    "RegGeometricMedian",
    "RegHinge",
    "RegQuadratic",
    "Simplex",
    "SolverResult",
    "TruncatedGaussian",
    "UniformBall",
    "bounds",
    "derive_seed",
    "empirical_risk",
    "empirics",
    "erm_reference",
    "estimate_population_risk",
    "loss_value",
    "make_instance",
    "make_rng",
    "optimization_error",
    "pgd_constant",
    "pgd_decaying",
    "population_minimizer",
    "population_risk",
    "project",
    "sample_dataset",
    "solvers",
    "subgradient",
]
