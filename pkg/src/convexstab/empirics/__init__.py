"""Monte Carlo harnesses: stability estimation, Bernstein-condition
verification, excess-risk scaling, generalization-gap and concentration
experiments."""

from .algorithms import AlgorithmSpec, resolve_steps, solve_batch, theoretical_gamma
from .bernstein import BernsteinReport, verify_bernstein
from .gap import GapReport, generalization_gap_experiment
from .scaling import ScalingReport, excess_risk_experiment, fit_scaling_slope
from .selfbounding import (
    SelfBoundingCase,
    SelfBoundingReport,
    erm_squared_loss_case,
    selfbounding_mc_validation,
    uniform_sum_case,
)
from .stability import StabilityEstimate, estimate_stability

__all__ = [
    "AlgorithmSpec",
    "BernsteinReport",
    "GapReport",
    "ScalingReport",
    "SelfBoundingCase",
    "SelfBoundingReport",
    "StabilityEstimate",
    "erm_squared_loss_case",
    "estimate_stability",
    "excess_risk_experiment",
    "fit_scaling_slope",
    "generalization_gap_experiment",
    "resolve_steps",
    "selfbounding_mc_validation",
    "solve_batch",
    "theoretical_gamma",
    "uniform_sum_case",
]
