"""Configuration, orchestration, persistence and plot emission."""

from .config import ExperimentConfig, parse_config, problem_from_dict, problem_to_dict
from .runner import run
from .svgplot import emit_plot

__all__ = [
    "ExperimentConfig",
    "emit_plot",
    "parse_config",
    "problem_from_dict",
    "problem_to_dict",
    "run",
]
