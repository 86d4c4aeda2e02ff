"""JSON experiment configuration: schema, defaults and validation.

Validation is collect-all: every problem is reported with its field path
in one pass, and unknown keys are rejected everywhere.  The documented
schema lives in the repository README.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..distributions import FiniteSupport, TruncatedGaussian, UniformBall
from ..errors import ConfigError
from ..geometry import Box, L2Ball, Simplex
from ..losses import LOSS_KINDS
from ..problem import ProblemInstance, make_instance
from ..empirics.algorithms import ALGORITHM_KINDS, STEP_RULES, AlgorithmSpec

ENV_OUTPUT_DIR = "CONVEXSTAB_OUTPUT_DIR"

EXPERIMENTS = ("stability", "bernstein", "scaling", "gap", "concentration", "bound-eval")

DEFAULT_N_GRID = [100, 300, 1000, 3000, 10000]
DEFAULT_REPS = 2000
DEFAULT_DELTA = 0.05

DEFAULT_PROBLEM = {
    "loss": {"kind": "quadratic", "lambda": 1.0},
    "domain": {"kind": "l2_ball", "center": [0.0], "radius": 10.0},
    "distribution": {
        "kind": "finite",
        "atoms": [{"x": [-1.0], "p": 0.5}, {"x": [1.0], "p": 0.5}],
    },
}


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    problem: ProblemInstance | None
    algorithm: AlgorithmSpec | None
    n_grid: list[int]
    reps: int
    delta: float
    eta: float
    c: float
    C: float
    c_opt: float
    base_seed: int
    output_dir: str
    parallelism: int | str
    probes: int
    minimizer_tol: float
    bound: dict | None
    concentration: dict
    resolved: dict = field(repr=False)  # canonical dict, hashed into the manifest


class _Checker:
    """Accumulates validation errors with dotted field paths."""

    def __init__(self):
        self.errors: list[str] = []

    def fail(self, path: str, message: str):
        self.errors.append(f"{path}: {message}")

    def expect_keys(self, obj: dict, path: str, allowed: set[str]):
        for key in obj:
            if key not in allowed:
                self.fail(f"{path}.{key}" if path else key, "unknown key")

    def number(self, obj, path, key, default=None, lo=None, hi=None,
               lo_open=False, hi_open=False, integer=False):
        if key not in obj:
            if default is None:
                self.fail(f"{path}.{key}" if path else key, "missing required value")
                return None
            return default
        v = obj[key]
        where = f"{path}.{key}" if path else key
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            self.fail(where, f"must be a number, got {v!r}")
            return None
        if integer and int(v) != v:
            self.fail(where, f"must be an integer, got {v!r}")
            return None
        if lo is not None and (v <= lo if lo_open else v < lo):
            self.fail(where, f"must be {'>' if lo_open else '>='} {lo}, got {v!r}")
            return None
        if hi is not None and (v >= hi if hi_open else v > hi):
            self.fail(where, f"must be {'<' if hi_open else '<='} {hi}, got {v!r}")
            return None
        return int(v) if integer else float(v)

    def vector(self, obj, path, key):
        where = f"{path}.{key}" if path else key
        if key not in obj:
            self.fail(where, "missing required value")
            return None
        v = obj[key]
        if not isinstance(v, list) or not v or not all(
            isinstance(x, (int, float)) and not isinstance(x, bool) for x in v
        ):
            self.fail(where, "must be a non-empty list of numbers")
            return None
        return [float(x) for x in v]


def _parse_domain(obj, path, check: _Checker):
    if not isinstance(obj, dict):
        check.fail(path, "must be an object")
        return None
    kind = obj.get("kind")
    if kind == "l2_ball":
        check.expect_keys(obj, path, {"kind", "center", "radius"})
        center = check.vector(obj, path, "center")
        radius = check.number(obj, path, "radius", lo=0, lo_open=True)
        if center is not None and radius is not None:
            return L2Ball(center=np.array(center), radius=radius)
    elif kind == "box":
        check.expect_keys(obj, path, {"kind", "lower", "upper"})
        lower = check.vector(obj, path, "lower")
        upper = check.vector(obj, path, "upper")
        if lower is not None and upper is not None:
            if len(lower) != len(upper) or any(u < l for l, u in zip(lower, upper)):
                check.fail(path, "upper must dominate lower, same length")
                return None
            return Box(lower=np.array(lower), upper=np.array(upper))
    elif kind == "simplex":
        check.expect_keys(obj, path, {"kind", "dim"})
        dim = check.number(obj, path, "dim", lo=1, integer=True)
        if dim is not None:
            return Simplex(dimension=dim)
    else:
        check.fail(f"{path}.kind", f"must be one of l2_ball|box|simplex, got {kind!r}")
    return None


def _parse_distribution(obj, path, check: _Checker, labeled: bool):
    if not isinstance(obj, dict):
        check.fail(path, "must be an object")
        return None
    kind = obj.get("kind")
    if kind == "finite":
        check.expect_keys(obj, path, {"kind", "atoms"})
        atoms = obj.get("atoms")
        if not isinstance(atoms, list) or not atoms:
            check.fail(f"{path}.atoms", "must be a non-empty list")
            return None
        feats, probs, labels = [], [], []
        for i, atom in enumerate(atoms):
            apath = f"{path}.atoms[{i}]"
            if not isinstance(atom, dict):
                check.fail(apath, "must be an object")
                return None
            keys = {"x", "p"} | ({"y"} if labeled else set())
            check.expect_keys(atom, apath, keys)
            x = check.vector(atom, apath, "x")
            p = check.number(atom, apath, "p", lo=0)
            if x is None or p is None:
                return None
            feats.append(x)
            probs.append(p)
            if labeled:
                y = atom.get("y")
                if y not in (-1, 1):
                    check.fail(f"{apath}.y", f"must be -1 or +1, got {y!r}")
                    return None
                labels.append(float(y))
        if abs(sum(probs) - 1.0) > 1e-12:
            check.fail(f"{path}.atoms", f"probabilities sum to {sum(probs)}, expected 1")
            return None
        try:
            return FiniteSupport(
                features=np.array(feats),
                probs=np.array(probs),
                labels=np.array(labels) if labeled else None,
            )
        except ValueError as e:
            check.fail(path, str(e))
            return None
    elif kind == "uniform_ball":
        check.expect_keys(obj, path, {"kind", "center", "radius"})
        center = check.vector(obj, path, "center")
        radius = check.number(obj, path, "radius", lo=0, lo_open=True)
        if labeled:
            check.fail(path, "hinge loss requires a finite labeled distribution")
            return None
        if center is not None and radius is not None:
            return UniformBall(center=np.array(center), radius=radius)
    elif kind == "truncated_gaussian":
        check.expect_keys(obj, path, {"kind", "mean", "cov", "radius"})
        mean = check.vector(obj, path, "mean")
        radius = check.number(obj, path, "radius", lo=0, lo_open=True)
        cov = obj.get("cov")
        if labeled:
            check.fail(path, "hinge loss requires a finite labeled distribution")
            return None
        if mean is not None and radius is not None and cov is not None:
            try:
                return TruncatedGaussian(
                    mean=np.array(mean), cov=np.array(cov, dtype=float), radius=radius
                )
            except (ValueError, np.linalg.LinAlgError) as e:
                check.fail(f"{path}.cov", str(e))
                return None
    else:
        check.fail(
            f"{path}.kind",
            f"must be one of finite|uniform_ball|truncated_gaussian, got {kind!r}",
        )
    return None


def problem_from_dict(obj: dict, check: _Checker) -> ProblemInstance | None:
    if not isinstance(obj, dict):
        check.fail("problem", "must be an object")
        return None
    check.expect_keys(
        obj, "problem", {"loss", "domain", "distribution", "lipschitz", "range_bound"}
    )
    loss_obj = obj.get("loss")
    if not isinstance(loss_obj, dict):
        check.fail("problem.loss", "must be an object")
        return None
    check.expect_keys(loss_obj, "problem.loss", {"kind", "lambda"})
    kind = loss_obj.get("kind")
    if kind not in LOSS_KINDS:
        check.fail(
            "problem.loss.kind",
            f"must be one of {'|'.join(LOSS_KINDS)}, got {kind!r}",
        )
        return None
    lam = check.number(loss_obj, "problem.loss", "lambda", lo=0, lo_open=True)
    if lam is None:
        return None
    loss = LOSS_KINDS[kind](lam=lam)
    domain = _parse_domain(obj.get("domain"), "problem.domain", check)
    dist = _parse_distribution(
        obj.get("distribution"), "problem.distribution", check, labeled=loss.labeled
    )
    lipschitz = check.number(obj, "problem", "lipschitz", default=-1.0, lo=0, lo_open=True) \
        if "lipschitz" in obj else None
    range_bound = check.number(obj, "problem", "range_bound", default=-1.0, lo=0) \
        if "range_bound" in obj else None
    if domain is None or dist is None or check.errors:
        return None
    try:
        return make_instance(loss, domain, dist, lipschitz=lipschitz, range_bound=range_bound)
    except ValueError as e:
        check.fail("problem", str(e))
        return None


def problem_to_dict(inst: ProblemInstance) -> dict:
    loss = {"kind": inst.loss.kind, "lambda": inst.lam}
    dom = inst.domain
    if isinstance(dom, L2Ball):
        domain = {"kind": "l2_ball", "center": dom.center.tolist(), "radius": dom.radius}
    elif isinstance(dom, Box):
        domain = {"kind": "box", "lower": dom.lower.tolist(), "upper": dom.upper.tolist()}
    else:
        domain = {"kind": "simplex", "dim": dom.dim}
    dist = inst.distribution
    if isinstance(dist, FiniteSupport):
        atoms = []
        for j in range(dist.n_atoms):
            atom = {"x": dist.features[j].tolist(), "p": float(dist.probs[j])}
            if dist.labels is not None:
                atom["y"] = int(dist.labels[j])
            atoms.append(atom)
        distribution = {"kind": "finite", "atoms": atoms}
    elif isinstance(dist, UniformBall):
        distribution = {
            "kind": "uniform_ball", "center": dist.center.tolist(), "radius": dist.radius
        }
    else:
        distribution = {
            "kind": "truncated_gaussian",
            "mean": dist.mean.tolist(),
            "cov": dist.cov.tolist(),
            "radius": dist.radius,
        }
    return {
        "loss": loss,
        "domain": domain,
        "distribution": distribution,
        "lipschitz": inst.lipschitz,
        "range_bound": inst.range_bound,
    }


def _parse_algorithm(obj, check: _Checker) -> AlgorithmSpec | None:
    if not isinstance(obj, dict):
        check.fail("algorithm", "must be an object")
        return None
    kind = obj.get("kind")
    if kind not in ALGORITHM_KINDS:
        check.fail(
            "algorithm.kind", f"must be one of {'|'.join(ALGORITHM_KINDS)}, got {kind!r}"
        )
        return None
    allowed = {"kind"}
    if kind == "erm":
        allowed |= {"tol"}
    elif kind in ("pgd_decaying", "pgd_constant"):
        allowed |= {"steps", "step_rule"}
        if kind == "pgd_constant":
            allowed |= {"c_opt"}
    else:
        allowed |= {"w0"}
    check.expect_keys(obj, "algorithm", allowed)
    tol = check.number(obj, "algorithm", "tol", default=1e-9, lo=0, lo_open=True)
    c_opt = check.number(obj, "algorithm", "c_opt", default=1.0, lo=0, lo_open=True)
    steps = None
    if "steps" in obj:
        steps = check.number(obj, "algorithm", "steps", lo=1, integer=True)
    rule = obj.get("step_rule")
    if rule is not None and rule not in STEP_RULES:
        check.fail("algorithm.step_rule", f"must be one of {'|'.join(STEP_RULES)}")
        return None
    w0 = None
    if kind == "constant":
        w0 = check.vector(obj, "algorithm", "w0")
        if w0 is None:
            return None
        w0 = np.array(w0)
    if check.errors:
        return None
    try:
        return AlgorithmSpec(
            kind=kind, steps=steps, step_rule=rule, tol=tol or 1e-9, w0=w0, c_opt=c_opt or 1.0
        )
    except ValueError as e:
        check.fail("algorithm", str(e))
        return None


TOP_KEYS = {
    "problem", "algorithm", "experiment", "n_grid", "reps", "delta", "eta",
    "constants", "base_seed", "output_dir", "parallelism", "probes",
    "minimizer_tol", "bound", "concentration",
}


def config_from_dict(obj: dict) -> ExperimentConfig:
    """Validate a raw config dict; raises ConfigError listing every problem."""
    check = _Checker()
    if not isinstance(obj, dict):
        raise ConfigError(["config: top level must be a JSON object"])
    check.expect_keys(obj, "", TOP_KEYS)

    experiment = obj.get("experiment")
    if experiment not in EXPERIMENTS:
        check.fail("experiment", f"must be one of {'|'.join(EXPERIMENTS)}, got {experiment!r}")

    problem = problem_from_dict(obj.get("problem", DEFAULT_PROBLEM), check)
    algorithm = _parse_algorithm(obj.get("algorithm", {"kind": "erm"}), check)

    n_grid = obj.get("n_grid", DEFAULT_N_GRID)
    if not (
        isinstance(n_grid, list)
        and n_grid
        and all(isinstance(n, int) and not isinstance(n, bool) and n >= 1 for n in n_grid)
        and sorted(set(n_grid)) == n_grid
    ):
        check.fail("n_grid", "must be a strictly increasing list of integers >= 1")
        n_grid = DEFAULT_N_GRID

    reps = check.number(obj, "", "reps", default=DEFAULT_REPS, lo=1, integer=True)
    delta = check.number(obj, "", "delta", default=DEFAULT_DELTA, lo=0, hi=1,
                         lo_open=True, hi_open=True)
    eta = check.number(obj, "", "eta", default=1.0, lo=0, lo_open=True)
    consts = obj.get("constants", {})
    if not isinstance(consts, dict):
        check.fail("constants", "must be an object")
        consts = {}
    check.expect_keys(consts, "constants", {"c", "C", "c_opt"})
    c = check.number(consts, "constants", "c", default=1.0, lo=0, lo_open=True)
    C = check.number(consts, "constants", "C", default=1.0, lo=0, lo_open=True)
    c_opt = check.number(consts, "constants", "c_opt", default=1.0, lo=0, lo_open=True)
    base_seed = check.number(obj, "", "base_seed", default=0, integer=True)
    output_dir = obj.get("output_dir", os.environ.get(ENV_OUTPUT_DIR, "out"))
    if not isinstance(output_dir, str) or not output_dir:
        check.fail("output_dir", "must be a non-empty string")
        output_dir = "out"
    parallelism = obj.get("parallelism", 1)
    if parallelism != "auto" and not (
        isinstance(parallelism, int) and not isinstance(parallelism, bool) and parallelism >= 1
    ):
        check.fail("parallelism", f"must be a positive integer or 'auto', got {parallelism!r}")
        parallelism = 1
    probes = check.number(obj, "", "probes", default=64, lo=1, integer=True)
    minimizer_tol = check.number(obj, "", "minimizer_tol", default=1e-4, lo=0, lo_open=True)

    bound = obj.get("bound")
    if experiment == "bound-eval" and not isinstance(bound, dict):
        check.fail("bound", "bound-eval experiments need a bound object")
    conc = obj.get("concentration", {})
    if not isinstance(conc, dict):
        check.fail("concentration", "must be an object")
        conc = {}
    check.expect_keys(conc, "concentration", {"case", "n", "a", "b", "t_grid"})
    if "case" in conc and conc["case"] not in ("uniform_sum", "erm_squared_loss", "both"):
        check.fail("concentration.case", "must be uniform_sum|erm_squared_loss|both")

    if check.errors:
        raise ConfigError(check.errors)

    resolved = {
        "experiment": experiment,
        "problem": problem_to_dict(problem),
        "algorithm": algorithm.describe(),
        "n_grid": n_grid,
        "reps": reps,
        "delta": delta,
        "eta": eta,
        "constants": {"c": c, "C": C, "c_opt": c_opt},
        "base_seed": base_seed,
        "parallelism": parallelism,
        "probes": probes,
        "minimizer_tol": minimizer_tol,
    }
    if bound is not None:
        resolved["bound"] = bound
    if conc:
        resolved["concentration"] = conc

    return ExperimentConfig(
        experiment=experiment,
        problem=problem,
        algorithm=algorithm,
        n_grid=n_grid,
        reps=reps,
        delta=delta,
        eta=eta,
        c=c,
        C=C,
        c_opt=c_opt,
        base_seed=base_seed,
        output_dir=output_dir,
        parallelism=parallelism,
        probes=probes,
        minimizer_tol=minimizer_tol,
        bound=bound,
        concentration=conc,
        resolved=resolved,
    )


def parse_config(path: str | Path) -> ExperimentConfig:
    """Load and validate a JSON config file."""
    p = Path(path)
    if not p.is_file():
        raise ConfigError([f"config file not found: {p}"])
    try:
        obj = json.loads(p.read_text())
    except json.JSONDecodeError as e:
        raise ConfigError([f"invalid JSON in {p}: {e}"]) from e
    return config_from_dict(obj)
