"""Experiment configuration: JSON schema, validation, and round-trip
serialization.

A config is a single JSON document::

    {
      "experiment": "<name>",
      "parameters": { ... experiment-specific ... },
      "seed": 0,
      "output_path": "report.json"
    }

Complex matrix entries are written as [re, im] pairs, row-major.  Validation
collects every violation before failing, so one run surfaces all problems.
"""

from __future__ import annotations

import json
import numbers
from dataclasses import dataclass, field, replace

import numpy as np

from ..errors import ValidationError
from ..matcore import ClassicalDistribution, DensityMatrix, Measurement

EXPERIMENT_NAMES = (
    "stein",
    "sanov",
    "chernoff",
    "divergence-props",
    "hot",
    "modelsel",
    "risk-alpha",
)

#: One-line parameter documentation per experiment, for ``qstatlab list``.
PARAMETER_HELP = {
    "stein": {
        "required": "p, q (probability arrays), n_list, epsilon or epsilons",
        "optional": "fit_mode ('all'|'asymptotic'), rate_tol, independence_tol",
    },
    "sanov": {
        "required": "p, n_list, event {constraints: [{coeffs, bound, relation '>='|'<=', strict?}]}",
        "optional": "slack_factor, grid_resolution, refine_rounds",
    },
    "chernoff": {
        "required": "p, q, n_list",
        "optional": "priors (list of [pi1, pi2]), rel_tol, search_tol",
    },
    "divergence-props": {
        "required": "(none; the random suites are driven by the seed)",
        "optional": "nonneg_cases, invariance_cases, dpi_cases, commuting_cases, "
        "overlap_cases, convexity_cases, skew_cases, boundary_cases",
    },
    "hot": {
        "required": "rho, sigma (complex matrices as [re, im] pairs), "
        "effects (list of complex matrices), alphas",
        "optional": "gap_tol, expect_zero_gap",
    },
    "modelsel": {
        "required": "mode ('selection'|'waic-vs-gen'), true_dist, n, num_datasets; "
        "selection: models + expected_model; waic-vs-gen: model",
        "optional": "beta, consistency_threshold, se_factor",
    },
    "risk-alpha": {
        "required": "points (binary-family grid), alphas, n",
        "optional": "num_perturbations, perturbation_magnitude, slack_tol",
    },
}


class ConfigValidationError(ValidationError):
    """Aggregates every validation problem found in a config document."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("invalid configuration:\n" + "\n".join(f"- {e}" for e in self.errors))


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    parameters: dict
    seed: int = 0
    output_path: str = None

    def with_seed(self, seed: int) -> "ExperimentConfig":
        return replace(self, seed=int(seed))


def _is_number(x) -> bool:
    return isinstance(x, numbers.Real) and not isinstance(x, bool)


def _check_prob_vector(value, name, errors, min_len=1):
    if not isinstance(value, list) or len(value) < min_len or not all(_is_number(v) for v in value):
        errors.append(f"{name} must be a list of at least {min_len} numbers")
        return None
    vec = [float(v) for v in value]
    if min(vec) < 0.0:
        errors.append(f"{name} has a negative entry")
        return None
    if abs(sum(vec) - 1.0) > 1e-9:
        errors.append(f"{name} sums to {sum(vec)!r}, not 1 within 1e-9")
        return None
    return vec


def _check_n_list(value, name, errors):
    if (
        not isinstance(value, list)
        or not value
        or not all(isinstance(v, int) and not isinstance(v, bool) and v >= 1 for v in value)
    ):
        errors.append(f"{name} must be a nonempty list of positive integers")
        return None
    return [int(v) for v in value]


def _check_number(value, name, errors, lo=None, hi=None, open_lo=False, open_hi=False):
    if not _is_number(value):
        errors.append(f"{name} must be a number")
        return None
    v = float(value)
    if lo is not None and (v <= lo if open_lo else v < lo):
        errors.append(f"{name} = {v!r} below its lower bound {lo}")
        return None
    if hi is not None and (v >= hi if open_hi else v > hi):
        errors.append(f"{name} = {v!r} above its upper bound {hi}")
        return None
    return v


def _check_positive_int(value, name, errors, lo=1):
    if not (isinstance(value, int) and not isinstance(value, bool) and value >= lo):
        errors.append(f"{name} must be an integer >= {lo}")
        return None
    return int(value)


def _check_complex_matrix(value, name, errors):
    """Row-major nested lists with [re, im] entry pairs -> numpy matrix."""
    if not isinstance(value, list) or not value:
        errors.append(f"{name} must be a nonempty list of rows")
        return None
    dim = len(value)
    out = np.zeros((dim, dim), dtype=np.complex128)
    for i, row in enumerate(value):
        if not isinstance(row, list) or len(row) != dim:
            errors.append(f"{name} row {i} must have {dim} entries (square matrix)")
            return None
        for j, entry in enumerate(row):
            if (
                not isinstance(entry, list)
                or len(entry) != 2
                or not all(_is_number(part) for part in entry)
            ):
                errors.append(f"{name}[{i}][{j}] must be an [re, im] pair")
                return None
            out[i, j] = complex(float(entry[0]), float(entry[1]))
    return out


def _check_alphas(value, name, errors):
    if not isinstance(value, list) or not value:
        errors.append(f"{name} must be a nonempty list of numbers in [-1, 1]")
        return None
    out = []
    for v in value:
        a = _check_number(v, f"{name} entry", errors, lo=-1.0, hi=1.0)
        if a is None:
            return None
        out.append(a)
    return out


def _validate_stein(params, errors):
    _check_prob_vector(params.get("p"), "parameters.p", errors)
    _check_prob_vector(params.get("q"), "parameters.q", errors)
    _check_n_list(params.get("n_list"), "parameters.n_list", errors)
    has_scalar = "epsilon" in params
    has_list = "epsilons" in params
    if has_scalar == has_list:
        errors.append("parameters must contain exactly one of 'epsilon' or 'epsilons'")
    elif has_scalar:
        _check_number(params["epsilon"], "parameters.epsilon", errors, 0.0, 1.0, True, True)
    else:
        eps = params["epsilons"]
        if not isinstance(eps, list) or not eps:
            errors.append("parameters.epsilons must be a nonempty list")
        else:
            for i, e in enumerate(eps):
                _check_number(e, f"parameters.epsilons[{i}]", errors, 0.0, 1.0, True, True)
    mode = params.setdefault("fit_mode", "all")
    if mode not in ("all", "asymptotic"):
        errors.append("parameters.fit_mode must be 'all' or 'asymptotic'")
    _check_number(params.setdefault("rate_tol", 0.01), "parameters.rate_tol", errors, 0.0)
    _check_number(
        params.setdefault("independence_tol", 0.01), "parameters.independence_tol", errors, 0.0
    )
    p, q = params.get("p"), params.get("q")
    if not errors and len(p) != len(q):
        errors.append("parameters.p and parameters.q must share one alphabet")


def _validate_event(event, errors):
    if not isinstance(event, dict) or not isinstance(event.get("constraints"), list):
        errors.append("parameters.event must be {'constraints': [...]}")
        return
    constraints = event["constraints"]
    if not constraints:
        errors.append("parameters.event.constraints must be nonempty")
    for i, c in enumerate(constraints):
        name = f"parameters.event.constraints[{i}]"
        if not isinstance(c, dict):
            errors.append(f"{name} must be an object")
            continue
        coeffs = c.get("coeffs")
        if not isinstance(coeffs, list) or not coeffs or not all(_is_number(x) for x in coeffs):
            errors.append(f"{name}.coeffs must be a list of numbers")
        _check_number(c.get("bound"), f"{name}.bound", errors)
        if c.get("relation") not in (">=", "<="):
            errors.append(f"{name}.relation must be '>=' or '<='")
        if not isinstance(c.setdefault("strict", False), bool):
            errors.append(f"{name}.strict must be a boolean")


def _validate_sanov(params, errors):
    p = _check_prob_vector(params.get("p"), "parameters.p", errors)
    _check_n_list(params.get("n_list"), "parameters.n_list", errors)
    _validate_event(params.get("event"), errors)
    _check_number(params.setdefault("slack_factor", 3.0), "parameters.slack_factor", errors, 0.0)
    _check_positive_int(
        params.setdefault("grid_resolution", 200), "parameters.grid_resolution", errors, 2
    )
    _check_positive_int(
        params.setdefault("refine_rounds", 20), "parameters.refine_rounds", errors, 0
    )
    if not errors and p is not None:
        for i, c in enumerate(params["event"]["constraints"]):
            if len(c["coeffs"]) != len(p):
                errors.append(
                    f"parameters.event.constraints[{i}].coeffs length must match the alphabet"
                )


def _validate_chernoff(params, errors):
    p = _check_prob_vector(params.get("p"), "parameters.p", errors)
    q = _check_prob_vector(params.get("q"), "parameters.q", errors)
    _check_n_list(params.get("n_list"), "parameters.n_list", errors)
    priors = params.setdefault("priors", [[0.5, 0.5]])
    if not isinstance(priors, list) or not priors:
        errors.append("parameters.priors must be a nonempty list of [pi1, pi2] pairs")
    else:
        for i, pair in enumerate(priors):
            vec = _check_prob_vector(pair, f"parameters.priors[{i}]", errors, min_len=2)
            if vec is not None and (len(vec) != 2 or min(vec) <= 0.0):
                errors.append(f"parameters.priors[{i}] must be two positive numbers summing to 1")
    _check_number(params.setdefault("rel_tol", 0.05), "parameters.rel_tol", errors, 0.0)
    _check_number(
        params.setdefault("search_tol", 1e-10), "parameters.search_tol", errors, 0.0, open_lo=True
    )
    if not errors and p is not None and q is not None and len(p) != len(q):
        errors.append("parameters.p and parameters.q must share one alphabet")


_DIVPROP_COUNTS = {
    "nonneg_cases": 500,
    "invariance_cases": 100,
    "dpi_cases": 200,
    "commuting_cases": 100,
    "overlap_cases": 200,
    "convexity_cases": 50,
    "skew_cases": 100,
    "boundary_cases": 20,
}


def _validate_divergence_props(params, errors):
    for key, default in _DIVPROP_COUNTS.items():
        _check_positive_int(params.setdefault(key, default), f"parameters.{key}", errors, 1)
    unknown = set(params) - set(_DIVPROP_COUNTS)
    if unknown:
        errors.append(f"unknown divergence-props parameters: {sorted(unknown)}")


def _validate_hot(params, errors):
    rho = _check_complex_matrix(params.get("rho"), "parameters.rho", errors)
    sigma = _check_complex_matrix(params.get("sigma"), "parameters.sigma", errors)
    for matrix, name in ((rho, "rho"), (sigma, "sigma")):
        if matrix is not None:
            try:
                DensityMatrix(matrix)
            except ValidationError as exc:
                errors.append(f"parameters.{name}: {exc}")
    effects_raw = params.get("effects")
    if not isinstance(effects_raw, list) or not effects_raw:
        errors.append("parameters.effects must be a nonempty list of complex matrices")
    else:
        effects = []
        for i, e in enumerate(effects_raw):
            m = _check_complex_matrix(e, f"parameters.effects[{i}]", errors)
            if m is not None:
                effects.append(m)
        if len(effects) == len(effects_raw):
            try:
                Measurement(tuple(effects))
            except ValidationError as exc:
                errors.append(f"parameters.effects: {exc}")
    _check_alphas(params.get("alphas"), "parameters.alphas", errors)
    _check_number(params.setdefault("gap_tol", 1e-9), "parameters.gap_tol", errors, 0.0)
    if not isinstance(params.setdefault("expect_zero_gap", False), bool):
        errors.append("parameters.expect_zero_gap must be a boolean")


def _validate_model_spec(spec, name, errors):
    if not isinstance(spec, dict):
        errors.append(f"{name} must be an object")
        return
    kind = spec.get("type")
    if kind == "binary":
        points = spec.get("points")
        if (
            not isinstance(points, list)
            or not points
            or not all(_is_number(x) and 0.0 < float(x) < 1.0 for x in points)
        ):
            errors.append(f"{name}.points must be a list of numbers strictly inside (0, 1)")
    elif kind == "fixed":
        _check_prob_vector(spec.get("probs"), f"{name}.probs", errors)
    else:
        errors.append(f"{name}.type must be 'binary' or 'fixed'")
    d = spec.setdefault("d", 1 if kind == "binary" else 0)
    if not (isinstance(d, int) and not isinstance(d, bool) and d >= 0):
        errors.append(f"{name}.d must be a nonnegative integer")


def _validate_modelsel(params, errors):
    mode = params.get("mode")
    if mode not in ("selection", "waic-vs-gen"):
        errors.append("parameters.mode must be 'selection' or 'waic-vs-gen'")
        return
    _check_prob_vector(params.get("true_dist"), "parameters.true_dist", errors)
    _check_positive_int(params.get("n"), "parameters.n", errors, 1)
    _check_positive_int(params.get("num_datasets"), "parameters.num_datasets", errors, 1)
    _check_number(
        params.setdefault("beta", 1.0), "parameters.beta", errors, 0.0, open_lo=True
    )
    _check_number(params.setdefault("se_factor", 3.0), "parameters.se_factor", errors, 0.0)
    _check_number(
        params.setdefault("consistency_threshold", 0.95),
        "parameters.consistency_threshold",
        errors,
        0.0,
        1.0,
    )
    if mode == "selection":
        models = params.get("models")
        if not isinstance(models, list) or len(models) < 2:
            errors.append("selection mode needs parameters.models with at least two entries")
        else:
            for i, spec in enumerate(models):
                _validate_model_spec(spec, f"parameters.models[{i}]", errors)
            expected = params.get("expected_model")
            if not (isinstance(expected, int) and 0 <= expected < len(models)):
                errors.append("parameters.expected_model must index into parameters.models")
    else:
        spec = params.get("model")
        if spec is None:
            errors.append("waic-vs-gen mode needs parameters.model")
        else:
            _validate_model_spec(spec, "parameters.model", errors)


def _validate_risk_alpha(params, errors):
    points = params.get("points")
    if (
        not isinstance(points, list)
        or not points
        or not all(_is_number(x) and 0.0 < float(x) < 1.0 for x in points)
    ):
        errors.append("parameters.points must be a list of numbers strictly inside (0, 1)")
    _check_alphas(params.get("alphas"), "parameters.alphas", errors)
    n = _check_positive_int(params.get("n"), "parameters.n", errors, 0)
    if n is not None and points and isinstance(points, list) and 2**n > 10**6:
        errors.append(f"parameters.n = {n} exceeds the exact-enumeration guard")
    _check_positive_int(
        params.setdefault("num_perturbations", 50), "parameters.num_perturbations", errors, 0
    )
    _check_number(
        params.setdefault("perturbation_magnitude", 0.01),
        "parameters.perturbation_magnitude",
        errors,
        0.0,
    )
    _check_number(params.setdefault("slack_tol", 1e-12), "parameters.slack_tol", errors, 0.0)


_VALIDATORS = {
    "stein": _validate_stein,
    "sanov": _validate_sanov,
    "chernoff": _validate_chernoff,
    "divergence-props": _validate_divergence_props,
    "hot": _validate_hot,
    "modelsel": _validate_modelsel,
    "risk-alpha": _validate_risk_alpha,
}


def parse_config(text) -> ExperimentConfig:
    """Parse and fully validate a config document.

    Raises ValidationError with line/position information on malformed JSON,
    or ConfigValidationError listing every semantic violation.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(
            f"config parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    errors = []
    if not isinstance(doc, dict):
        raise ConfigValidationError(["config must be a JSON object"])
    unknown = set(doc) - {"experiment", "parameters", "seed", "output_path"}
    if unknown:
        errors.append(f"unknown top-level keys: {sorted(unknown)}")
    experiment = doc.get("experiment")
    if experiment not in EXPERIMENT_NAMES:
        errors.append(
            f"unknown experiment {experiment!r}; valid names: {', '.join(EXPERIMENT_NAMES)}"
        )
        raise ConfigValidationError(errors)
    seed = doc.get("seed", 0)
    if not (isinstance(seed, int) and not isinstance(seed, bool) and 0 <= seed < 2**64):
        errors.append("seed must be an unsigned 64-bit integer")
        seed = 0
    output_path = doc.get("output_path")
    if output_path is not None and not isinstance(output_path, str):
        errors.append("output_path must be a string")
        output_path = None
    parameters = doc.get("parameters")
    if not isinstance(parameters, dict):
        errors.append("parameters must be an object")
        raise ConfigValidationError(errors)
    parameters = json.loads(json.dumps(parameters))  # deep copy, JSON-clean
    _VALIDATORS[experiment](parameters, errors)
    if errors:
        raise ConfigValidationError(errors)
    return ExperimentConfig(experiment, parameters, int(seed), output_path)


def serialize_config(cfg: ExperimentConfig) -> str:
    """Inverse of parse_config up to default injection (idempotent round trip)."""
    doc = {"experiment": cfg.experiment, "parameters": cfg.parameters, "seed": cfg.seed}
    if cfg.output_path is not None:
        doc["output_path"] = cfg.output_path
    return json.dumps(doc, sort_keys=True, indent=2)


def describe_experiments() -> str:
    """Human-readable listing of experiment names and their parameters."""
    lines = []
    for name in EXPERIMENT_NAMES:
        doc = PARAMETER_HELP[name]
        lines.append(name)
        lines.append(f"  required: {doc['required']}")
        lines.append(f"  optional: {doc['optional']}")
    return "\n".join(lines)
