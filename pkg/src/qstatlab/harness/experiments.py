"""Experiment runners: one deterministic function per experiment name.

Every stochastic sub-task derives its stream from (seed, task label, index)
through a stable hash, so reports are byte-identical across runs and
processes for a fixed (config, seed).
"""

from __future__ import annotations

import hashlib
import math
import time

import numpy as np

from .._version import __version__
from ..divergence import (
    INF,
    chernoff_exponent,
    classical_alpha_div,
    classical_f_t,
    hot_report,
    kl,
    quantum_alpha_div,
    quantum_f_t,
    quantum_relative_entropy,
)
from ..errors import ValidationError
from ..largedev import (
    HalfSpace,
    SanovEvent,
    bayes_error_exact,
    beta_n_eps,
    rate_fit,
    sample_iid,
    sanov_q_n_exact,
    sanov_rate,
)
from ..matcore import (
    ClassicalDistribution,
    DensityMatrix,
    Measurement,
    basis_pvm,
    born_distribution,
    random_density,
    random_povm,
    random_probability_vector,
    random_unitary,
)
from ..modelsel import (
    InducedModel,
    ParamGrid,
    PredictiveDistribution,
    aic,
    all_sequences,
    alpha_predictive,
    escort_posterior,
    escort_predictive,
    mle,
    risk_alpha,
    select_model,
    uniform_prior,
    waic,
)
from ..largedev import SampleSequence
from .config import ExperimentConfig
from .report import ExperimentReport

_ALPHA_SET = (-1.0, -0.5, 0.0, 0.5, 1.0)


def derive_seed(base_seed: int, label: str, index: int = 0) -> int:
    """Stable 64-bit stream seed for a (base seed, task label, index) triple."""
    digest = hashlib.blake2b(f"{base_seed}:{label}:{index}".encode(), digest_size=8)
    return int.from_bytes(digest.digest(), "big")


def _check(name: str, value, tolerance, comparison: str = "<="):
    if comparison == "<=":
        ok = value <= tolerance
    elif comparison == ">=":
        ok = value >= tolerance
    else:
        raise ValidationError(f"unknown comparison {comparison!r}")
    return {
        "name": name,
        "value": value,
        "tolerance": tolerance,
        "comparison": comparison,
        "pass": bool(ok),
    }


# ---------------------------------------------------------------------------
# stein


def _run_stein(params: dict, seed: int):
    p = ClassicalDistribution(params["p"])
    q = ClassicalDistribution(params["q"])
    n_list = params["n_list"]
    scalar = "epsilon" in params
    eps_list = [params["epsilon"]] if scalar else list(params["epsilons"])
    fit_mode = params["fit_mode"]
    rate_tol = params["rate_tol"]
    independence_tol = params["independence_tol"]
    reference = kl(p, q)

    per_eps = []
    checks = []
    for eps in eps_list:
        rows = [beta_n_eps(p, q, n, eps) for n in n_list]
        log_betas = [r.log_beta for r in rows]
        rates = [-lb / n for lb, n in zip(log_betas, n_list)]
        fitted = rate_fit(n_list, log_betas, fit_mode)
        per_eps.append(
            {
                "epsilon": eps,
                "n_list": list(n_list),
                "log_beta_n": log_betas,
                "rate_n": rates,
                "eta_n": [r.eta for r in rows],
                "achieved_alpha_n": [r.achieved_alpha for r in rows],
                "fitted_rate": fitted,
            }
        )
        checks.append(
            _check(f"rate_at_n{max(n_list)}_eps{eps:g}", abs(rates[-1] - reference), rate_tol)
        )
        checks.append(_check(f"fitted_rate_eps{eps:g}", abs(fitted - reference), rate_tol))
    last_rates = [e["rate_n"][-1] for e in per_eps]
    fitted_rates = [e["fitted_rate"] for e in per_eps]
    checks.append(
        _check(
            f"eps_independence_at_n{max(n_list)}",
            max(last_rates) - min(last_rates),
            independence_tol,
        )
    )
    checks.append(
        _check(
            "eps_independence_fitted", max(fitted_rates) - min(fitted_rates), independence_tol
        )
    )
    results = {"reference_rate": reference, "fit_mode": fit_mode, "per_epsilon": per_eps}
    if scalar:
        header = ["n", "log_beta_n", "rate_n"]
        rows_csv = [
            [n, lb, r]
            for n, lb, r in zip(n_list, per_eps[0]["log_beta_n"], per_eps[0]["rate_n"])
        ]
    else:
        header = ["epsilon", "n", "log_beta_n", "rate_n"]
        rows_csv = [
            [e["epsilon"], n, lb, r]
            for e in per_eps
            for n, lb, r in zip(e["n_list"], e["log_beta_n"], e["rate_n"])
        ]
    return results, checks, header, rows_csv


# ---------------------------------------------------------------------------
# sanov


def _build_event(event_params: dict) -> SanovEvent:
    relation_map = {">=": "ge", "<=": "le"}
    constraints = tuple(
        HalfSpace(tuple(c["coeffs"]), float(c["bound"]), relation_map[c["relation"]], c["strict"])
        for c in event_params["constraints"]
    )
    return SanovEvent(constraints)


def _run_sanov(params: dict, seed: int):
    p = ClassicalDistribution(params["p"])
    event = _build_event(params["event"])
    n_list = params["n_list"]
    slack = params["slack_factor"]
    k = p.alphabet_size
    rate = sanov_rate(p, event, params["grid_resolution"], params["refine_rounds"])
    per_n = []
    checks = []
    for n in n_list:
        log_q = sanov_q_n_exact(p, n, event)
        normalized = log_q / n
        bound = slack * k * math.log(n + 1) / n
        if math.isinf(rate):
            deviation = 0.0 if math.isinf(normalized) else INF
        else:
            deviation = abs(normalized + rate)
        per_n.append(
            {"n": n, "log_q_n": log_q, "normalized": normalized, "bound": bound}
        )
        checks.append(_check(f"sanov_sandwich_n{n}", deviation, bound))
    results = {"rate": rate, "per_n": per_n}
    header = ["n", "log_q_n", "rate_n", "bound_n"]
    rows = [[row["n"], row["log_q_n"], -row["normalized"], row["bound"]] for row in per_n]
    return results, checks, header, rows


# ---------------------------------------------------------------------------
# chernoff


def _run_chernoff(params: dict, seed: int):
    p = ClassicalDistribution(params["p"])
    q = ClassicalDistribution(params["q"])
    n_list = params["n_list"]
    rel_tol = params["rel_tol"]
    search = chernoff_exponent(lambda t: classical_f_t(p, q, t), params["search_tol"])
    reference = -search.exponent
    per_prior = []
    checks = []
    for pi1, pi2 in params["priors"]:
        log_r = [bayes_error_exact(p, q, pi1, pi2, n) for n in n_list]
        fitted = rate_fit(n_list, log_r)
        per_prior.append(
            {"pi1": pi1, "pi2": pi2, "log_bayes_error": log_r, "fitted_rate": fitted}
        )
        checks.append(
            _check(
                f"chernoff_rate_pi1_{pi1:g}",
                abs(fitted - reference) / reference if reference > 0 else abs(fitted),
                rel_tol,
            )
        )
    fitted_rates = [entry["fitted_rate"] for entry in per_prior]
    if len(fitted_rates) > 1 and reference > 0:
        spread = (max(fitted_rates) - min(fitted_rates)) / reference
        checks.append(_check("chernoff_prior_independence", spread, rel_tol))
    results = {
        "t_star": search.t_star,
        "exponent": search.exponent,
        "reference_rate": reference,
        "per_prior": per_prior,
    }
    header = ["pi1", "pi2", "n", "log_bayes_error"]
    rows = [
        [entry["pi1"], entry["pi2"], n, lr]
        for entry in per_prior
        for n, lr in zip(n_list, entry["log_bayes_error"])
    ]
    return results, checks, header, rows


# ---------------------------------------------------------------------------
# divergence-props


def _sub(seed: int, label: str, index: int) -> int:
    return derive_seed(seed, label, index)


def _random_pair(seed: int, label: str, index: int, k: int, floor: float = 0.0):
    p = random_probability_vector(k, _sub(seed, label + "-p", index), floor)
    q = random_probability_vector(k, _sub(seed, label + "-q", index), floor)
    return p, q


def _rotate(state: DensityMatrix, u: np.ndarray) -> DensityMatrix:
    return DensityMatrix(u @ state.matrix @ u.conj().T)


def _commuting_pair(seed: int, index: int, dim: int):
    u = random_unitary(dim, _sub(seed, "commuting-u", index))
    ev_p = random_probability_vector(dim, _sub(seed, "commuting-p", index), floor=0.01)
    ev_q = random_probability_vector(dim, _sub(seed, "commuting-q", index), floor=0.01)
    rho = DensityMatrix((u * ev_p.probs) @ u.conj().T)
    sigma = DensityMatrix((u * ev_q.probs) @ u.conj().T)
    return rho, sigma, basis_pvm(u)


def _suite_nonnegativity(seed: int, cases: int) -> float:
    worst = INF
    rng = np.random.default_rng(derive_seed(seed, "nonneg-driver"))
    for i in range(cases):
        alpha = float(rng.uniform(-1.0, 1.0))
        family = i % 4
        if family in (0, 1):
            k = int(rng.integers(2, 7))
            p, q = _random_pair(seed, "nonneg", i, k)
            value = kl(p, q) if family == 0 else classical_alpha_div(p, q, alpha)
        else:
            dim = int(rng.integers(2, 9))
            rho = random_density(dim, dim, _sub(seed, "nonneg-rho", i))
            sigma = random_density(dim, dim, _sub(seed, "nonneg-sigma", i))
            value = (
                quantum_relative_entropy(rho, sigma)
                if family == 2
                else quantum_alpha_div(rho, sigma, alpha)
            )
        if math.isfinite(value):
            worst = min(worst, value)
    return worst


def _suite_unitary_invariance(seed: int, cases: int) -> float:
    drift = 0.0
    rng = np.random.default_rng(derive_seed(seed, "invariance-driver"))
    for i in range(cases):
        dim = int(rng.integers(2, 9))
        rho = random_density(dim, dim, _sub(seed, "invariance-rho", i))
        sigma = random_density(dim, dim, _sub(seed, "invariance-sigma", i))
        u = random_unitary(dim, _sub(seed, "invariance-u", i))
        rho_u, sigma_u = _rotate(rho, u), _rotate(sigma, u)
        drift = max(
            drift,
            abs(quantum_relative_entropy(rho_u, sigma_u) - quantum_relative_entropy(rho, sigma)),
        )
        for alpha in (-0.5, 0.0, 0.5):
            drift = max(
                drift,
                abs(quantum_alpha_div(rho_u, sigma_u, alpha) - quantum_alpha_div(rho, sigma, alpha)),
            )
    return drift


def _suite_data_processing(seed: int, cases: int) -> float:
    worst = INF
    rng = np.random.default_rng(derive_seed(seed, "dpi-driver"))
    for i in range(cases):
        dim = int(rng.integers(2, 5))
        rho = random_density(dim, dim, _sub(seed, "dpi-rho", i))
        sigma = random_density(dim, dim, _sub(seed, "dpi-sigma", i))
        povm = random_povm(dim, dim + 1, _sub(seed, "dpi-povm", i))
        for alpha in _ALPHA_SET:
            gap = hot_report(rho, sigma, povm, alpha).gap
            if gap is not None and math.isfinite(gap):
                worst = min(worst, gap)
    return worst


def _suite_commuting(seed: int, cases: int, alphas=_ALPHA_SET) -> float:
    worst = 0.0
    rng = np.random.default_rng(derive_seed(seed, "commuting-driver"))
    for i in range(cases):
        dim = int(rng.integers(2, 9))
        rho, sigma, pvm = _commuting_pair(seed, i, dim)
        for alpha in alphas:
            gap = hot_report(rho, sigma, pvm, alpha).gap
            worst = max(worst, abs(gap))
    return worst


def _suite_skew_symmetry(seed: int, cases: int) -> float:
    worst = 0.0
    rng = np.random.default_rng(derive_seed(seed, "skew-driver"))
    for i in range(cases):
        alpha = float(rng.uniform(-1.0, 1.0))
        k = int(rng.integers(2, 6))
        p, q = _random_pair(seed, "skew", i, k)
        worst = max(
            worst, abs(classical_alpha_div(p, q, alpha) - classical_alpha_div(q, p, -alpha))
        )
        dim = int(rng.integers(2, 6))
        rho = random_density(dim, dim, _sub(seed, "skew-rho", i))
        sigma = random_density(dim, dim, _sub(seed, "skew-sigma", i))
        worst = max(
            worst, abs(quantum_alpha_div(rho, sigma, alpha) - quantum_alpha_div(sigma, rho, -alpha))
        )
    return worst


def _conditioned_density(dim: int, seed: int) -> DensityMatrix:
    """Full-rank density bounded away from singularity (for boundary limits)."""
    raw = random_density(dim, dim, seed)
    return DensityMatrix(0.9 * raw.matrix + 0.1 * np.eye(dim) / dim)


def _suite_boundary_continuity(seed: int, cases: int) -> float:
    worst = 0.0
    delta = 1e-4
    rng = np.random.default_rng(derive_seed(seed, "boundary-driver"))
    for i in range(cases):
        k = 2 + (i % 4)
        p, q = _random_pair(seed, "boundary", i, k, floor=0.05)
        worst = max(worst, abs(classical_alpha_div(p, q, -1.0 + delta) - kl(p, q)))
        worst = max(worst, abs(classical_alpha_div(p, q, 1.0 - delta) - kl(q, p)))
        dim = int(rng.integers(2, 9))
        rho = _conditioned_density(dim, _sub(seed, "boundary-rho", i))
        sigma = _conditioned_density(dim, _sub(seed, "boundary-sigma", i))
        worst = max(
            worst,
            abs(quantum_alpha_div(rho, sigma, -1.0 + delta) - quantum_relative_entropy(rho, sigma)),
        )
        worst = max(
            worst,
            abs(quantum_alpha_div(rho, sigma, 1.0 - delta) - quantum_relative_entropy(sigma, rho)),
        )
    return worst


def _suite_log_convexity(seed: int, cases: int) -> float:
    worst = INF
    rng = np.random.default_rng(derive_seed(seed, "convexity-driver"))
    grid = np.linspace(0.0, 1.0, 101)
    for i in range(cases):
        k = int(rng.integers(2, 6))
        p, q = _random_pair(seed, "convexity", i, k)
        values = np.array([math.log(classical_f_t(p, q, t)) for t in grid])
        second = values[2:] - 2.0 * values[1:-1] + values[:-2]
        worst = min(worst, float(second.min()))
    return worst


def _suite_overlap_domination(seed: int, cases: int):
    worst_gap = INF
    grid = np.linspace(0.0, 1.0, 21)
    rng = np.random.default_rng(derive_seed(seed, "overlap-driver"))
    for i in range(cases):
        dim = int(rng.integers(2, 5))
        rho = random_density(dim, dim, _sub(seed, "overlap-rho", i))
        sigma = random_density(dim, dim, _sub(seed, "overlap-sigma", i))
        povm = random_povm(dim, dim + 1, _sub(seed, "overlap-povm", i))
        p = born_distribution(rho, povm)
        q = born_distribution(sigma, povm)
        for t in grid:
            worst_gap = min(worst_gap, classical_f_t(p, q, t) - quantum_f_t(rho, sigma, t))
    worst_eq = 0.0
    for i in range(max(1, cases // 4)):
        dim = int(rng.integers(2, 9))
        rho, sigma, pvm = _commuting_pair(derive_seed(seed, "overlap-commuting"), i, dim)
        p = born_distribution(rho, pvm)
        q = born_distribution(sigma, pvm)
        for t in grid:
            worst_eq = max(worst_eq, abs(classical_f_t(p, q, t) - quantum_f_t(rho, sigma, t)))
    return worst_gap, worst_eq


def _run_divergence_props(params: dict, seed: int):
    nonneg = _suite_nonnegativity(seed, params["nonneg_cases"])
    drift = _suite_unitary_invariance(seed, params["invariance_cases"])
    dpi = _suite_data_processing(seed, params["dpi_cases"])
    commuting = _suite_commuting(seed, params["commuting_cases"])
    skew = _suite_skew_symmetry(seed, params["skew_cases"])
    boundary = _suite_boundary_continuity(seed, params["boundary_cases"])
    convexity = _suite_log_convexity(seed, params["convexity_cases"])
    overlap_gap, overlap_eq = _suite_overlap_domination(seed, params["overlap_cases"])
    checks = [
        _check("nonnegativity_min", nonneg, 0.0, ">="),
        _check("unitary_invariance_drift", drift, 1e-9),
        _check("data_processing_min_gap", dpi, -1e-9, ">="),
        _check("commuting_equality_gap", commuting, 1e-9),
        _check("skew_symmetry_drift", skew, 1e-12),
        _check("alpha_boundary_continuity", boundary, 1e-3),
        _check("log_convexity_min_second_difference", convexity, -1e-10, ">="),
        _check("measured_dominates_quantum_overlap", overlap_gap, -1e-9, ">="),
        _check("commuting_overlap_equality", overlap_eq, 1e-9),
    ]
    results = {check["name"]: check["value"] for check in checks}
    header = ["check", "value", "tolerance", "pass"]
    rows = [[c["name"], c["value"], c["tolerance"], c["pass"]] for c in checks]
    return results, checks, header, rows


# ---------------------------------------------------------------------------
# hot


def _run_hot(params: dict, seed: int):
    def to_matrix(rows):
        return np.array([[complex(e[0], e[1]) for e in row] for row in rows])

    rho = DensityMatrix(to_matrix(params["rho"]))
    sigma = DensityMatrix(to_matrix(params["sigma"]))
    measurement = Measurement(tuple(to_matrix(e) for e in params["effects"]))
    gap_tol = params["gap_tol"]
    per_alpha = []
    checks = []
    for alpha in params["alphas"]:
        rep = hot_report(rho, sigma, measurement, alpha)
        per_alpha.append(
            {"alpha": alpha, "quantum": rep.quantum, "measured": rep.measured, "gap": rep.gap}
        )
        gap_value = INF if rep.gap is None else rep.gap
        checks.append(_check(f"gap_nonnegative_alpha{alpha:g}", gap_value, -gap_tol, ">="))
        if params["expect_zero_gap"]:
            zero_value = INF if rep.gap is None or math.isinf(rep.gap) else abs(rep.gap)
            checks.append(_check(f"gap_zero_alpha{alpha:g}", zero_value, gap_tol))
    results = {"per_alpha": per_alpha}
    header = ["alpha", "quantum", "measured", "gap"]
    rows = [[e["alpha"], e["quantum"], e["measured"], e["gap"]] for e in per_alpha]
    return results, checks, header, rows


# ---------------------------------------------------------------------------
# modelsel


def _build_model(spec: dict) -> InducedModel:
    if spec["type"] == "binary":
        return InducedModel.binary_family(spec["points"], spec["d"])
    grid = ParamGrid.uniform([0.0])
    return InducedModel(grid, np.array([spec["probs"]], dtype=float), spec["d"])


def _run_modelsel(params: dict, seed: int):
    true_dist = ClassicalDistribution(params["true_dist"])
    n = params["n"]
    m = params["num_datasets"]
    beta = params["beta"]
    if params["mode"] == "selection":
        models = [_build_model(spec) for spec in params["models"]]
        priors = [uniform_prior(model) for model in models]
        expected = params["expected_model"]
        threshold = params["consistency_threshold"]
        aic_hits = 0
        waic_hits = 0
        rows = []
        for i in range(m):
            data = sample_iid(true_dist, n, derive_seed(seed, "modelsel-data", i))
            aics = [aic(model, data) for model in models]
            waics = [waic(model, prior, beta, data) for model, prior in zip(models, priors)]
            pick_aic = select_model(aics)
            pick_waic = select_model(waics)
            aic_hits += pick_aic == expected
            waic_hits += pick_waic == expected
            rows.append([i, *aics, *waics, pick_aic, pick_waic])
        frac_aic = aic_hits / m
        frac_waic = waic_hits / m
        results = {
            "mode": "selection",
            "expected_model": expected,
            "aic_consistency": frac_aic,
            "waic_consistency": frac_waic,
            "num_datasets": m,
        }
        checks = [
            _check("aic_selection_consistency", frac_aic, threshold, ">="),
            _check("waic_selection_consistency", frac_waic, threshold, ">="),
        ]
        labels_a = [f"aic_{j}" for j in range(len(models))]
        labels_w = [f"waic_{j}" for j in range(len(models))]
        header = ["dataset", *labels_a, *labels_w, "aic_choice", "waic_choice"]
        return results, checks, header, rows

    model = _build_model(params["model"])
    prior = uniform_prior(model)
    se_factor = params["se_factor"]
    waics = np.empty(m)
    gens = np.empty(m)
    rows = []
    for i in range(m):
        data = sample_iid(true_dist, n, derive_seed(seed, "modelsel-data", i))
        predictive = escort_predictive(model, prior, beta, data)
        w = waic(model, prior, beta, data)
        g = -float(true_dist.probs @ np.log(predictive.probs.probs))
        waics[i] = w
        gens[i] = g
        rows.append([i, w, g])
    se_w = float(np.std(waics, ddof=1) / math.sqrt(m))
    se_g = float(np.std(gens, ddof=1) / math.sqrt(m))
    combined = math.hypot(se_w, se_g)
    gap = abs(float(waics.mean()) - float(gens.mean()))
    results = {
        "mode": "waic-vs-gen",
        "mean_waic": float(waics.mean()),
        "mean_generalization": float(gens.mean()),
        "se_waic": se_w,
        "se_generalization": se_g,
        "combined_se": combined,
        "num_datasets": m,
    }
    checks = [_check("waic_tracks_generalization", gap, se_factor * combined)]
    header = ["dataset", "waic", "gen_loss"]
    return results, checks, header, rows


# ---------------------------------------------------------------------------
# risk-alpha


def _perturbation_table(im, prior, alpha, n, magnitude, seed, label):
    """Deterministic per-sequence perturbations of the alpha-predictive rule."""
    rng = np.random.default_rng(derive_seed(seed, label))
    table = {}
    k = im.alphabet_size
    for seq in all_sequences(k, n):
        data = SampleSequence(np.asarray(seq, dtype=np.int64), k)
        base = alpha_predictive(im, prior, alpha, data).probs.probs
        delta = (rng.random(k) * 2.0 - 1.0) * magnitude
        perturbed = np.clip(base + delta, 1e-12, None)
        table[seq] = PredictiveDistribution(
            ClassicalDistribution(perturbed / perturbed.sum()), 1.0
        )
    return table


def _run_risk_alpha(params: dict, seed: int):
    im = InducedModel.binary_family(params["points"])
    prior = uniform_prior(im)
    n = params["n"]
    magnitude = params["perturbation_magnitude"]
    num_pert = params["num_perturbations"]
    slack_tol = params["slack_tol"]
    theta = im.grid.points[:, 0]

    def predictive_rule(alpha):
        return lambda data: alpha_predictive(im, prior, alpha, data)

    def mle_rule(data):
        return PredictiveDistribution(im.distribution(mle(im, data)), 1.0)

    def posterior_mean_rule(data):
        pw = escort_posterior(im, prior, 1.0, data)
        mean = float((pw.weights * im.grid.weights) @ theta)
        return PredictiveDistribution(ClassicalDistribution([mean, 1.0 - mean]), 1.0)

    def escort_rule(data):
        return escort_predictive(im, prior, 1.0, data)

    per_alpha = []
    checks = []
    for ai, alpha in enumerate(params["alphas"]):
        risk_pred = risk_alpha(im, prior, predictive_rule(alpha), alpha, n)
        risk_mle = risk_alpha(im, prior, mle_rule, alpha, n)
        risk_mean = risk_alpha(im, prior, posterior_mean_rule, alpha, n)
        risk_escort = risk_alpha(im, prior, escort_rule, alpha, n)
        perturbed_risks = []
        for j in range(num_pert):
            table = _perturbation_table(
                im, prior, alpha, n, magnitude, seed, f"risk-perturb-{ai}-{j}"
            )
            rule = lambda data, table=table: table[tuple(data.outcomes.tolist())]
            perturbed_risks.append(risk_alpha(im, prior, rule, alpha, n))
        competitors = [risk_mle, risk_mean, risk_escort, *perturbed_risks]
        min_slack = min(c - risk_pred for c in competitors)
        per_alpha.append(
            {
                "alpha": alpha,
                "risk_predictive": risk_pred,
                "risk_mle_plugin": risk_mle,
                "risk_posterior_mean_plugin": risk_mean,
                "risk_escort_beta1": risk_escort,
                "min_perturbed_risk": min(perturbed_risks) if perturbed_risks else None,
                "min_slack": min_slack,
            }
        )
        checks.append(_check(f"risk_optimality_alpha{alpha:g}", min_slack, -slack_tol, ">="))
    results = {"per_alpha": per_alpha}
    header = [
        "alpha",
        "risk_predictive",
        "risk_mle_plugin",
        "risk_posterior_mean_plugin",
        "risk_escort_beta1",
        "min_perturbed_risk",
        "min_slack",
    ]
    rows = [
        [
            e["alpha"],
            e["risk_predictive"],
            e["risk_mle_plugin"],
            e["risk_posterior_mean_plugin"],
            e["risk_escort_beta1"],
            e["min_perturbed_risk"],
            e["min_slack"],
        ]
        for e in per_alpha
    ]
    return results, checks, header, rows


_RUNNERS = {
    "stein": _run_stein,
    "sanov": _run_sanov,
    "chernoff": _run_chernoff,
    "divergence-props": _run_divergence_props,
    "hot": _run_hot,
    "modelsel": _run_modelsel,
    "risk-alpha": _run_risk_alpha,
}


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """Execute a validated config; deterministic given (config, seed)."""
    if cfg.experiment not in _RUNNERS:
        raise ValidationError(f"unknown experiment {cfg.experiment!r}")
    start = time.perf_counter()
    results, checks, header, rows = _RUNNERS[cfg.experiment](cfg.parameters, cfg.seed)
    duration = time.perf_counter() - start
    config_echo = {
        "experiment": cfg.experiment,
        "parameters": cfg.parameters,
        "seed": cfg.seed,
    }
    if cfg.output_path is not None:
        config_echo["output_path"] = cfg.output_path
    return ExperimentReport(
        experiment=cfg.experiment,
        config=config_echo,
        results=results,
        checks=checks,
        csv_header=header,
        csv_rows=rows,
        duration_seconds=duration,
        version=__version__,
    )
