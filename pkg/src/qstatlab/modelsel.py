"""Parametric models, escort posteriors, information criteria, and risk.

The parameter space is a finite quadrature grid with positive cell weights,
so every integral over the parameter becomes a weighted sum and the paper
identities (posterior normalization, the mixture collapse of the predictive
at alpha = -1, the optimality of the alpha-predictive rule) hold exactly.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp

from .divergence import INF, classical_alpha_div
from .errors import CapacityError, DegeneratePosteriorError, ValidationError
from .largedev import SampleSequence
from .matcore import SUPPORT_TOL, ClassicalDistribution, DensityMatrix, Measurement, born_distribution

#: Largest admissible number of data sequences for exact risk enumeration.
SEQUENCE_GUARD = 10**6


@dataclass(frozen=True, eq=False)
class ParamGrid:
    """Finite quadrature grid on a compact parameter box.

    ``points`` has shape (G, d); ``weights`` are positive cell weights.  When
    the bounding ``box`` is supplied, the weights must sum to its volume
    (uniform cell weighting).
    """

    points: np.ndarray
    weights: np.ndarray
    box: tuple = None

    def __post_init__(self):
        points = np.atleast_2d(np.asarray(self.points, dtype=np.float64))
        if points.shape[0] == 1 and points.shape[1] > 1 and np.asarray(self.points).ndim == 1:
            points = points.T
        weights = np.asarray(self.weights, dtype=np.float64).ravel()
        if points.shape[0] != weights.size:
            raise ValidationError("one weight per grid point required")
        if weights.size == 0 or np.any(weights <= 0.0):
            raise ValidationError("quadrature weights must be positive")
        if self.box is not None:
            volume = 1.0
            for lo, hi in self.box:
                volume *= hi - lo
            if abs(weights.sum() - volume) > 1e-9:
                raise ValidationError(
                    f"weights sum to {weights.sum()!r}, box volume is {volume!r}"
                )
        points.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "weights", weights)

    @property
    def size(self) -> int:
        return self.weights.size

    @property
    def dim_theta(self) -> int:
        return self.points.shape[1]

    @classmethod
    def uniform(cls, points_1d, box=None) -> "ParamGrid":
        """1-D grid with equal cell weights spanning ``box`` (default: the
        hull of the points padded by half a cell)."""
        pts = np.asarray(points_1d, dtype=np.float64).ravel()
        if box is None:
            if pts.size > 1:
                half = (pts[1] - pts[0]) / 2.0
            else:
                half = 0.5
            box = ((float(pts.min() - half), float(pts.max() + half)),)
        volume = box[0][1] - box[0][0]
        weights = np.full(pts.size, volume / pts.size)
        return cls(pts.reshape(-1, 1), weights, box)


@dataclass(frozen=True, eq=False)
class QuantumModel:
    """Family of density matrices indexed by a parameter grid."""

    grid: ParamGrid
    states: tuple
    model_dim: int

    def __post_init__(self):
        if len(self.states) != self.grid.size:
            raise ValidationError("one state per grid point required")
        dims = {state.dim for state in self.states}
        if len(dims) != 1:
            raise ValidationError("all states must share one Hilbert-space dimension")
        object.__setattr__(self, "states", tuple(self.states))


@dataclass(frozen=True, eq=False)
class InducedModel:
    """Outcome distributions induced by a model under one measurement.

    ``dists[g, k]`` is the probability of outcome k at grid point g;
    ``model_dim`` is the parameter count d_j used by the information criteria.
    """

    grid: ParamGrid
    dists: np.ndarray
    model_dim: int
    log_dists: np.ndarray = field(init=False)

    def __post_init__(self):
        dists = np.asarray(self.dists, dtype=np.float64)
        if dists.ndim != 2 or dists.shape[0] != self.grid.size:
            raise ValidationError("dists must be a (grid size, alphabet) matrix")
        if dists.min() < -SUPPORT_TOL:
            raise ValidationError("negative probability in induced model")
        dists = np.where(dists < 0.0, 0.0, dists)
        if np.max(np.abs(dists.sum(axis=1) - 1.0)) > 1e-10:
            raise ValidationError("induced rows must sum to 1")
        log_dists = np.where(dists > SUPPORT_TOL, np.log(np.maximum(dists, SUPPORT_TOL)), -INF)
        dists.setflags(write=False)
        log_dists.setflags(write=False)
        object.__setattr__(self, "dists", dists)
        object.__setattr__(self, "log_dists", log_dists)

    @property
    def alphabet_size(self) -> int:
        return self.dists.shape[1]

    def distribution(self, theta_index: int) -> ClassicalDistribution:
        return ClassicalDistribution(self.dists[theta_index])

    @classmethod
    def binary_family(cls, points, model_dim: int = 1, box=None) -> "InducedModel":
        """Coin family p_theta = (theta, 1 - theta) over a 1-D grid."""
        grid = ParamGrid.uniform(points, box)
        theta = grid.points[:, 0]
        if np.any(theta <= 0.0) or np.any(theta >= 1.0):
            raise ValidationError("binary family needs theta strictly inside (0, 1)")
        return cls(grid, np.column_stack([theta, 1.0 - theta]), model_dim)


@dataclass(frozen=True, eq=False)
class PosteriorWeights:
    """Posterior density w.r.t. the grid quadrature, with its escort exponent.

    ``sum(weights * grid.weights) == 1`` by construction.
    """

    weights: np.ndarray
    beta: float


@dataclass(frozen=True, eq=False)
class PredictiveDistribution:
    """Predictive outcome distribution with its normalizer (1 for mixtures)."""

    probs: ClassicalDistribution
    normalizer: float = 1.0


@dataclass(frozen=True)
class PredictiveValidation:
    """Support-condition report: ok iff each model has a grid-independent
    support; violations are (model index, grid index, support) triples."""

    ok: bool
    violations: tuple


def induce_model(qm: QuantumModel, measurement: Measurement) -> InducedModel:
    """Born distributions of every state in the model under one measurement."""
    if qm.states[0].dim != measurement.dim:
        raise ValidationError("state and measurement dimensions differ")
    dists = np.vstack([born_distribution(state, measurement).probs for state in qm.states])
    return InducedModel(qm.grid, dists, qm.model_dim)


def validate_predictive_measurement(models) -> PredictiveValidation:
    """Check that within each model every grid point has the same support.

    The common reference measure is the counting measure on the shared
    alphabet, so domination is automatic; only support constancy can fail.
    """
    models = list(models)
    if not models:
        raise ValidationError("need at least one model")
    alphabet = {m.alphabet_size for m in models}
    if len(alphabet) != 1:
        raise ValidationError("models must share one outcome alphabet")
    violations = []
    for j, model in enumerate(models):
        supports = [tuple(np.nonzero(row > SUPPORT_TOL)[0].tolist()) for row in model.dists]
        reference = supports[0]
        for g, support in enumerate(supports):
            if support != reference:
                violations.append((j, g, support))
    return PredictiveValidation(len(violations) == 0, tuple(violations))


def _counts(im: InducedModel, data: SampleSequence) -> np.ndarray:
    if data.alphabet_size != im.alphabet_size:
        raise ValidationError("data alphabet does not match the model")
    return np.bincount(data.outcomes, minlength=im.alphabet_size)


def log_likelihood(im: InducedModel, theta_index: int, data: SampleSequence) -> float:
    """sum_i ln p_theta(x_i); -inf when an outcome falls outside the support."""
    if not 0 <= theta_index < im.grid.size:
        raise ValidationError(f"grid index {theta_index} out of range")
    counts = _counts(im, data)
    logs = im.log_dists[theta_index]
    with np.errstate(invalid="ignore"):
        terms = np.where(counts > 0, counts * logs, 0.0)
    return float(terms.sum())


def _log_likelihood_vector(im: InducedModel, data: SampleSequence) -> np.ndarray:
    counts = _counts(im, data)
    with np.errstate(invalid="ignore"):
        terms = np.where(counts[None, :] > 0, counts[None, :] * im.log_dists, 0.0)
    return terms.sum(axis=1)


def mle(im: InducedModel, data: SampleSequence) -> int:
    """Grid index maximizing the likelihood; ties break to the smallest index."""
    if im.grid.size == 0:
        raise ValidationError("empty grid")
    return int(np.argmax(_log_likelihood_vector(im, data)))


def _check_prior(im: InducedModel, prior) -> np.ndarray:
    prior = np.asarray(prior, dtype=np.float64).ravel()
    if prior.size != im.grid.size:
        raise ValidationError("prior must assign a density to every grid point")
    if np.any(prior < 0.0):
        raise ValidationError("prior must be nonnegative")
    if abs(float(prior @ im.grid.weights) - 1.0) > 1e-9:
        raise ValidationError("prior must integrate to 1 over the grid quadrature")
    return prior


def uniform_prior(im: InducedModel) -> np.ndarray:
    """Constant prior density normalized against the grid quadrature."""
    total = im.grid.weights.sum()
    return np.full(im.grid.size, 1.0 / total)


def escort_posterior(
    im: InducedModel, prior, beta: float, data: SampleSequence
) -> PosteriorWeights:
    """Posterior density proportional to exp(beta log-likelihood) * prior,
    normalized against the grid quadrature via log-sum-exp."""
    if beta <= 0.0:
        raise ValidationError("escort exponent beta must be positive")
    prior = _check_prior(im, prior)
    loglik = _log_likelihood_vector(im, data)
    with np.errstate(divide="ignore"):
        log_raw = beta * loglik + np.log(prior)
    log_mass = log_raw + np.log(im.grid.weights)
    log_z = logsumexp(log_mass)
    if not np.isfinite(log_z):
        raise DegeneratePosteriorError("all posterior weights vanish for these data")
    return PosteriorWeights(np.exp(log_raw - log_z), float(beta))


def _posterior_mass(im: InducedModel, pw: PosteriorWeights) -> np.ndarray:
    return pw.weights * im.grid.weights


def escort_predictive(
    im: InducedModel, prior, beta: float, data: SampleSequence
) -> PredictiveDistribution:
    """Posterior mixture of the model distributions (normalizer exactly 1)."""
    pw = escort_posterior(im, prior, beta, data)
    probs = _posterior_mass(im, pw) @ im.dists
    return PredictiveDistribution(ClassicalDistribution(probs), 1.0)


def functional_variance(im: InducedModel, prior, beta: float, data: SampleSequence) -> float:
    """sum_i posterior-variance of ln p_theta(x_i) under the escort posterior."""
    if len(data) < 1:
        raise ValidationError("functional variance needs at least one observation")
    pw = escort_posterior(im, prior, beta, data)
    mass = _posterior_mass(im, pw)
    active = mass > 0.0
    counts = _counts(im, data)
    total = 0.0
    for k in np.nonzero(counts)[0]:
        logs = im.log_dists[active, k]
        first = float(mass[active] @ logs)
        second = float(mass[active] @ (logs * logs))
        total += counts[k] * (second - first * first)
    return total


def aic(im: InducedModel, data: SampleSequence) -> float:
    """-(1/n) max log-likelihood + d_j / n."""
    n = len(data)
    if n < 1:
        raise ValidationError("AIC needs at least one observation")
    best = log_likelihood(im, mle(im, data), data)
    return -best / n + im.model_dim / n


def waic(im: InducedModel, prior, beta: float, data: SampleSequence) -> float:
    """-(1/n) sum_i ln p_predictive(x_i) + (beta/n) functional variance."""
    n = len(data)
    if n < 1:
        raise ValidationError("WAIC needs at least one observation")
    predictive = escort_predictive(im, prior, beta, data)
    counts = _counts(im, data)
    observed = counts > 0
    log_pred = np.log(predictive.probs.probs[observed])
    term1 = -float(counts[observed] @ log_pred) / n
    return term1 + beta / n * functional_variance(im, prior, beta, data)


def select_model(criteria) -> int:
    """Index of the smallest criterion value; ties break to the smallest index."""
    values = list(criteria)
    if not values:
        raise ValidationError("need at least one criterion value")
    best = min(range(len(values)), key=lambda i: values[i])
    return best


def alpha_predictive(
    im: InducedModel, prior, alpha: float, data: SampleSequence
) -> PredictiveDistribution:
    """Power-mean aggregation of the model densities under the beta = 1
    posterior, normalized; the stored normalizer is the pre-normalization
    total mass C.

    alpha = -1 collapses to the ordinary Bayes mixture (C = 1); alpha = +1
    uses the exponential of the posterior-mean log density.
    """
    alpha = float(alpha)
    if not -1.0 <= alpha <= 1.0:
        raise ValidationError(f"alpha must lie in [-1, 1], got {alpha!r}")
    pw = escort_posterior(im, prior, 1.0, data)
    mass = _posterior_mass(im, pw)
    active = mass > 0.0
    if alpha == 1.0:
        # elementwise product keeps -inf log densities exact (no BLAS with infs)
        contrib = mass[active, None] * im.log_dists[active]
        raw = np.exp(contrib.sum(axis=0))
    else:
        exponent = (1.0 - alpha) / 2.0
        raw = (mass[active] @ im.dists[active] ** exponent) ** (1.0 / exponent)
    normalizer = float(raw.sum())
    if normalizer <= SUPPORT_TOL:
        raise DegeneratePosteriorError("alpha-predictive mass vanished")
    return PredictiveDistribution(ClassicalDistribution(raw / normalizer), normalizer)


def barycenter_state(weighted_states) -> DensityMatrix:
    """Convex combination sum_k w_k rho_k of density matrices."""
    pairs = list(weighted_states)
    if not pairs:
        raise ValidationError("need at least one (weight, state) pair")
    weights = np.array([w for w, _ in pairs], dtype=np.float64)
    if np.any(weights < 0.0) or abs(weights.sum() - 1.0) > 1e-10:
        raise ValidationError("weights must be nonnegative and sum to 1 within 1e-10")
    dim = pairs[0][1].dim
    total = np.zeros((dim, dim), dtype=np.complex128)
    for w, state in pairs:
        total += w * state.matrix
    return DensityMatrix(total)


def all_sequences(alphabet_size: int, n: int):
    """Deterministic enumeration of all alphabet_size**n outcome sequences."""
    return itertools.product(range(alphabet_size), repeat=n)


def risk_alpha(im: InducedModel, prior, rule, alpha: float, n: int) -> float:
    """Exact alpha-divergence risk of a predictive rule.

    Sums classical_alpha_div(p_theta, rule(data), alpha) times the sequence
    probability under theta times the prior mass of theta, over all K^n data
    sequences and all grid points.  Guarded at K^n <= 1e6.
    """
    prior = _check_prior(im, prior)
    k = im.alphabet_size
    if n < 0:
        raise ValidationError("n must be >= 0")
    if k**n > SEQUENCE_GUARD:
        raise CapacityError(f"{k}^{n} sequences exceed the {SEQUENCE_GUARD} guard")
    prior_mass = prior * im.grid.weights
    theta_dists = [im.distribution(g) for g in range(im.grid.size)]
    total = 0.0
    for seq in all_sequences(k, n):
        data = SampleSequence(np.asarray(seq, dtype=np.int64), k)
        counts = np.bincount(data.outcomes, minlength=k)
        predictive = rule(data)
        likelihoods = np.prod(im.dists**counts[None, :], axis=1)
        for g in range(im.grid.size):
            weight = prior_mass[g] * likelihoods[g]
            if weight == 0.0:
                continue
            div = classical_alpha_div(theta_dists[g], predictive.probs, alpha)
            if math.isinf(div):
                return INF
            total += weight * div
    return total
