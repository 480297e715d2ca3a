"""Sampling, Neyman-Pearson testing, and exact large-deviation oracles.

Error probabilities are computed exactly over type classes (empirical-count
vectors) with log-gamma multinomial weights, accumulated in the log domain:
the second-kind error at n = 5000 underflows linear-domain floats, and the
exactness of these tail sums is the whole point of the oracle.

Type-class enumeration is guarded: C(n + K - 1, K - 1) must not exceed 1e7.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, logsumexp

from .divergence import INF, kl
from .errors import CapacityError, ValidationError
from .matcore import SUPPORT_TOL, ClassicalDistribution

#: Largest admissible number of type classes for exact enumeration.
TYPE_CLASS_GUARD = 10**7


@dataclass(frozen=True, eq=False)
class SampleSequence:
    """Outcome indices drawn i.i.d. from a distribution over K outcomes."""

    outcomes: np.ndarray
    alphabet_size: int
    seed: int = 0

    def __post_init__(self):
        outcomes = np.asarray(self.outcomes, dtype=np.int64)
        if outcomes.ndim != 1:
            raise ValidationError("outcomes must be a flat index sequence")
        if outcomes.size and (outcomes.min() < 0 or outcomes.max() >= self.alphabet_size):
            raise ValidationError("outcome index outside [0, alphabet_size)")
        outcomes.setflags(write=False)
        object.__setattr__(self, "outcomes", outcomes)

    def __len__(self) -> int:
        return self.outcomes.size


@dataclass(frozen=True, eq=False)
class TypeVector:
    """Empirical counts of each outcome in a sample of size n."""

    counts: np.ndarray

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        if counts.ndim != 1 or counts.size == 0 or counts.min() < 0:
            raise ValidationError("counts must be a nonnegative vector")
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)

    @property
    def n(self) -> int:
        return int(self.counts.sum())

    def as_distribution(self) -> ClassicalDistribution:
        if self.n == 0:
            raise ValidationError("cannot normalize an empty type")
        return ClassicalDistribution(self.counts / self.n)


@dataclass(frozen=True, eq=False)
class NPTest:
    """Likelihood-ratio threshold test: accept H0 iff the normalized
    log-likelihood ratio is at most ``eta``."""

    reference_p: ClassicalDistribution
    reference_q: ClassicalDistribution
    eta: float

    def __post_init__(self):
        if not set(self.reference_p.support) <= set(self.reference_q.support):
            raise ValidationError("NP test requires supp(p) within supp(q)")


@dataclass(frozen=True)
class ErrorPair:
    """Type-I and type-II error probabilities of a test at one threshold."""

    alpha_n: float
    beta_n: float


@dataclass(frozen=True)
class BetaNResult:
    """Optimal type-II error at a type-I budget: log beta, the threshold that
    achieves it, and the type-I level actually achieved there."""

    log_beta: float
    eta: float
    achieved_alpha: float


@dataclass(frozen=True)
class HalfSpace:
    """Constraint c . nu >= bound (relation "ge") or c . nu <= bound ("le")
    on the normalized type nu; ``strict`` toggles the open version."""

    coeffs: tuple
    bound: float
    relation: str = "ge"
    strict: bool = False

    def __post_init__(self):
        if self.relation not in ("ge", "le"):
            raise ValidationError("relation must be 'ge' or 'le'")
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))

    def satisfied(self, nu: np.ndarray):
        value = np.asarray(nu) @ np.asarray(self.coeffs)
        if self.relation == "ge":
            return value > self.bound if self.strict else value >= self.bound
        return value < self.bound if self.strict else value <= self.bound


@dataclass(frozen=True)
class SanovEvent:
    """Finite conjunction of half-space constraints on the type simplex."""

    constraints: tuple

    def __post_init__(self):
        if len(self.constraints) == 0:
            raise ValidationError("event needs at least one constraint")

    def contains(self, nu: np.ndarray):
        result = None
        for c in self.constraints:
            hit = c.satisfied(nu)
            result = hit if result is None else (result & hit)
        return result


@dataclass(frozen=True)
class SteinResult:
    """Per-n empirical rates -(1/n) ln beta_n and the least-squares fit."""

    per_n: tuple
    fitted_rate: float


def sample_iid(p: ClassicalDistribution, n: int, seed: int) -> SampleSequence:
    """Inversion sampling of n i.i.d. outcomes; deterministic in ``seed``."""
    if n < 1:
        raise ValidationError(f"sample size must be >= 1, got {n!r}")
    rng = np.random.default_rng(seed)
    cdf = np.cumsum(p.probs)
    u = rng.random(n)
    outcomes = np.minimum(np.searchsorted(cdf, u, side="right"), p.alphabet_size - 1)
    return SampleSequence(outcomes, p.alphabet_size, seed)


def _per_outcome_llr(p: ClassicalDistribution, q: ClassicalDistribution) -> np.ndarray:
    """X(k) = -ln(p_k / q_k) per outcome, +/-inf off the supports."""
    x = np.empty(p.alphabet_size)
    for k in range(p.alphabet_size):
        pk, qk = p.probs[k], q.probs[k]
        if qk <= SUPPORT_TOL:
            x[k] = -INF
        elif pk <= SUPPORT_TOL:
            x[k] = INF
        else:
            x[k] = -(math.log(pk) - math.log(qk))
    return x


def normalized_llr(
    s: SampleSequence, p: ClassicalDistribution, q: ClassicalDistribution
) -> float:
    """(1/n) sum_j -ln(p(x_j)/q(x_j)).

    An observed outcome outside supp(q) yields -inf (the likelihood ratio is
    infinite); otherwise an outcome outside supp(p) yields +inf.
    """
    if p.alphabet_size != q.alphabet_size or s.alphabet_size != p.alphabet_size:
        raise ValidationError("alphabet mismatch")
    if len(s) == 0:
        raise ValidationError("empty sample")
    counts = np.bincount(s.outcomes, minlength=p.alphabet_size)
    observed = counts > 0
    if np.any(observed & (q.probs <= SUPPORT_TOL)):
        return -INF
    if np.any(observed & (p.probs <= SUPPORT_TOL)):
        return INF
    x = _per_outcome_llr(p, q)
    return float(np.sum(counts[observed] * x[observed]) / len(s))


def np_decide(s: SampleSequence, test: NPTest) -> int:
    """0 (accept H0) iff the normalized log-likelihood ratio is <= eta."""
    return 0 if normalized_llr(s, test.reference_p, test.reference_q) <= test.eta else 1


def empirical_measure(s: SampleSequence) -> TypeVector:
    """Outcome counts of a sample sequence."""
    if len(s) == 0:
        raise ValidationError("empty sample")
    return TypeVector(np.bincount(s.outcomes, minlength=s.alphabet_size))


def compositions(n: int, k: int) -> np.ndarray:
    """All k-part compositions of n (the type classes of n samples over k
    outcomes), as an integer array of shape (C(n+k-1, k-1), k)."""
    if k == 1:
        return np.array([[n]], dtype=np.int64)
    blocks = []
    for first in range(n + 1):
        rest = compositions(n - first, k - 1)
        col = np.full((rest.shape[0], 1), first, dtype=np.int64)
        blocks.append(np.hstack([col, rest]))
    return np.vstack(blocks)


def _guard_types(n: int, k: int):
    total = math.comb(n + k - 1, k - 1)
    if total > TYPE_CLASS_GUARD:
        raise CapacityError(
            f"{total} type classes for n={n}, K={k} exceed the {TYPE_CLASS_GUARD} guard"
        )


def _safe_log(probs: np.ndarray) -> np.ndarray:
    return np.where(probs > SUPPORT_TOL, np.log(np.maximum(probs, SUPPORT_TOL)), -INF)


def _log_type_probability(counts: np.ndarray, p: ClassicalDistribution) -> np.ndarray:
    """Log probability of each type class under i.i.d. sampling from p."""
    n = int(counts[0].sum())
    log_coeff = gammaln(n + 1) - gammaln(counts + 1).sum(axis=1)
    logs = _safe_log(p.probs)
    with np.errstate(invalid="ignore"):
        terms = np.where(counts > 0, counts * logs[None, :], 0.0)
    return log_coeff + terms.sum(axis=1)


def _error_levels(p: ClassicalDistribution, q: ClassicalDistribution, n: int):
    """Distinct llr levels with per-level and cumulative log probabilities.

    Returns (levels, log_alpha, log_beta) where log_alpha[i] = ln P_p(S > l_i)
    and log_beta[i] = ln P_q(S <= l_i).
    """
    _check_pair(p, q)
    if n < 1:
        raise ValidationError("n must be >= 1")
    _guard_types(n, p.alphabet_size)
    counts = compositions(n, p.alphabet_size)
    log_pp = _log_type_probability(counts, p)
    log_pq = _log_type_probability(counts, q)
    keep = (log_pp > -INF) | (log_pq > -INF)
    counts, log_pp, log_pq = counts[keep], log_pp[keep], log_pq[keep]
    x = _per_outcome_llr(p, q)
    with np.errstate(invalid="ignore"):
        s_values = np.where(counts > 0, counts * x[None, :], 0.0).sum(axis=1) / n
    levels, inverse = np.unique(s_values, return_inverse=True)
    order = np.argsort(inverse, kind="stable")
    sizes = np.bincount(inverse, minlength=levels.size)
    bounds = np.concatenate([[0], np.cumsum(sizes)])
    sorted_pp, sorted_pq = log_pp[order], log_pq[order]
    level_pp = np.array(
        [logsumexp(sorted_pp[bounds[i] : bounds[i + 1]]) for i in range(levels.size)]
    )
    level_pq = np.array(
        [logsumexp(sorted_pq[bounds[i] : bounds[i + 1]]) for i in range(levels.size)]
    )
    tail = np.logaddexp.accumulate(level_pp[::-1])[::-1]
    log_alpha = np.concatenate([tail[1:], [-INF]])
    log_beta = np.logaddexp.accumulate(level_pq)
    return levels, log_alpha, log_beta


def _check_pair(p: ClassicalDistribution, q: ClassicalDistribution):
    if p.alphabet_size != q.alphabet_size:
        raise ValidationError("alphabet mismatch")


def exact_error_curve(p: ClassicalDistribution, q: ClassicalDistribution, n: int):
    """Exact step curve of (eta, (alpha_n, beta_n)) at every achieved llr level.

    alpha_n(eta) = P_p(S_n > eta) and beta_n(eta) = P_q(S_n <= eta), both
    computed from type-class sums.  Values below the float underflow threshold
    appear as exact zeros; use :func:`beta_n_eps` for log-domain tails.
    """
    levels, log_alpha, log_beta = _error_levels(p, q, n)
    return [
        (float(levels[i]), ErrorPair(float(np.exp(log_alpha[i])), float(np.exp(log_beta[i]))))
        for i in range(levels.size)
    ]


def beta_n_eps(
    p: ClassicalDistribution, q: ClassicalDistribution, n: int, eps: float
) -> BetaNResult:
    """Exact optimal type-II error at type-I budget eps (strict alpha < eps).

    Selects the smallest threshold on the exact error curve whose type-I error
    is strictly below ``eps`` and returns the type-II error there in the log
    domain.
    """
    if not 0.0 < eps < 1.0:
        raise ValidationError(f"eps must lie in (0, 1), got {eps!r}")
    levels, log_alpha, log_beta = _error_levels(p, q, n)
    log_eps = math.log(eps)
    for i in range(levels.size):
        if log_alpha[i] < log_eps:
            return BetaNResult(float(log_beta[i]), float(levels[i]), float(np.exp(log_alpha[i])))
    raise AssertionError("unreachable: the top threshold always achieves alpha = 0")


def rate_fit(n_list, log_values, mode: str = "all") -> float:
    """Negated least-squares slope of log values against n.

    ``mode="asymptotic"`` fits only the three largest n.
    """
    n_arr = np.asarray(n_list, dtype=float)
    y = np.asarray(log_values, dtype=float)
    if n_arr.shape != y.shape or n_arr.ndim != 1 or n_arr.size < 2:
        raise ValidationError("need equally long lists with at least two points")
    if mode not in ("all", "asymptotic"):
        raise ValidationError(f"unknown fit mode {mode!r}")
    if mode == "asymptotic" and n_arr.size > 3:
        order = np.argsort(n_arr)[-3:]
        n_arr, y = n_arr[order], y[order]
    slope = np.polyfit(n_arr, y, 1)[0]
    return float(-slope)


def stein_rate(
    p: ClassicalDistribution,
    q: ClassicalDistribution,
    eps: float,
    n_list,
    fit_mode: str = "all",
) -> SteinResult:
    """Exact -(1/n) ln beta_n(eps) per n, plus the fitted decay rate."""
    log_betas = [beta_n_eps(p, q, n, eps).log_beta for n in n_list]
    per_n = tuple(-lb / n for lb, n in zip(log_betas, n_list))
    return SteinResult(per_n, rate_fit(list(n_list), log_betas, fit_mode))


def sanov_q_n_exact(p: ClassicalDistribution, n: int, event: SanovEvent) -> float:
    """ln Q_n of the event that the normalized type satisfies all constraints,
    as an exact type-class sum under i.i.d. sampling from p."""
    if n < 1:
        raise ValidationError("n must be >= 1")
    _guard_types(n, p.alphabet_size)
    counts = compositions(n, p.alphabet_size)
    log_pp = _log_type_probability(counts, p)
    keep = log_pp > -INF
    counts, log_pp = counts[keep], log_pp[keep]
    inside = event.contains(counts / n)
    if not np.any(inside):
        return -INF
    return float(logsumexp(log_pp[inside]))


def sanov_rate(
    p: ClassicalDistribution,
    event: SanovEvent,
    grid_resolution: int = 200,
    refine_rounds: int = 20,
) -> float:
    """inf over the constrained type simplex of kl(nu, p).

    Scans the simplex grid of spacing 1/grid_resolution filtered by the event
    constraints, then refines the best point by coordinate mass transfers with
    the step halved each round; convexity of kl in nu puts the result within
    O(final step) of the true infimum.  Returns ``inf`` when no feasible grid
    point exists or every feasible point carries mass outside supp(p).
    """
    k = p.alphabet_size
    _guard_types(grid_resolution, k)
    grid = compositions(grid_resolution, k) / grid_resolution
    inside = event.contains(grid)
    if not np.any(inside):
        return INF
    candidates = grid[inside]
    logs = _safe_log(p.probs)
    with np.errstate(invalid="ignore"):
        objective = np.where(candidates > 0, candidates * (np.log(np.maximum(candidates, 1e-300)) - logs[None, :]), 0.0).sum(axis=1)
    objective = np.where(np.isnan(objective), INF, objective)
    best_idx = int(np.argmin(objective))
    best, best_value = candidates[best_idx].copy(), float(objective[best_idx])
    if math.isinf(best_value):
        return INF

    def evaluate(nu: np.ndarray) -> float:
        value = 0.0
        for pk, nk in zip(p.probs, nu):
            if nk > 0.0:
                if pk <= SUPPORT_TOL:
                    return INF
                value += nk * (math.log(nk) - math.log(pk))
        return value

    step = 1.0 / grid_resolution
    for _ in range(refine_rounds):
        step /= 2.0
        improved = True
        guard = 0
        while improved and guard < 10000:
            improved = False
            guard += 1
            for i in range(k):
                for j in range(k):
                    if i == j:
                        continue
                    trial = best.copy()
                    trial[i] += step
                    trial[j] -= step
                    if trial[j] < 0.0 or trial[i] > 1.0:
                        continue
                    if not bool(event.contains(trial)):
                        continue
                    value = evaluate(trial)
                    if value < best_value - 1e-15:
                        best, best_value = trial, value
                        improved = True
    return best_value


def bayes_error_exact(
    p: ClassicalDistribution,
    q: ClassicalDistribution,
    pi1: float,
    pi2: float,
    n: int,
) -> float:
    """ln of the exact minimal Bayes mixed error pi1 alpha_n + pi2 beta_n.

    The minimum over all tests is achieved by the MAP rule per type class:
    sum over types of min(pi1 P_p(type), pi2 P_q(type)), in the log domain.
    """
    _check_pair(p, q)
    if not (pi1 > 0.0 and pi2 > 0.0 and abs(pi1 + pi2 - 1.0) <= 1e-10):
        raise ValidationError("priors must be positive and sum to 1")
    if n < 1:
        raise ValidationError("n must be >= 1")
    _guard_types(n, p.alphabet_size)
    counts = compositions(n, p.alphabet_size)
    log_pp = _log_type_probability(counts, p) + math.log(pi1)
    log_pq = _log_type_probability(counts, q) + math.log(pi2)
    log_min = np.minimum(log_pp, log_pq)
    keep = log_min > -INF
    if not np.any(keep):
        return -INF
    return float(logsumexp(log_min[keep]))


def kl_distribution(nu: ClassicalDistribution, p: ClassicalDistribution) -> float:
    """Convenience alias: relative entropy of a normalized type against p."""
    return kl(nu, p)
