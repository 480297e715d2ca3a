"""Classical and quantum relative entropies, alpha-divergences, and overlaps.

Conventions used throughout:

* logarithms are natural (all divergences are in nats);
* ``math.inf`` is the extended value taken when the first argument's support
  is not contained in the second's;
* divergences that come out in [-1e-12, 0) from rounding are clipped to 0;
* matrix powers and logarithms act on the support eigenspace only, so zero
  eigenvalues contribute zero blocks (0^t = 0 for t > 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, ValidationError
from .matcore import (
    SUPPORT_TOL,
    ClassicalDistribution,
    DensityMatrix,
    Measurement,
    born_distribution,
    matrix_function,
    spectral,
)

INF = math.inf

#: Finite divergence values above this negative floor are clipped to zero.
NEGATIVE_CLIP = -1e-12
#: Overlap traces may exceed 1 by at most this much before it is an error.
OVERLAP_SLACK = 1e-10


def _clip_nonnegative(value: float, what: str) -> float:
    if value < NEGATIVE_CLIP:
        raise NumericalError(f"{what} is {value!r}, below the -1e-12 clip")
    return 0.0 if value < 0.0 else value


def _clip_overlap(value: float, what: str) -> float:
    if value > 1.0 + OVERLAP_SLACK:
        raise NumericalError(f"{what} is {value!r}, above 1 + 1e-10")
    return min(max(value, 0.0), 1.0)


def _check_alphabets(p: ClassicalDistribution, q: ClassicalDistribution):
    if p.alphabet_size != q.alphabet_size:
        raise ValidationError(
            f"alphabet mismatch: {p.alphabet_size} vs {q.alphabet_size}"
        )


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not -1.0 <= alpha <= 1.0:
        raise ValidationError(f"alpha must lie in [-1, 1], got {alpha!r}")
    return alpha


def _check_t(t: float) -> float:
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise ValidationError(f"t must lie in [0, 1], got {t!r}")
    return t


def absolutely_continuous(p: ClassicalDistribution, q: ClassicalDistribution) -> bool:
    """True iff support(p) is contained in support(q)."""
    _check_alphabets(p, q)
    return set(p.support) <= set(q.support)


def kl(p: ClassicalDistribution, q: ClassicalDistribution) -> float:
    """Relative entropy sum_k p_k ln(p_k / q_k) in nats, with 0 ln 0 = 0.

    Returns ``inf`` iff the support of ``p`` is not contained in that of ``q``.
    """
    _check_alphabets(p, q)
    if not absolutely_continuous(p, q):
        return INF
    idx = list(p.support)
    pk = p.probs[idx]
    qk = q.probs[idx]
    return _clip_nonnegative(float(np.sum(pk * (np.log(pk) - np.log(qk)))), "relative entropy")


def classical_alpha_div(
    p: ClassicalDistribution, q: ClassicalDistribution, alpha: float
) -> float:
    """One-parameter divergence family interpolating the relative entropies.

    For |alpha| < 1 this is (4 / (1 - alpha^2)) (1 - sum_k p_k^{(1-alpha)/2}
    q_k^{(1+alpha)/2}); the boundary branches are kl(p, q) at alpha = -1 and
    kl(q, p) at alpha = +1.
    """
    alpha = _check_alpha(alpha)
    _check_alphabets(p, q)
    if alpha == -1.0:
        return kl(p, q)
    if alpha == 1.0:
        return kl(q, p)
    overlap = float(np.sum(p.probs ** ((1.0 - alpha) / 2.0) * q.probs ** ((1.0 + alpha) / 2.0)))
    overlap = _clip_overlap(overlap, "classical overlap")
    return 4.0 / (1.0 - alpha * alpha) * (1.0 - overlap)


def classical_f_t(p: ClassicalDistribution, q: ClassicalDistribution, t: float) -> float:
    """Overlap sum_k p_k^{1-t} q_k^t for t in [0, 1].

    A zero-exponent factor counts as 1 on the base's support and 0 off it, so
    t = 0 returns the p-mass of supp(q) and t = 1 the q-mass of supp(p).
    """
    t = _check_t(t)
    _check_alphabets(p, q)

    def powers(base: np.ndarray, exponent: float) -> np.ndarray:
        on = base > SUPPORT_TOL
        if exponent == 0.0:
            return on.astype(float)
        return np.where(on, base, 0.0) ** exponent

    value = float(np.sum(powers(p.probs, 1.0 - t) * powers(q.probs, t)))
    return _clip_overlap(value, "classical f_t") if value > 1.0 else max(value, 0.0)


def _support_mass_outside(rho: DensityMatrix, sigma_dec) -> float:
    """Mass of rho outside the support eigenspace of sigma."""
    null = sigma_dec.eigenvalues <= SUPPORT_TOL
    if not null.any():
        return 0.0
    v = sigma_dec.eigenvectors[:, null]
    return float(np.einsum("ij,jk,ki->", v.conj().T, rho.matrix, v).real)


def quantum_relative_entropy(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """tr(rho log rho) - tr(rho log sigma) in nats, on the supports.

    Returns ``inf`` iff the support of ``rho`` is not contained in the support
    of ``sigma`` (eigenvalue threshold 1e-12).
    """
    if rho.dim != sigma.dim:
        raise ValidationError(f"dimension mismatch: {rho.dim} vs {sigma.dim}")
    rho_dec = spectral(rho.matrix)
    sigma_dec = spectral(sigma.matrix)
    if _support_mass_outside(rho, sigma_dec) > SUPPORT_TOL:
        return INF
    lam = rho_dec.eigenvalues[rho_dec.eigenvalues > SUPPORT_TOL]
    entropy_term = float(np.sum(lam * np.log(lam)))
    keep = sigma_dec.eigenvalues > SUPPORT_TOL
    mu = sigma_dec.eigenvalues[keep]
    v = sigma_dec.eigenvectors[:, keep]
    weights = np.einsum("ji,jk,ki->i", v.conj(), rho.matrix, v).real
    cross_term = float(np.sum(weights * np.log(mu)))
    return _clip_nonnegative(entropy_term - cross_term, "quantum relative entropy")


def quantum_alpha_div(rho: DensityMatrix, sigma: DensityMatrix, alpha: float) -> float:
    """Quantum alpha-divergence (4 / (1 - alpha^2)) (1 - tr(rho^{(1-alpha)/2}
    sigma^{(1+alpha)/2})) for |alpha| < 1, with the relative-entropy branches
    S(rho||sigma) at alpha = -1 and S(sigma||rho) at alpha = +1."""
    alpha = _check_alpha(alpha)
    if rho.dim != sigma.dim:
        raise ValidationError(f"dimension mismatch: {rho.dim} vs {sigma.dim}")
    if alpha == -1.0:
        return quantum_relative_entropy(rho, sigma)
    if alpha == 1.0:
        return quantum_relative_entropy(sigma, rho)
    a = matrix_function(rho.matrix, lambda x: x ** ((1.0 - alpha) / 2.0))
    b = matrix_function(sigma.matrix, lambda x: x ** ((1.0 + alpha) / 2.0))
    overlap = _clip_overlap(float(np.einsum("ij,ji->", a, b).real), "quantum overlap")
    return 4.0 / (1.0 - alpha * alpha) * (1.0 - overlap)


def quantum_f_t(rho: DensityMatrix, sigma: DensityMatrix, t: float) -> float:
    """Overlap tr(rho^{1-t} sigma^t) through support-restricted matrix powers.

    At t = 0 (resp. 1) the zero-exponent factor is the support projector of
    sigma (resp. rho), matching the classical convention.
    """
    t = _check_t(t)
    if rho.dim != sigma.dim:
        raise ValidationError(f"dimension mismatch: {rho.dim} vs {sigma.dim}")
    a = matrix_function(rho.matrix, lambda x: x ** (1.0 - t))
    b = matrix_function(sigma.matrix, lambda x: x ** t)
    value = float(np.einsum("ij,ji->", a, b).real)
    return _clip_overlap(value, "quantum f_t") if value > 1.0 else max(value, 0.0)


@dataclass(frozen=True)
class ChernoffResult:
    """Minimizer and value of log F_t over t in [0, 1]."""

    t_star: float
    exponent: float


def chernoff_exponent(f_t_evaluator, tol: float = 1e-10) -> ChernoffResult:
    """Minimize log f(t) over [0, 1] by golden-section search.

    The evaluator must be positive and log-convex on [0, 1] (true for both
    overlap forms when the states are not mutually singular).  The search
    brackets to width ``tol``, endpoints are included in the final comparison,
    and ties break toward smaller t.
    """

    def g(t: float) -> float:
        value = f_t_evaluator(t)
        if value <= 0.0:
            raise NumericalError(
                f"f_t evaluator returned {value!r} at t={t!r}; log undefined "
                "(mutually singular inputs?)"
            )
        return math.log(value)

    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = 0.0, 1.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    gc, gd = g(c), g(d)
    while b - a > tol:
        if gc <= gd:
            b, d, gd = d, c, gc
            c = b - invphi * (b - a)
            gc = g(c)
        else:
            a, c, gc = c, d, gd
            d = a + invphi * (b - a)
            gd = g(d)
    t_mid = (a + b) / 2.0
    candidates = [(0.0, g(0.0)), (t_mid, g(t_mid)), (1.0, g(1.0))]
    t_star, exponent = min(candidates, key=lambda pair: (pair[1], pair[0]))
    return ChernoffResult(t_star, exponent)


@dataclass(frozen=True)
class HotReport:
    """Quantum divergence, its measured counterpart, and the monotonicity gap.

    ``gap`` is ``None`` exactly when quantum and measured are both infinite
    (the difference is not comparable).
    """

    quantum: float
    measured: float
    gap: object  # float, or None when not comparable


def hot_report(
    rho: DensityMatrix, sigma: DensityMatrix, measurement: Measurement, alpha: float
) -> HotReport:
    """Compare the quantum alpha-divergence against the divergence of the
    measured outcome distributions; the gap quantum - measured is nonnegative
    (data processing) and zero for commuting pairs measured in a common
    eigenbasis."""
    alpha = _check_alpha(alpha)
    quantum = quantum_alpha_div(rho, sigma, alpha)
    measured = classical_alpha_div(
        born_distribution(rho, measurement), born_distribution(sigma, measurement), alpha
    )
    if math.isinf(quantum) and math.isinf(measured):
        gap = None
    else:
        gap = quantum - measured
    return HotReport(quantum, measured, gap)
