"""Hermitian matrix algebra, quantum states, measurements, and the Born rule.

All values are immutable after construction (arrays are marked read-only) and
all operations are pure functions of their inputs, so everything here is safe
to call concurrently.  Randomness enters only through explicit integer seeds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, NumericalError, ValidationError

#: Eigenvalues and probabilities at or below this threshold are exact zeros.
SUPPORT_TOL = 1e-12
#: Elementwise tolerance for Hermitian symmetry.
HERMITIAN_TOL = 1e-12
#: Most negative admissible eigenvalue for positive-semidefinite inputs.
PSD_FLOOR = -1e-10
#: Tolerance for unit-trace, sum-to-identity and probability-sum checks.
UNIT_TOL = 1e-10


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def check_hermitian(matrix, name: str = "matrix") -> np.ndarray:
    """Validate a square Hermitian matrix and return its exact Hermitian part.

    Raises ValidationError if the input is not square, not finite, or differs
    from its conjugate transpose by more than ``HERMITIAN_TOL`` elementwise.
    """
    a = np.asarray(matrix, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError(f"{name} must be square, got shape {a.shape}")
    if not np.isfinite(a).all():
        raise ValidationError(f"{name} contains non-finite entries")
    if np.max(np.abs(a - a.conj().T), initial=0.0) > HERMITIAN_TOL:
        raise ValidationError(f"{name} is not Hermitian within {HERMITIAN_TOL}")
    return _frozen((a + a.conj().T) / 2.0)


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigenvalues (ascending) and orthonormal eigenvector columns of a
    Hermitian matrix; ``eigenvectors[:, k]`` pairs with ``eigenvalues[k]``."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def spectral(matrix, name: str = "matrix") -> SpectralDecomposition:
    """Spectral decomposition of a Hermitian matrix."""
    h = check_hermitian(matrix, name)
    eigenvalues, eigenvectors = np.linalg.eigh(h)
    return SpectralDecomposition(_frozen(eigenvalues), _frozen(eigenvectors))


def matrix_function(matrix, f, support_tol: float = SUPPORT_TOL) -> np.ndarray:
    """Apply a scalar real function to a Hermitian matrix through its spectrum.

    Eigenvalues with ``|lambda| <= support_tol`` are treated as exact zeros and
    contribute zero blocks, so ``f`` is never evaluated there; this matches the
    measure-theoretic convention 0^t = 0 for t > 0 and makes ``log``/``x**t``
    well defined on the support of a positive-semidefinite matrix.

    Raises DomainError if ``f`` raises or returns a non-finite value at a
    retained eigenvalue.
    """
    dec = spectral(matrix)
    keep = np.abs(dec.eigenvalues) > support_tol
    values = []
    for lam in dec.eigenvalues[keep]:
        try:
            y = float(f(float(lam)))
        except (ValueError, ZeroDivisionError, OverflowError) as exc:
            raise DomainError(f"function undefined at eigenvalue {lam!r}: {exc}") from exc
        if not math.isfinite(y):
            raise DomainError(f"function not finite at eigenvalue {lam!r}")
        values.append(y)
    v = dec.eigenvectors[:, keep]
    out = (v * np.asarray(values)) @ v.conj().T
    return _frozen((out + out.conj().T) / 2.0)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, positive-semidefinite, unit-trace matrix."""

    matrix: np.ndarray

    def __post_init__(self):
        m = check_hermitian(self.matrix, "density matrix")
        eigenvalues = np.linalg.eigvalsh(m)
        if eigenvalues.min(initial=0.0) < PSD_FLOOR:
            raise ValidationError(
                f"density matrix has eigenvalue {eigenvalues.min():.3e} < {PSD_FLOOR}"
            )
        trace = float(m.trace().real)
        if abs(trace - 1.0) > UNIT_TOL:
            raise ValidationError(f"density matrix trace {trace!r} is not 1 within {UNIT_TOL}")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def pure(cls, amplitudes) -> "DensityMatrix":
        """Projector onto the given state vector (normalized internally)."""
        v = np.asarray(amplitudes, dtype=np.complex128).ravel()
        norm = np.linalg.norm(v)
        if norm <= 0:
            raise ValidationError("pure state vector must be nonzero")
        v = v / norm
        return cls(np.outer(v, v.conj()))

    @classmethod
    def diagonal(cls, values) -> "DensityMatrix":
        return cls(np.diag(np.asarray(values, dtype=np.complex128)))

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityMatrix":
        return cls(np.eye(dim, dtype=np.complex128) / dim)


@dataclass(frozen=True, eq=False)
class Measurement:
    """Finite list of positive effects summing to the identity (PVM or POVM)."""

    effects: tuple
    labels: tuple = None

    def __post_init__(self):
        effects = tuple(check_hermitian(e, f"effect {k}") for k, e in enumerate(self.effects))
        if len(effects) < 1:
            raise ValidationError("measurement needs at least one effect")
        dim = effects[0].shape[0]
        total = np.zeros((dim, dim), dtype=np.complex128)
        for k, e in enumerate(effects):
            if e.shape[0] != dim:
                raise ValidationError("all effects must share one dimension")
            low = np.linalg.eigvalsh(e).min()
            if low < PSD_FLOOR:
                raise ValidationError(f"effect {k} has eigenvalue {low:.3e} < {PSD_FLOOR}")
            total += e
        if np.max(np.abs(total - np.eye(dim))) > UNIT_TOL:
            raise ValidationError(f"effects do not sum to the identity within {UNIT_TOL}")
        labels = self.labels
        if labels is None:
            labels = tuple(range(len(effects)))
        else:
            labels = tuple(labels)
            if len(labels) != len(effects):
                raise ValidationError("labels and effects must have equal length")
        object.__setattr__(self, "effects", effects)
        object.__setattr__(self, "labels", labels)

    @property
    def dim(self) -> int:
        return self.effects[0].shape[0]

    @property
    def num_outcomes(self) -> int:
        return len(self.effects)


@dataclass(frozen=True, eq=False)
class ClassicalDistribution:
    """Probability vector over a finite outcome alphabet with explicit support.

    The support is the index set of entries above ``SUPPORT_TOL``; entries in
    [-SUPPORT_TOL, 0) are clipped to exact zeros on construction.
    """

    probs: np.ndarray
    support: tuple = field(init=False)

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=np.float64).ravel().copy()
        if p.size == 0 or not np.all(np.isfinite(p)):
            raise ValidationError("probability vector must be nonempty and finite")
        if p.min() < -SUPPORT_TOL:
            raise ValidationError(f"negative probability {p.min():.3e}")
        p[p < 0.0] = 0.0
        if abs(p.sum() - 1.0) > UNIT_TOL:
            raise ValidationError(f"probabilities sum to {p.sum()!r}, not 1 within {UNIT_TOL}")
        object.__setattr__(self, "probs", _frozen(p))
        object.__setattr__(self, "support", tuple(np.nonzero(p > SUPPORT_TOL)[0].tolist()))

    @property
    def alphabet_size(self) -> int:
        return self.probs.size

    @classmethod
    def uniform(cls, k: int) -> "ClassicalDistribution":
        return cls(np.full(k, 1.0 / k))


@dataclass(frozen=True, eq=False)
class PostMeasurementDecomposition:
    """Outcome distribution plus one conditional state per supported outcome.

    ``conditional_states[i]`` corresponds to outcome ``distribution.support[i]``.
    """

    distribution: ClassicalDistribution
    conditional_states: tuple

    def barycenter(self) -> DensityMatrix:
        p = self.distribution.probs
        dim = self.conditional_states[0].dim
        total = np.zeros((dim, dim), dtype=np.complex128)
        for k, state in zip(self.distribution.support, self.conditional_states):
            total += p[k] * state.matrix
        return DensityMatrix(total)


def pvm_from_observable(observable, degeneracy_tol: float = 1e-8) -> Measurement:
    """Projection-valued measure of a Hermitian observable.

    Ascending eigenvalues are merged into one outcome whenever the gap to the
    previous eigenvalue is at most ``degeneracy_tol`` (absolute); each effect
    is the orthogonal projector onto the merged eigenspace and the label is
    the mean of the merged cluster.
    """
    dec = spectral(observable, "observable")
    eigenvalues, vectors = dec.eigenvalues, dec.eigenvectors
    clusters = [[0]]
    for i in range(1, eigenvalues.size):
        if eigenvalues[i] - eigenvalues[clusters[-1][-1]] <= degeneracy_tol:
            clusters[-1].append(i)
        else:
            clusters.append([i])
    effects = []
    labels = []
    for idx in clusters:
        v = vectors[:, idx]
        effects.append(v @ v.conj().T)
        labels.append(float(np.mean(eigenvalues[idx])))
    return Measurement(tuple(effects), tuple(labels))


def basis_pvm(basis) -> Measurement:
    """Rank-1 PVM built from the orthonormal columns of ``basis``."""
    u = np.asarray(basis, dtype=np.complex128)
    if np.max(np.abs(u.conj().T @ u - np.eye(u.shape[1]))) > 1e-10:
        raise ValidationError("basis columns are not orthonormal")
    effects = tuple(np.outer(u[:, k], u[:, k].conj()) for k in range(u.shape[1]))
    return Measurement(effects, tuple(range(u.shape[1])))


def born_distribution(rho: DensityMatrix, measurement: Measurement) -> ClassicalDistribution:
    """Outcome distribution trace(rho * E_k) of a measurement on a state.

    Entries in [-SUPPORT_TOL, 0) are clipped to zero and the vector is
    renormalized; a clip or renormalization beyond the declared budget raises
    NumericalError.
    """
    if rho.dim != measurement.dim:
        raise ValidationError(f"dimension mismatch: state {rho.dim}, measurement {measurement.dim}")
    probs = np.array([float(np.einsum("ij,ji->", rho.matrix, e).real) for e in measurement.effects])
    if probs.min() < -SUPPORT_TOL:
        raise NumericalError(f"Born probability {probs.min():.3e} below the -1e-12 clip budget")
    probs[probs < 0.0] = 0.0
    total = probs.sum()
    if abs(total - 1.0) > UNIT_TOL:
        raise NumericalError(f"Born probabilities sum to {total!r}; correction exceeds {UNIT_TOL}")
    return ClassicalDistribution(probs / total)


def post_measurement(rho: DensityMatrix, measurement: Measurement) -> PostMeasurementDecomposition:
    """Outcome distribution with Lueders conditional states E^{1/2} rho E^{1/2} / p."""
    distribution = born_distribution(rho, measurement)
    conditionals = []
    for k in distribution.support:
        root = matrix_function(measurement.effects[k], math.sqrt)
        raw = root @ rho.matrix @ root
        trace = float(raw.trace().real)
        if trace <= SUPPORT_TOL:
            raise NumericalError(f"conditional state for outcome {k} has vanishing trace")
        conditionals.append(DensityMatrix(raw / trace))
    return PostMeasurementDecomposition(distribution, tuple(conditionals))


def random_density(dim: int, rank: int, seed: int) -> DensityMatrix:
    """Random density matrix G G^dagger / tr(G G^dagger) with G a dim x rank
    matrix of standard complex Gaussians; deterministic in ``seed``."""
    if not (isinstance(dim, (int, np.integer)) and dim >= 1):
        raise ValidationError(f"dim must be a positive integer, got {dim!r}")
    if not (isinstance(rank, (int, np.integer)) and 1 <= rank <= dim):
        raise ValidationError(f"rank must satisfy 1 <= rank <= dim, got {rank!r}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    raw = g @ g.conj().T
    return DensityMatrix(raw / raw.trace().real)


def random_unitary(dim: int, seed: int) -> np.ndarray:
    """Haar-random unitary matrix, deterministic in ``seed``."""
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    phases = np.diagonal(r).copy()
    phases /= np.abs(phases)
    return _frozen(q * phases)


def random_povm(dim: int, num_outcomes: int, seed: int) -> Measurement:
    """Random POVM: Wishart factors renormalized so the effects sum to the identity."""
    if num_outcomes < 1:
        raise ValidationError("POVM needs at least one outcome")
    rng = np.random.default_rng(seed)
    parts = []
    for _ in range(num_outcomes):
        g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        parts.append(g @ g.conj().T)
    total = np.sum(parts, axis=0)
    inv_root = matrix_function(total, lambda x: 1.0 / math.sqrt(x))
    effects = []
    for a in parts:
        e = inv_root @ a @ inv_root
        effects.append((e + e.conj().T) / 2.0)
    return Measurement(tuple(effects))


def random_probability_vector(k: int, seed: int, floor: float = 0.0) -> ClassicalDistribution:
    """Dirichlet(1,...,1) probability vector, optionally floored at ``floor`` per entry."""
    if not 0.0 <= floor * k < 1.0:
        raise ValidationError("floor * alphabet size must lie in [0, 1)")
    rng = np.random.default_rng(seed)
    p = rng.dirichlet(np.ones(k))
    return ClassicalDistribution(floor + (1.0 - k * floor) * p)
