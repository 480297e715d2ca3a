"""Finite-dimensional laboratory for quantum statistical inference.

Quantum states, measurements, and the Born rule (`matcore`); classical and
quantum divergences with their overlap functionals (`divergence`); exact
method-of-types large-deviation oracles (`largedev`); Bayesian model
selection and predictive states (`modelsel`); and a config-driven experiment
harness with a CLI (`harness`, `cli`).
"""

from ._version import __version__
from .divergence import (
    INF,
    ChernoffResult,
    HotReport,
    absolutely_continuous,
    chernoff_exponent,
    classical_alpha_div,
    classical_f_t,
    hot_report,
    kl,
    quantum_alpha_div,
    quantum_f_t,
    quantum_relative_entropy,
)
from .errors import (
    CapacityError,
    DegeneratePosteriorError,
    DomainError,
    NumericalError,
    ValidationError,
)
from .largedev import (
    BetaNResult,
    ErrorPair,
    HalfSpace,
    NPTest,
    SampleSequence,
    SanovEvent,
    SteinResult,
    TypeVector,
    bayes_error_exact,
    beta_n_eps,
    empirical_measure,
    exact_error_curve,
    normalized_llr,
    np_decide,
    rate_fit,
    sample_iid,
    sanov_q_n_exact,
    sanov_rate,
    stein_rate,
)
from .matcore import (
    ClassicalDistribution,
    DensityMatrix,
    Measurement,
    PostMeasurementDecomposition,
    SpectralDecomposition,
    basis_pvm,
    born_distribution,
    matrix_function,
    post_measurement,
    pvm_from_observable,
    random_density,
    random_povm,
    random_probability_vector,
    random_unitary,
    spectral,
)
from .modelsel import (
    InducedModel,
    ParamGrid,
    PosteriorWeights,
    PredictiveDistribution,
    QuantumModel,
    aic,
    alpha_predictive,
    barycenter_state,
    escort_posterior,
    escort_predictive,
    functional_variance,
    induce_model,
    log_likelihood,
    mle,
    risk_alpha,
    select_model,
    uniform_prior,
    validate_predictive_measurement,
    waic,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
