"""dqwalk: a numerical laboratory for 1-d quantum walks with phase coins.

Exact single-realization evolution, momentum-space spectral analysis, the
closed-form ballistic scaling law, and seeded Monte Carlo ensembles over
coin disorder, plus a CSV-emitting command line (see ``dqwalk --help``).
"""

from .coins import (
    CoinMatrix,
    DisorderModel,
    Qubit,
    SeedSpec,
    StepOperators,
    dress_qubit,
    haar_qubit,
    make_coin,
    sample_disorder,
    sample_initial_qubit,
    split_coin,
)
from .evolution import (
    DistributionTable,
    WalkerState,
    distribution,
    empirical_moment,
    evolve,
    evolve_checkpoints,
    evolve_with_coins,
    fourier_evolve,
    init_state,
    step,
)
from .spectral import (
    FourierOperator,
    SpectralPoint,
    dispersion,
    dispersion_slope,
    eigensystem,
    finite_diff_velocity_check,
    flat_band_report,
    fourier_operator,
    group_velocity,
)
from .limitlaw import (
    DEFAULT_HALF_WIDTH,
    LimitLaw,
    bias_coefficient,
    konno_density,
    limit_cdf,
    limit_density,
    limit_moment,
)
from .montecarlo import (
    ConvergenceReport,
    EnsembleDistribution,
    ReturnProbabilityReport,
    RunConfig,
    ks_distance,
    limit_law_for,
    moment_convergence,
    monte_carlo_run,
    resolve_workers,
    return_probability,
)

__version__ = "0.1.0"

__all__ = [
    "CoinMatrix",
    "ConvergenceReport",
    "DEFAULT_HALF_WIDTH",
    "DisorderModel",
    "DistributionTable",
    "EnsembleDistribution",
    "FourierOperator",
    "LimitLaw",
    "Qubit",
    "ReturnProbabilityReport",
    "RunConfig",
    "SeedSpec",
    "SpectralPoint",
    "StepOperators",
    "WalkerState",
    "bias_coefficient",
    "dispersion",
    "dispersion_slope",
    "distribution",
    "dress_qubit",
    "eigensystem",
    "empirical_moment",
    "evolve",
    "evolve_checkpoints",
    "evolve_with_coins",
    "finite_diff_velocity_check",
    "flat_band_report",
    "fourier_evolve",
    "fourier_operator",
    "group_velocity",
    "haar_qubit",
    "init_state",
    "konno_density",
    "ks_distance",
    "limit_cdf",
    "limit_density",
    "limit_law_for",
    "limit_moment",
    "make_coin",
    "moment_convergence",
    "monte_carlo_run",
    "resolve_workers",
    "return_probability",
    "sample_disorder",
    "sample_initial_qubit",
    "split_coin",
    "step",
]
