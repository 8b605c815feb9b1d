"""Full counting statistics of photon emission from small open quantum systems.

The library builds Lindblad generators for few-qubit sources, deforms them
with counting fields, extracts scaled cumulants of the time-integrated
photocurrents from the leading eigenvalue, and evaluates a moment-matrix
non-classicality witness on the result.  A quantum-jump Monte Carlo backend
provides the independent statistical check, and a CLI drives parameter
sweeps, single-point evaluations, and validation runs.
"""

__version__ = "0.1.0"

from .algebra import (
    IDENTITY_2,
    SIGMA_MINUS,
    SIGMA_PLUS,
    SIGMA_X,
    SIGMA_Z,
    SiteSpec,
    adjoint,
    expectation,
    kron_embed,
)
from .ldt import (
    CumulantTable,
    RateFunctionSample,
    cumulants_fd,
    cumulants_to_moments,
    first_cumulants_analytic,
    hellmann_feynman_rates,
    rate_function,
    scaled_cumulant,
    scgf,
)
from .liouville import (
    CountingScheme,
    Lindbladian,
    SpectralResult,
    adjoint_identity_residual,
    build_liouvillian,
    build_tilted,
    devectorize,
    leading_eigenpair,
    steady_state,
    vectorize,
)
from .models import (
    CircuitParams,
    CoupledAtomsParams,
    build_circuit_atoms,
    build_coupled_atoms,
    build_driven_qubit,
    total_emission_rate,
)
from .trajectories import (
    CountSample,
    TrajectoryConfig,
    empirical_stats,
    simulate_counts,
)
from .validate import run_validate
from .witness import (
    MomentMatrix,
    WitnessReport,
    evaluate_witness,
    m3_appendix,
    m3_direct,
    moment_matrix,
    principal_minor,
    scaling_check,
)

__all__ = [
    "__version__",
    "IDENTITY_2",
    "SIGMA_MINUS",
    "SIGMA_PLUS",
    "SIGMA_X",
    "SIGMA_Z",
    "SiteSpec",
    "adjoint",
    "expectation",
    "kron_embed",
    "CumulantTable",
    "RateFunctionSample",
    "cumulants_fd",
    "cumulants_to_moments",
    "first_cumulants_analytic",
    "hellmann_feynman_rates",
    "rate_function",
    "scaled_cumulant",
    "scgf",
    "CountingScheme",
    "Lindbladian",
    "SpectralResult",
    "adjoint_identity_residual",
    "build_liouvillian",
    "build_tilted",
    "devectorize",
    "leading_eigenpair",
    "steady_state",
    "vectorize",
    "CircuitParams",
    "CoupledAtomsParams",
    "build_circuit_atoms",
    "build_coupled_atoms",
    "build_driven_qubit",
    "total_emission_rate",
    "CountSample",
    "TrajectoryConfig",
    "empirical_stats",
    "simulate_counts",
    "run_validate",
    "MomentMatrix",
    "WitnessReport",
    "evaluate_witness",
    "m3_appendix",
    "m3_direct",
    "moment_matrix",
    "principal_minor",
    "scaling_check",
]
