"""Two-channel line-spectrum estimation via atomic-norm semidefinite
programming, built on the Vandermonde decomposition of positive
semidefinite block-Toeplitz matrices."""

from .atomic_norm import (
    DenoiseProblem,
    NoiselessProblem,
    SdpSolution,
    check_separation,
    estimate_frequencies,
    fit_amplitudes,
    lower_bound_check,
    solve_denoise,
    solve_noiseless,
)
from .block_toeplitz import (
    BoundaryReport,
    CovarianceSequence,
    assemble,
    boundary_check,
    circular_distance,
    steering_block,
    steering_vector,
    toeplitz_project,
    wrap_angle,
)
from .config import SolverConfig
from .errors import (
    DivergedError,
    EigenSolverError,
    InteriorPointError,
    MarginalRankWarning,
    NonUnimodularError,
    NotConvergedError,
    NotPsdError,
    SingularPencilError,
    SpeclineError,
)
from .estimators import FrequencyEstimator, VandermondeDecomposer
from .linalg import (
    EigenDecomposition,
    generalized_eig_pair,
    hermitian_eig,
    hermitian_part,
    numerical_rank,
    psd_project,
    rank_factorize,
)
from .signals import (
    GENERATOR_ID,
    NoiseSpec,
    SinusoidModel,
    add_noise,
    biased_covariances,
    compute_tau,
    estimate_noise_variance,
    random_amplitudes,
    snr_to_sigma,
    synthesize,
)
from .vandermonde import (
    LineSpectrum,
    decompose,
    reconstruct,
    reconstruction_residual,
    unitary_residual,
)

__version__ = "0.1.0"

__all__ = [
    "BoundaryReport",
    "CovarianceSequence",
    "DenoiseProblem",
    "DivergedError",
    "EigenDecomposition",
    "EigenSolverError",
    "FrequencyEstimator",
    "GENERATOR_ID",
    "InteriorPointError",
    "LineSpectrum",
    "MarginalRankWarning",
    "NoiseSpec",
    "NoiselessProblem",
    "NonUnimodularError",
    "NotConvergedError",
    "NotPsdError",
    "SdpSolution",
    "SingularPencilError",
    "SinusoidModel",
    "SolverConfig",
    "SpeclineError",
    "VandermondeDecomposer",
    "add_noise",
    "assemble",
    "biased_covariances",
    "boundary_check",
    "check_separation",
    "circular_distance",
    "compute_tau",
    "decompose",
    "estimate_frequencies",
    "estimate_noise_variance",
    "fit_amplitudes",
    "generalized_eig_pair",
    "hermitian_eig",
    "hermitian_part",
    "lower_bound_check",
    "numerical_rank",
    "psd_project",
    "random_amplitudes",
    "rank_factorize",
    "reconstruct",
    "reconstruction_residual",
    "snr_to_sigma",
    "solve_denoise",
    "solve_noiseless",
    "steering_block",
    "steering_vector",
    "synthesize",
    "toeplitz_project",
    "unitary_residual",
    "wrap_angle",
]
