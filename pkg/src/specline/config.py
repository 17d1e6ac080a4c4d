"""Tolerance defaults and the solver configuration record.

All numerical thresholds used by the library are collected here so tests
and the CLI share a single source of truth.
"""

import json
from dataclasses import dataclass, asdict

# Rank threshold: eigenvalues no greater than this are treated as zero.
EPSILON_RANK = 1e-4

# Single-linkage clustering tolerance for pencil frequencies, radians.
DELTA_THETA = 1e-6

# Maximum allowed deviation of a pencil eigenvalue modulus from 1.
UNIMODULAR_TOL = 1e-6

# Relative tolerance below which a Cholesky factorization is refused.
CHOLESKY_RELATIVE_TOL = 1e-10

# Per-channel sample count is 2 throughout.
BLOCK_SIZE = 2


@dataclass
class SolverConfig:
    """Parameters for the splitting solver.

    Attributes
    ----------
    rho : float
        Initial penalty parameter; rebalanced adaptively during the run.
    tol_primal, tol_dual : float
        Relative residual targets; both must be met to stop.
    max_iter : int
        Iteration cap.
    epsilon_rank : float
        Eigenvalue threshold for numerical rank decisions on the output.
    delta_theta : float
        Frequency clustering tolerance passed to the decomposition.
    """

    rho: float = 1.0
    tol_primal: float = 1e-7
    tol_dual: float = 1e-7
    max_iter: int = 50000
    epsilon_rank: float = EPSILON_RANK
    delta_theta: float = DELTA_THETA

    @classmethod
    def noiseless(cls):
        """Defaults for the equality-constrained problem."""
        return cls(tol_primal=1e-7, tol_dual=1e-7)

    @classmethod
    def denoise(cls):
        """Defaults for the regularized least-squares problem."""
        return cls(tol_primal=1e-6, tol_dual=1e-6)

    @classmethod
    def from_json(cls, path):
        """Read a configuration from a JSON file; missing keys keep defaults."""
        with open(path) as fh:
            data = json.load(fh)
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown solver config keys: {sorted(unknown)}")
        return cls(**data)

    def to_dict(self):
        return asdict(self)
