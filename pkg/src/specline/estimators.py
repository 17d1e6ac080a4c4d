"""Estimator-style wrappers over the functional pipeline.

Both classes follow the fit/predict convention with constructor-only
hyperparameters, so they compose with scikit-learn tooling (get_params,
set_params, clone).
"""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .atomic_norm import (
    DenoiseProblem,
    NoiselessProblem,
    estimate_frequencies,
    fit_amplitudes,
    solve_denoise,
    solve_noiseless,
)
from .block_toeplitz import CovarianceSequence, assemble
from .config import DELTA_THETA, EPSILON_RANK, SolverConfig
from .linalg import numerical_rank
from .signals import as_measurement, compute_tau, estimate_noise_variance
from .vandermonde import decompose


class FrequencyEstimator(BaseEstimator):
    """Line-spectrum estimation from one stacked two-channel measurement.

    Parameters
    ----------
    mode : {"noiseless", "denoise"}
        Whether the data satisfies the model exactly or carries noise.
    tau : float or None
        Denoise regularization weight; None selects it from the
        noise-floor estimate of the data.
    rho, tol_primal, tol_dual, max_iter : solver controls; None tolerances
        pick the mode-specific defaults.
    epsilon_rank, delta_theta : decomposition thresholds.

    Attributes
    ----------
    frequencies_ : ndarray, shape (L,)
    densities_ : ndarray, shape (L, 2, 2)
    amplitudes_ : ndarray, shape (L, 2)
        Least-squares amplitudes at the recovered frequencies.
    solution_ : SdpSolution
    n_iter_ : int
    """

    def __init__(
        self,
        mode="noiseless",
        tau=None,
        rho=1.0,
        tol_primal=None,
        tol_dual=None,
        max_iter=50000,
        epsilon_rank=EPSILON_RANK,
        delta_theta=DELTA_THETA,
    ):
        self.mode = mode
        self.tau = tau
        self.rho = rho
        self.tol_primal = tol_primal
        self.tol_dual = tol_dual
        self.max_iter = max_iter
        self.epsilon_rank = epsilon_rank
        self.delta_theta = delta_theta

    def _config(self):
        base = SolverConfig.denoise() if self.mode == "denoise" else SolverConfig.noiseless()
        return SolverConfig(
            rho=self.rho,
            tol_primal=self.tol_primal if self.tol_primal is not None else base.tol_primal,
            tol_dual=self.tol_dual if self.tol_dual is not None else base.tol_dual,
            max_iter=self.max_iter,
            epsilon_rank=self.epsilon_rank,
            delta_theta=self.delta_theta,
        )

    def fit(self, X, y=None):
        """Fit on one measurement, stacked length 2(n+1) or shaped (n+1, 2)."""
        if self.mode not in ("noiseless", "denoise"):
            raise ValueError(f"unknown mode {self.mode!r}")
        x, n = as_measurement(np.asarray(X))
        cfg = self._config()
        if self.mode == "denoise":
            tau = self.tau
            if tau is None:
                tau = compute_tau(np.sqrt(estimate_noise_variance(x)), n)
            if tau > 0:
                solution = solve_denoise(DenoiseProblem(x, tau=tau), cfg)
            else:
                solution = solve_noiseless(NoiselessProblem(x), cfg)
        else:
            solution = solve_noiseless(NoiselessProblem(x), cfg)
        spectrum = estimate_frequencies(solution, cfg=cfg)
        self.n_ = n
        self.solution_ = solution
        self.spectrum_ = spectrum
        self.frequencies_ = spectrum.thetas
        self.densities_ = spectrum.densities
        self.amplitudes_ = fit_amplitudes(solution.x_hat, spectrum.thetas, n)
        self.objective_ = solution.objective
        self.n_iter_ = solution.iterations
        return self

    def predict(self, t):
        """Model samples at integer times t, shape (len(t), 2)."""
        check_is_fitted(self, "frequencies_")
        t = np.atleast_1d(np.asarray(t, dtype=float))
        phases = np.exp(1j * np.outer(t, self.frequencies_))
        return phases @ self.amplitudes_


class VandermondeDecomposer(BaseEstimator):
    """Vandermonde decomposition of a PSD block-Toeplitz covariance sequence.

    Parameters
    ----------
    epsilon : float
        Rank threshold on the assembled matrix.
    delta_theta : float
        Circular clustering tolerance for the frequencies.

    Attributes
    ----------
    spectrum_ : LineSpectrum
    frequencies_ : ndarray, shape (L,)
    densities_ : ndarray, shape (L, m, m)
    rank_ : int
        Numerical rank of the assembled input matrix.
    """

    def __init__(self, epsilon=EPSILON_RANK, delta_theta=DELTA_THETA):
        self.epsilon = epsilon
        self.delta_theta = delta_theta

    def fit(self, X, y=None):
        """Fit on a CovarianceSequence or a raw (n+1, m, m) block array."""
        if not isinstance(X, CovarianceSequence):
            X = CovarianceSequence(np.asarray(X))
        spectrum = decompose(X, epsilon=self.epsilon, delta_theta=self.delta_theta)
        self.spectrum_ = spectrum
        self.frequencies_ = spectrum.thetas
        self.densities_ = spectrum.densities
        self.rank_ = numerical_rank(
            np.linalg.eigvalsh(assemble(X)), self.epsilon
        )
        return self
