"""Atomic-norm semidefinite programs for two-channel line-spectrum estimation.

Both the equality-constrained problem (noiseless data) and the regularized
least-squares problem (noisy data) minimize a trace surrogate over a
bordered matrix [[b, x*], [x, T(Sigma)]] constrained to the PSD cone. The
solver is a consensus ADMM: the structured variables (b, x, Sigma) have
closed-form updates thanks to the block-Toeplitz averaging projection, and
the consensus variable is projected onto the PSD cone by eigenvalue
clipping. Inputs are normalized by their Euclidean norm so that the
tolerances are scale-free; solutions are rescaled on exit.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .block_toeplitz import (
    CovarianceSequence,
    _block_diag_means,
    assemble,
    circular_distance,
    steering_block,
    wrap_angle,
)
from .config import BLOCK_SIZE, SolverConfig
from .errors import DivergedError, InteriorPointError, NotConvergedError
from .linalg import numerical_rank, psd_project
from .signals import as_measurement
from .vandermonde import decompose


@dataclass
class NoiselessProblem:
    """Measurement known exactly; find the minimum atomic-norm representation."""

    x: np.ndarray
    n: int = None

    def __post_init__(self):
        self.x, n = as_measurement(self.x)
        if self.n is None:
            self.n = n
        elif self.n != n:
            raise ValueError(f"n={self.n} inconsistent with {self.x.size} samples")


@dataclass
class DenoiseProblem:
    """Noisy measurement; trade data fidelity against the atomic norm."""

    y: np.ndarray
    n: int = None
    tau: float = 1.0

    def __post_init__(self):
        self.y, n = as_measurement(self.y)
        if self.n is None:
            self.n = n
        elif self.n != n:
            raise ValueError(f"n={self.n} inconsistent with {self.y.size} samples")
        if not self.tau > 0:
            raise ValueError("tau must be positive")


@dataclass
class SdpSolution:
    """Solver output.

    Attributes
    ----------
    b : float
        Optimal scalar corner of the bordered matrix.
    sigma : CovarianceSequence
        Optimal covariance sequence.
    x_hat : ndarray
        Denoised measurement; equals the input in noiseless mode.
    objective : float
        Optimal value of the solved problem.
    iterations : int
    primal_residual, dual_residual : float
        Relative residuals at exit.
    rank_ok : bool
        Whether the rank of the assembled optimal matrix is at most n+1,
        the regime where the objective certifies the atomic norm; when
        False the objective is a lower bound only.
    """

    b: float
    sigma: CovarianceSequence
    x_hat: np.ndarray
    objective: float
    iterations: int
    primal_residual: float
    dual_residual: float
    rank_ok: bool


def _structure_norm(corner, border, blocks, weights):
    """Frobenius norm of a bordered block-Toeplitz matrix given its parts.

    The lag-k block appears weights[k] times on the assembled matrix, twice
    per lag for k > 0 (both triangles); the border, when present, appears
    as a column and a row.
    """
    total = abs(corner) ** 2
    if border is not None:
        total += 2.0 * np.linalg.norm(border) ** 2
    sq = np.linalg.norm(blocks, axis=(1, 2)) ** 2
    total += weights[0] * sq[0] + 2.0 * np.dot(weights[1:], sq[1:])
    return np.sqrt(total)


def _solve_bordered(data, n, c, cfg, denoise):
    """Shared ADMM core; `data` is the (normalized-on-entry) measurement."""
    m = BLOCK_SIZE
    N = m * (n + 1)
    scale = np.linalg.norm(data)
    if scale == 0:
        sigma = CovarianceSequence.zeros(n, m)
        return 0.0, sigma, np.zeros_like(data), 0, 0.0, 0.0
    xs = data / scale
    cs = c / scale if denoise else c
    rho = cfg.rho
    d0 = n + 1
    weights = np.arange(n + 1, 0, -1, dtype=float)
    x = xs.copy()
    Z = np.zeros((N + 1, N + 1), dtype=complex)
    U = np.zeros((N + 1, N + 1), dtype=complex)
    F = np.zeros((N + 1, N + 1), dtype=complex)
    if not denoise:
        F[1:, 0] = xs
        F[0, 1:] = xs.conj()
    for it in range(1, cfg.max_iter + 1):
        W = Z - U
        b = W[0, 0].real - cs / (2.0 * rho)
        S = _block_diag_means(W[1:, 1:], m)
        S[0] -= cs / (2.0 * rho * d0) * np.eye(m)
        if denoise:
            x = (xs + 2.0 * rho * W[1:, 0]) / (1.0 + 2.0 * rho)
            F[1:, 0] = x
            F[0, 1:] = x.conj()
        F[0, 0] = b
        F[1:, 1:] = assemble(S)
        Z_old = Z
        M = F + U
        Z = psd_project(M)
        U = M - Z
        primal = np.linalg.norm(F - Z)
        dZ = Z - Z_old
        border = dZ[1:, 0] if denoise else None
        dual = rho * _structure_norm(
            dZ[0, 0].real, border, _block_diag_means(dZ[1:, 1:], m), weights
        )
        primal_rel = primal / max(1.0, np.linalg.norm(F), np.linalg.norm(Z))
        u_border = U[1:, 0] if denoise else None
        u_norm = _structure_norm(
            U[0, 0].real, u_border, _block_diag_means(U[1:, 1:], m), weights
        )
        dual_rel = dual / max(1.0, rho * u_norm)
        if not (np.isfinite(primal_rel) and np.isfinite(dual_rel)):
            raise DivergedError(f"non-finite residuals at iteration {it}")
        if primal_rel < cfg.tol_primal and dual_rel < cfg.tol_dual:
            break
        # rebalance the penalty when the residuals drift apart
        if it % 10 == 0:
            if primal_rel > 10.0 * dual_rel:
                rho *= 2.0
                U /= 2.0
            elif dual_rel > 10.0 * primal_rel:
                rho /= 2.0
                U *= 2.0
    else:
        raise NotConvergedError(cfg.max_iter, primal_rel, dual_rel)
    sigma = CovarianceSequence(S * scale)
    x_out = x * scale if denoise else data
    return b * scale, sigma, x_out, it, primal_rel, dual_rel


def _rank_certificate(sigma, n, epsilon):
    w = np.linalg.eigvalsh(assemble(sigma))
    return numerical_rank(w, epsilon) <= n + 1


def solve_noiseless(problem, cfg=None):
    """Minimum trace surrogate of the atomic norm under exact data consistency.

    Minimizes (b + trace Sigma_0) / 2 subject to the bordered matrix being
    PSD. When the solution satisfies the rank certificate, the objective
    value is the atomic norm of the input.

    Parameters
    ----------
    problem : NoiselessProblem
    cfg : SolverConfig, optional

    Returns
    -------
    SdpSolution
    """
    cfg = cfg or SolverConfig.noiseless()
    b, sigma, x_hat, iters, pres, dres = _solve_bordered(
        problem.x, problem.n, 1.0, cfg, denoise=False
    )
    objective = 0.5 * (b + np.trace(sigma.blocks[0]).real)
    return SdpSolution(
        b=float(b),
        sigma=sigma,
        x_hat=x_hat,
        objective=float(objective),
        iterations=iters,
        primal_residual=pres,
        dual_residual=dres,
        rank_ok=_rank_certificate(sigma, problem.n, cfg.epsilon_rank),
    )


def solve_denoise(problem, cfg=None):
    """Atomic-norm regularized least squares on a noisy measurement.

    Minimizes ||x - y||^2 / 2 + tau (b + trace Sigma_0) / 2 subject to the
    bordered PSD constraint; x_hat is the denoised signal.

    Parameters
    ----------
    problem : DenoiseProblem
    cfg : SolverConfig, optional

    Returns
    -------
    SdpSolution
    """
    cfg = cfg or SolverConfig.denoise()
    b, sigma, x_hat, iters, pres, dres = _solve_bordered(
        problem.y, problem.n, problem.tau, cfg, denoise=True
    )
    objective = 0.5 * np.linalg.norm(x_hat - problem.y) ** 2 + 0.5 * problem.tau * (
        b + np.trace(sigma.blocks[0]).real
    )
    return SdpSolution(
        b=float(b),
        sigma=sigma,
        x_hat=x_hat,
        objective=float(objective),
        iterations=iters,
        primal_residual=pres,
        dual_residual=dres,
        rank_ok=_rank_certificate(sigma, problem.n, cfg.epsilon_rank),
    )


def estimate_frequencies(solution, epsilon=None, delta_theta=None, cfg=None):
    """Line spectrum of a solver output via the Vandermonde decomposition.

    The atom count of the result is the detected number of sinusoids.

    Parameters
    ----------
    solution : SdpSolution
    epsilon, delta_theta : float, optional
        Override the thresholds; otherwise taken from cfg or the defaults.
    """
    cfg = cfg or SolverConfig()
    epsilon = cfg.epsilon_rank if epsilon is None else epsilon
    delta_theta = cfg.delta_theta if delta_theta is None else delta_theta
    try:
        return decompose(solution.sigma, epsilon=epsilon, delta_theta=delta_theta)
    except InteriorPointError as exc:
        raise InteriorPointError(
            "no line-spectral structure found: optimal covariance is "
            "numerically full rank"
        ) from exc


class SeparationReport(NamedTuple):
    delta_theta: float
    satisfied: bool


def check_separation(thetas, n):
    """Minimum circular frequency separation and the sufficient-recovery test.

    The condition asks the separation, as a fraction of the full circle,
    to be at least 4/n. A single frequency passes with separation 2 pi.
    """
    thetas = wrap_angle(np.atleast_1d(np.asarray(thetas, dtype=float)))
    if thetas.size == 0:
        raise ValueError("need at least one frequency")
    if thetas.size == 1:
        return SeparationReport(2.0 * np.pi, True)
    dist = circular_distance(thetas[:, None], thetas[None, :])
    delta = float(dist[~np.eye(thetas.size, dtype=bool)].min())
    return SeparationReport(delta, bool(delta / (2.0 * np.pi) >= 4.0 / n))


def fit_amplitudes(x, thetas, n):
    """Least-squares amplitudes of known frequencies for a stacked measurement."""
    x, _ = as_measurement(x)
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    if thetas.size == 0:
        return np.zeros((0, 2), dtype=complex)
    A = np.hstack([steering_block(t, n) for t in thetas])
    s, *_ = np.linalg.lstsq(A, x, rcond=None)
    return s.reshape(-1, 2)


def lower_bound_check(x, thetas, amplitudes, p, tol=1e-6):
    """Verify an SDP value against an explicit atomic decomposition of x.

    Any decomposition x = sum_l G(theta_l) s_l gives the upper bound
    sum_l ||s_l|| on the atomic norm, so a certified optimal value p may
    not exceed it.

    Parameters
    ----------
    x : array_like
        Stacked measurement reproduced by the decomposition.
    thetas, amplitudes : array_like
        The decomposition; amplitudes has one 2-vector row per frequency.
    p : float
        Objective value to check.
    tol : float
        Relative slack on both the reproduction and the bound.

    Returns
    -------
    bool
    """
    x, n = as_measurement(x)
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    amplitudes = np.asarray(amplitudes, dtype=complex).reshape(-1, 2)
    synth = np.zeros_like(x)
    for t, s in zip(thetas, amplitudes):
        synth += steering_block(t, n) @ s
    if np.linalg.norm(synth - x) > tol * max(1.0, np.linalg.norm(x)):
        raise ValueError("decomposition does not reproduce the measurement")
    bound = float(np.linalg.norm(amplitudes, axis=1).sum())
    return bool(p <= bound + tol * max(1.0, bound))
