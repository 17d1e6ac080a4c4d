"""Vandermonde decomposition of singular PSD block-Toeplitz matrices.

A rank-r PSD block-Toeplitz matrix T built from a covariance sequence is
represented as a sum of atoms G(theta_l) Q_l G(theta_l)* with distinct
frequencies and PSD density matrices. The frequencies are the arguments of
the unit-modulus eigenvalues of a matrix pencil formed from a rank factor
of T; densities follow from the matching eigenspaces.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from .block_toeplitz import CovarianceSequence, _blocks_of, assemble, wrap_angle
from .config import DELTA_THETA, EPSILON_RANK, UNIMODULAR_TOL
from .errors import (
    InteriorPointError,
    MarginalRankWarning,
    NonUnimodularError,
    NotPsdError,
)
from .linalg import generalized_eig_pair, hermitian_eig, hermitian_part, numerical_rank


@dataclass
class LineSpectrum:
    """Discrete spectrum: frequencies with matrix-valued densities.

    Attributes
    ----------
    m : int
        Density block size.
    thetas : ndarray, shape (L,)
        Distinct frequencies in (-pi, pi], ascending.
    densities : ndarray, shape (L, m, m)
        Hermitian PSD density matrix per frequency.
    """

    m: int = 2
    thetas: np.ndarray = field(default_factory=lambda: np.zeros(0))
    densities: np.ndarray = field(default=None)

    def __post_init__(self):
        thetas = wrap_angle(np.atleast_1d(np.asarray(self.thetas, dtype=float)))
        if self.densities is None:
            densities = np.zeros((thetas.size, self.m, self.m), dtype=complex)
        else:
            densities = np.asarray(self.densities, dtype=complex)
        if densities.shape != (thetas.size, self.m, self.m):
            raise ValueError(
                f"densities shape {densities.shape} does not match "
                f"{thetas.size} frequencies of block size {self.m}"
            )
        order = np.argsort(thetas)
        thetas = thetas[order]
        densities = densities[order]
        if thetas.size > 1 and np.any(np.diff(thetas) == 0):
            raise ValueError("frequencies must be distinct")
        self.thetas = thetas
        self.densities = densities

    @property
    def L(self):
        return self.thetas.size

    @classmethod
    def empty(cls, m=2):
        return cls(m=m, thetas=np.zeros(0), densities=np.zeros((0, m, m)))


def reconstruct(spectrum, n):
    """Covariance sequence of a line spectrum up to lag n.

    The lag-k block is the sum over atoms of e^{i k theta_l} Q_l.
    """
    phases = np.exp(1j * np.outer(np.arange(n + 1), spectrum.thetas))
    blocks = np.einsum("kl,lab->kab", phases, spectrum.densities)
    if spectrum.L == 0:
        blocks = np.zeros((n + 1, spectrum.m, spectrum.m), dtype=complex)
    return CovarianceSequence(blocks)


def unitary_residual(V, U, m=2):
    """Relative residual of the shift relation between the rank-factor slices.

    Measures how well dropping the first block row of V equals dropping the
    last block row times U.
    """
    V = np.asarray(V, dtype=complex)
    top = V[m:] - V[:-m] @ np.asarray(U, dtype=complex)
    return float(np.linalg.norm(top) / max(1.0, np.linalg.norm(V[m:])))


def _cluster_circular(thetas, delta):
    """Single-linkage clusters of sorted angles, merging across the seam."""
    r = thetas.size
    clusters = []
    current = [0]
    for j in range(1, r):
        if thetas[j] - thetas[j - 1] <= delta:
            current.append(j)
        else:
            clusters.append(current)
            current = [j]
    clusters.append(current)
    if len(clusters) > 1 and (thetas[clusters[0][0]] + 2 * np.pi - thetas[clusters[-1][-1]]) <= delta:
        clusters[0] = clusters.pop() + clusters[0]
    return clusters


def decompose(seq, epsilon=EPSILON_RANK, delta_theta=DELTA_THETA):
    """Vandermonde decomposition of a singular PSD block-Toeplitz matrix.

    Parameters
    ----------
    seq : CovarianceSequence or ndarray of shape (n+1, m, m)
        Covariance sequence with n >= 1 whose assembled matrix is PSD and
        rank deficient at the epsilon threshold.
    epsilon : float
        Eigenvalue threshold for the numerical rank of the assembled matrix.
    delta_theta : float
        Frequencies closer than this (circularly) are combined into one atom.

    Returns
    -------
    LineSpectrum
        Atoms sorted by frequency; density ranks add up to the matrix rank.

    Raises
    ------
    NotPsdError
        If an eigenvalue falls below -epsilon.
    InteriorPointError
        If the matrix is numerically full rank (no unique representation).
    SingularPencilError
        If the shifted rank factor loses column rank.
    NonUnimodularError
        If a pencil eigenvalue leaves the unit circle by more than the
        working tolerance.
    """
    blocks = _blocks_of(seq)
    n1, m, _ = blocks.shape
    if n1 < 2:
        raise ValueError("need n >= 1 to form the shifted factors")
    T = assemble(blocks)
    dec = hermitian_eig(T)
    w = dec.eigenvalues
    if w[0] < -epsilon:
        raise NotPsdError(w[0], epsilon)
    r = numerical_rank(w, epsilon)
    N = T.shape[0]
    if r == N:
        raise InteriorPointError(
            f"matrix is numerically full rank ({r}); interior point, "
            "decomposition not unique"
        )
    if r == 0:
        return LineSpectrum.empty(m=m)
    discarded = w[: N - r]
    if discarded[-1] > epsilon / 10:
        warnings.warn(
            f"largest discarded eigenvalue {discarded[-1]:.3e} is within a "
            f"decade of the rank threshold {epsilon:.1e}",
            MarginalRankWarning,
            stacklevel=2,
        )
    # rank factor from the top-r eigenpairs, leading eigenvalue first
    V = dec.eigenvectors[:, -r:][:, ::-1] * np.sqrt(w[-r:][::-1])
    V0 = V[:m]
    A = V[:-m].conj().T @ V[m:]
    B = V[:-m].conj().T @ V[:-m]
    lam, vec = generalized_eig_pair(A, B)
    deviation = np.abs(np.abs(lam) - 1.0).max()
    if deviation > UNIMODULAR_TOL:
        raise NonUnimodularError(deviation, UNIMODULAR_TOL)
    lam = lam / np.abs(lam)
    thetas = wrap_angle(np.angle(lam))
    order = np.argsort(thetas, kind="stable")
    thetas = thetas[order]
    vec = vec[:, order]
    atom_thetas = []
    atom_densities = []
    for members in _cluster_circular(thetas, delta_theta):
        rep = wrap_angle(float(np.angle(np.mean(np.exp(1j * thetas[members])))))
        # an orthonormal basis of the eigenspace recovers the unitary
        # diagonalizer column block up to a rotation that cancels below
        basis = np.linalg.qr(vec[:, members])[0]
        W0 = V0 @ basis
        atom_thetas.append(rep)
        atom_densities.append(hermitian_part(W0 @ W0.conj().T))
    return LineSpectrum(m=m, thetas=np.array(atom_thetas), densities=np.array(atom_densities))


def reconstruction_residual(seq, spectrum):
    """Largest Frobenius mismatch between a sequence and a reconstructed one."""
    blocks = _blocks_of(seq)
    rec = reconstruct(spectrum, blocks.shape[0] - 1).blocks
    return float(np.linalg.norm(blocks - rec, axis=(1, 2)).max())
