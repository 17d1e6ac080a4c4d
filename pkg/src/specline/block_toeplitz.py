"""Hermitian block-Toeplitz matrices built from a covariance sequence.

The canonical representation is the sequence of blocks on the first block
column; the assembled matrix is formed lazily. The averaging projection
onto the block-Toeplitz subspace is the adjoint operation needed by the
splitting solver.
"""

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .linalg import hermitian_part, numerical_rank

TWO_PI = 2.0 * np.pi


def wrap_angle(theta):
    """Wrap angles into (-pi, pi].

    Values already in range are returned bit-identically.
    """
    theta = np.asarray(theta, dtype=float)
    w = theta - TWO_PI * np.round(theta / TWO_PI)
    w = np.where(w <= -np.pi, w + TWO_PI, w)
    return w if w.ndim else float(w)


def circular_distance(a, b):
    """Shortest angular distance between a and b on the circle."""
    return np.abs(wrap_angle(np.asarray(a, dtype=float) - b))


@dataclass
class CovarianceSequence:
    """Blocks on the first block column of a Hermitian block-Toeplitz matrix.

    Attributes
    ----------
    blocks : ndarray, shape (n+1, m, m)
        The sequence; the leading block is symmetrized on construction.
        Blocks at negative lags are implied by conjugate transposition and
        never stored.
    """

    blocks: np.ndarray = field()

    def __post_init__(self):
        blocks = np.asarray(self.blocks, dtype=complex)
        if blocks.ndim != 3 or blocks.shape[1] != blocks.shape[2]:
            raise ValueError(
                f"expected blocks of shape (n+1, m, m), got {blocks.shape}"
            )
        if blocks.shape[0] < 1:
            raise ValueError("need at least the lag-zero block")
        blocks = blocks.copy()
        blocks[0] = hermitian_part(blocks[0])
        self.blocks = blocks

    @property
    def m(self):
        return self.blocks.shape[1]

    @property
    def n(self):
        return self.blocks.shape[0] - 1

    @classmethod
    def zeros(cls, n, m=2):
        return cls(np.zeros((n + 1, m, m), dtype=complex))


def _blocks_of(seq):
    """Accept a CovarianceSequence or a raw (n+1, m, m) array."""
    if isinstance(seq, CovarianceSequence):
        return seq.blocks
    blocks = np.asarray(seq, dtype=complex)
    if blocks.ndim != 3 or blocks.shape[1] != blocks.shape[2]:
        raise ValueError(f"expected shape (n+1, m, m), got {blocks.shape}")
    return blocks


def assemble(seq):
    """Form the block-Toeplitz matrix of a covariance sequence.

    Block (j, k) equals blocks[j-k] for j >= k and blocks[k-j]* otherwise.
    The result is Hermitian by construction when the lag-zero block is.

    Parameters
    ----------
    seq : CovarianceSequence or ndarray of shape (n+1, m, m)

    Returns
    -------
    ndarray, shape (m(n+1), m(n+1))
    """
    S = _blocks_of(seq)
    n1, m, _ = S.shape
    n = n1 - 1
    full = np.empty((2 * n + 1, m, m), dtype=complex)
    full[n:] = S
    full[:n] = np.conj(np.transpose(S[1:][::-1], (0, 2, 1)))
    idx = np.arange(n1)
    D = idx[:, None] - idx[None, :]
    return full[D + n].transpose(0, 2, 1, 3).reshape(n1 * m, n1 * m)


def _block_diag_means(M, m):
    """Average the blocks on each nonnegative block diagonal of (M + M*)/2."""
    N = M.shape[0]
    if M.shape != (N, N) or N % m:
        raise ValueError(f"matrix of shape {M.shape} is not divisible into {m}x{m} blocks")
    n1 = N // m
    H = (M + M.conj().T) / 2
    B = H.reshape(n1, m, n1, m).transpose(0, 2, 1, 3)
    S = np.empty((n1, m, m), dtype=complex)
    for k in range(n1):
        j = np.arange(k, n1)
        S[k] = B[j, j - k].mean(axis=0)
    return S


def toeplitz_project(M, m):
    """Project a matrix onto the Hermitian block-Toeplitz subspace.

    Each lag-k block of the result is the average of the blocks on the k-th
    block diagonal of the Hermitian part of M; assemble(toeplitz_project(M))
    is the Frobenius-orthogonal projection of M.

    Parameters
    ----------
    M : ndarray
        Square matrix whose dimension is divisible by m.
    m : int
        Block size.

    Returns
    -------
    CovarianceSequence
    """
    return CovarianceSequence(_block_diag_means(np.asarray(M, dtype=complex), m))


def steering_vector(theta, n):
    """Unit-modulus harmonic vector (1, e^{i theta}, ..., e^{i n theta})."""
    return np.exp(1j * float(theta) * np.arange(n + 1))


def steering_block(theta, n, m=2):
    """Steering matrix g(theta) kron I_m of shape (m(n+1), m)."""
    return np.kron(steering_vector(theta, n)[:, None], np.eye(m))


class BoundaryReport(NamedTuple):
    is_psd: bool
    rank: int
    min_eig: float


def boundary_check(seq, epsilon):
    """PSD status, numerical rank and minimum eigenvalue of the assembled matrix.

    A sequence lies on the boundary of the PSD cone exactly when it is PSD
    and rank deficient.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    w = np.linalg.eigvalsh(hermitian_part(assemble(seq)))
    return BoundaryReport(
        is_psd=bool(w[0] >= -epsilon),
        rank=numerical_rank(w, epsilon),
        min_eig=float(w[0]),
    )
