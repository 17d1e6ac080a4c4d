"""Dense complex linear-algebra primitives.

Hermitian eigendecomposition, numerical rank, rank factorization, projection
onto the positive semidefinite cone, and the generalized eigenproblem of a
matrix pair, with explicit residual contracts. Everything operates on plain
ndarrays and is pure.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .config import CHOLESKY_RELATIVE_TOL
from .errors import EigenSolverError, NotPsdError, SingularPencilError


def hermitian_part(A):
    """Return (A + A*)/2 as a complex array."""
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    return (A + A.conj().T) / 2


@dataclass
class EigenDecomposition:
    """Eigenpairs of a Hermitian matrix.

    Attributes
    ----------
    eigenvalues : ndarray
        Real eigenvalues in ascending order.
    eigenvectors : ndarray
        Unitary matrix whose columns are the matching eigenvectors.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def hermitian_eig(A):
    """Eigendecomposition of the Hermitian part of A.

    Parameters
    ----------
    A : array_like
        Square complex matrix; symmetrized before factorization.

    Returns
    -------
    EigenDecomposition
        Ascending eigenvalues and unitary eigenvector matrix.
    """
    H = hermitian_part(A)
    try:
        w, U = np.linalg.eigh(H)
    except np.linalg.LinAlgError as exc:
        raise EigenSolverError(H.shape[0]) from exc
    return EigenDecomposition(w, U)


def numerical_rank(eigenvalues, epsilon):
    """Count eigenvalues strictly greater than epsilon.

    Parameters
    ----------
    eigenvalues : array_like
        Real eigenvalues, any order.
    epsilon : float
        Positive threshold below which values count as zero.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    return int(np.sum(np.asarray(eigenvalues, dtype=float) > epsilon))


def rank_factorize(T, epsilon):
    """Factor a PSD matrix as T = V V* with V of full column rank.

    V collects the eigenvectors of the numerically nonzero eigenvalues,
    scaled by their square roots, ordered by decreasing eigenvalue.

    Parameters
    ----------
    T : array_like
        Hermitian matrix, PSD up to epsilon.
    epsilon : float
        Rank threshold; eigenvalues below -epsilon raise NotPsdError.

    Returns
    -------
    V : ndarray, shape (dim, r)
    """
    dec = hermitian_eig(T)
    w = dec.eigenvalues
    if w.size and w[0] < -epsilon:
        raise NotPsdError(w[0], epsilon)
    r = numerical_rank(w, epsilon)
    if r == 0:
        return np.zeros((w.size, 0), dtype=complex)
    # eigh sorts ascending; take the top r columns in descending order
    wr = w[-r:][::-1]
    Ur = dec.eigenvectors[:, -r:][:, ::-1]
    return Ur * np.sqrt(wr)


def psd_project(A):
    """Project onto the PSD cone by clipping negative eigenvalues.

    Returns the Frobenius-nearest positive semidefinite matrix to the
    Hermitian part of A.
    """
    dec = hermitian_eig(A)
    wp = np.clip(dec.eigenvalues, 0.0, None)
    U = dec.eigenvectors
    Z = (U * wp) @ U.conj().T
    return (Z + Z.conj().T) / 2


def generalized_eig_pair(A, B):
    """Eigenpairs of the matrix pair (A, B) with B Hermitian positive definite.

    Solves A v = lambda B v by whitening: with B = L L*, the standard
    eigenproblem of L^-1 A L^-* is solved and eigenvectors are mapped back
    through L^-* and normalized to unit length. A may be any square complex
    matrix; the eigenvalues are complex in general.

    Parameters
    ----------
    A : array_like
        Square complex matrix.
    B : array_like
        Hermitian positive definite matrix of matching shape.

    Returns
    -------
    eigenvalues : ndarray of complex
    eigenvectors : ndarray
        Unit-norm columns satisfying A v = lambda B v.

    Raises
    ------
    SingularPencilError
        If B is not positive definite to working tolerance.
    """
    A = np.asarray(A, dtype=complex)
    H = hermitian_part(B)
    dim = H.shape[0]
    if A.shape != H.shape:
        raise ValueError(f"shape mismatch: A {A.shape} vs B {H.shape}")
    wB = np.linalg.eigvalsh(H)
    floor = CHOLESKY_RELATIVE_TOL * max(np.trace(H).real, 0.0) / dim
    if wB[0] <= floor:
        raise SingularPencilError(
            f"pair matrix is numerically singular: smallest eigenvalue "
            f"{wB[0]:.3e} at tolerance {floor:.3e}"
        )
    try:
        L = np.linalg.cholesky(H)
    except np.linalg.LinAlgError as exc:
        raise SingularPencilError("Cholesky factorization failed") from exc
    X = solve_triangular(L, A, lower=True)
    C = solve_triangular(L, X.conj().T, lower=True).conj().T
    lam, Z = np.linalg.eig(C)
    V = solve_triangular(L.conj().T, Z, lower=False)
    V = V / np.linalg.norm(V, axis=0, keepdims=True)
    return lam, V
