"""Dense complex linear algebra primitives.

Thin, validated wrappers over :mod:`numpy.linalg`. Every other module goes
through these helpers so that tolerances and conventions (descending
spectra, clipping of tiny negative eigenvalues) are applied uniformly.
"""

from __future__ import annotations

from functools import reduce
from typing import NamedTuple, Sequence

import numpy as np

#: Absolute tolerance for hermiticity and positivity checks.
TOL = 1e-10


class EigenSystem(NamedTuple):
    """Eigenvalues in descending order with matching orthonormal eigenvectors (columns)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_matrix(m) -> np.ndarray:
    """Return ``m`` as a 2-D complex array, rejecting anything else."""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2:
        raise ValueError(f"expected a matrix, got array of shape {arr.shape}")
    return arr


def is_hermitian(m, tol: float = TOL) -> bool:
    arr = np.asarray(m)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        return False
    return bool(np.max(np.abs(arr - arr.conj().T), initial=0.0) <= tol)


def _check_hermitian(m) -> np.ndarray:
    arr = as_matrix(m)
    if arr.shape[0] != arr.shape[1]:
        raise ValueError(f"matrix must be square, got shape {arr.shape}")
    if not is_hermitian(arr):
        raise ValueError("matrix is not hermitian within tolerance")
    return arr


def hermitian_eig(m) -> EigenSystem:
    """Eigen-decomposition of a hermitian matrix.

    Parameters
    ----------
    m : array_like
        Square hermitian matrix.

    Returns
    -------
    EigenSystem
        Eigenvalues sorted in descending order and the corresponding
        orthonormal eigenvectors stored as columns.

    Raises
    ------
    ValueError
        If ``m`` is not square or not hermitian within :data:`TOL`.
    """
    arr = _check_hermitian(m)
    arr = 0.5 * (arr + arr.conj().T)
    vals, vecs = np.linalg.eigh(arr)
    return EigenSystem(vals[::-1].copy(), vecs[:, ::-1].copy())


def svd(m):
    """Thin singular value decomposition ``M = U diag(s) V^dagger``.

    Returns
    -------
    U : ndarray
        Left isometry.
    s : ndarray
        Singular values, descending.
    V : ndarray
        Right isometry (not its adjoint).
    """
    arr = as_matrix(m)
    u, s, vh = np.linalg.svd(arr, full_matrices=False)
    return u, s, vh.conj().T


def trace_norm(m) -> float:
    """Sum of singular values."""
    arr = as_matrix(m)
    return float(np.sum(np.linalg.svd(arr, compute_uv=False)))


def psd_spectrum(m, tol: float = TOL) -> np.ndarray:
    """Descending eigenvalues of a PSD matrix with ``[-tol, 0)`` clipped to zero.

    Raises
    ------
    ValueError
        If an eigenvalue lies below ``-tol``.
    """
    arr = _check_hermitian(m)
    vals = np.linalg.eigvalsh(0.5 * (arr + arr.conj().T))[::-1]
    if vals.size and vals[-1] < -tol:
        raise ValueError(f"matrix is not positive semidefinite (min eigenvalue {vals[-1]:.3e})")
    return np.clip(vals, 0.0, None)


def matrix_power(m, p: float) -> np.ndarray:
    """Real power of a PSD matrix via its spectral decomposition.

    Parameters
    ----------
    m : array_like
        Positive semidefinite matrix; eigenvalues in ``[-TOL, 0)`` are
        treated as zero.
    p : float
        Exponent. ``0**p`` is taken as 0 for ``p > 0``; for ``p == 0`` the
        result is the projector onto the support.

    Raises
    ------
    ValueError
        If ``m`` is not PSD, or ``p < 0`` and ``m`` is singular.
    """
    vals, vecs = hermitian_eig(m)
    if vals.size and vals[-1] < -TOL:
        raise ValueError(f"matrix is not positive semidefinite (min eigenvalue {vals[-1]:.3e})")
    vals = np.clip(vals, 0.0, None)
    support = vals > TOL
    if p < 0 and not np.all(support):
        raise ValueError("negative power of a singular matrix")
    powered = np.zeros_like(vals)
    powered[support] = vals[support] ** p
    return (vecs * powered) @ vecs.conj().T


def sqrtm_psd(m) -> np.ndarray:
    """Principal square root of a PSD matrix."""
    return matrix_power(m, 0.5)


def kron(factors: Sequence) -> np.ndarray:
    """Kronecker product of a nonempty list, in listed order."""
    if len(factors) == 0:
        raise ValueError("kron needs at least one factor")
    return reduce(np.kron, [np.asarray(f, dtype=complex) for f in factors])


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary from the QR decomposition of a Ginibre matrix."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases
