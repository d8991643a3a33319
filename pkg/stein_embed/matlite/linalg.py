"""
Linear algebra on SymMatrix / LowerMatrix.

Eigen-decomposition is a cyclic Jacobi iteration: matrices here have d ≤ 10,
so plain rotations are fast enough and never fail silently.
"""
import logging
from typing import Tuple

import numpy as np
from scipy.linalg import solve_triangular

from stein_embed.config import settings
from stein_embed.exceptions import NoConvergence, NotPSD, Singular
from stein_embed.matlite.matrices import LowerMatrix, SymMatrix, as_array

logger = logging.getLogger(__name__)


def supnorm(m) -> float:
    """Largest absolute entry."""
    arr = as_array(m)
    if arr.size == 0:
        return 0.0
    return float(np.max(np.abs(arr)))


def jacobi_eigen(S, max_sweeps: int = None) -> Tuple[np.ndarray, np.ndarray]:
    """
    Cyclic Jacobi eigen-decomposition of a symmetric matrix.

    Args:
        S: SymMatrix or symmetric array
        max_sweeps: sweep budget (defaults to settings.JACOBI_MAX_SWEEPS)

    Returns:
        (eigenvalues, eigenvectors) with eigenvectors as columns, eigenvalues
        sorted ascending.

    Raises:
        NoConvergence: off-diagonal mass still above tolerance after the budget
    """
    if max_sweeps is None:
        max_sweeps = settings.JACOBI_MAX_SWEEPS
    a = np.array(as_array(S), dtype=np.float64)
    d = a.shape[0]
    v = np.eye(d)
    threshold = settings.JACOBI_TOLERANCE * supnorm(a)

    def off_diagonal() -> float:
        return supnorm(a - np.diag(np.diag(a))) if d > 1 else 0.0

    sweeps = 0
    while off_diagonal() > threshold:
        if sweeps >= max_sweeps:
            raise NoConvergence(f'Jacobi did not converge in {max_sweeps} sweeps (d={d})')
        sweeps += 1
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 1.0 / (2.0 * theta)
                else:
                    t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rot = np.eye(d)
                rot[p, p] = c
                rot[q, q] = c
                rot[p, q] = s
                rot[q, p] = -s
                a = rot.T @ a @ rot
                a = (a + a.T) / 2.0
                a[p, q] = a[q, p] = 0.0
                v = v @ rot

    logger.debug(f'Jacobi converged after {sweeps} sweeps (d={d})')
    values = np.diag(a).copy()
    order = np.argsort(values, kind='stable')
    return values[order], v[:, order]


def psd_eigencheck(S) -> list:
    """Sorted eigenvalue list of a symmetric matrix."""
    values, _ = jacobi_eigen(S)
    return [float(x) for x in values]


def _clamped_spectrum(S) -> Tuple[np.ndarray, np.ndarray]:
    values, vectors = jacobi_eigen(S)
    tol = settings.EIG_TOLERANCE * supnorm(S)
    if values.size and values[0] < -tol:
        raise NotPSD(f'eigenvalue {values[0]:.3e} below -{tol:.3e}')
    negative = values < 0
    if np.any(negative):
        logger.debug(f'Clamping {int(negative.sum())} eigenvalues within tolerance to 0')
    return np.where(negative, 0.0, values), vectors


def tag_psd(S) -> SymMatrix:
    """Return S tagged PSD after checking its spectrum; NotPSD otherwise."""
    _clamped_spectrum(S)
    return SymMatrix(as_array(S), psd=True)


def sym_sqrt(S) -> SymMatrix:
    """
    Unique symmetric PSD square root.

    Eigenvalues in [-tol_eig, 0) are clamped to 0, so rank-deficient inputs
    such as Σ₀ are accepted.

    Raises:
        NotPSD: an eigenvalue below -tol_eig
    """
    values, vectors = _clamped_spectrum(S)
    root = (vectors * np.sqrt(values)) @ vectors.T
    return SymMatrix.symmetrized(root, psd=True)


def sym_inv_sqrt(S) -> SymMatrix:
    """
    Symmetric inverse square root Σ^{-1/2}.

    Raises:
        Singular: an eigenvalue at or below tol_eig
    """
    values, vectors = jacobi_eigen(S)
    tol = settings.EIG_TOLERANCE * supnorm(S)
    if values.size and values[0] <= tol:
        raise Singular(f'smallest eigenvalue {values[0]:.3e} not above {tol:.3e}')
    root = (vectors / np.sqrt(values)) @ vectors.T
    return SymMatrix.symmetrized(root, psd=True)


def lower_inverse(L: LowerMatrix) -> LowerMatrix:
    """
    Inverse of a lower-triangular matrix by forward substitution.

    Raises:
        Singular: a zero diagonal entry
    """
    arr = as_array(L)
    zero = np.flatnonzero(np.diag(arr) == 0.0)
    if zero.size:
        raise Singular(f'zero diagonal entry at index {int(zero[0])}')
    inv = solve_triangular(arr, np.eye(arr.shape[0]), lower=True)
    return LowerMatrix(np.tril(inv))


def lambda_colsums(Linv) -> np.ndarray:
    """λ⁽ⁱ⁾ = Σ_m |Linv[m, i]| for a LowerMatrix or any full matrix."""
    return np.sum(np.abs(as_array(Linv)), axis=0)
