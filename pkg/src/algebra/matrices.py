"""
Dense complex matrix helpers.

Matrices are plain ``numpy`` arrays of ``complex128``; this module adds the
norms and fits used by the operator comparisons.
"""

from typing import Tuple

import numpy as np
import numpy.typing as npt

ComplexMatrix = npt.NDArray[np.complex128]


def identity(size: int) -> ComplexMatrix:
    return np.eye(size, dtype=np.complex128)


def max_abs(matrix: np.ndarray) -> float:
    """Largest entry modulus; 0.0 for empty matrices."""
    if matrix.size == 0:
        return 0.0
    return float(np.max(np.abs(matrix)))


def hermitian_defect(matrix: np.ndarray) -> float:
    return max_abs(matrix - matrix.conj().T)


def best_scalar_fit(candidate: np.ndarray, target: np.ndarray) -> Tuple[complex, float]:
    """
    Fit ``target ~ lam * candidate``.

    The scalar minimises the Frobenius residual; the returned deviation is the
    max-abs norm of ``lam * candidate - target``. A vanishing candidate gets
    lam = 1.

    Returns:
        (lam, deviation)
    """
    weight = np.vdot(candidate, candidate)
    if abs(weight) < 1e-300:
        lam = complex(1.0)
    else:
        lam = complex(np.vdot(candidate, target) / weight)
    return lam, max_abs(lam * candidate - target)


def chebyshev_first_kind(degree: int, x: np.ndarray) -> ComplexMatrix:
    """
    T_d(X) with T_0 = 2I, T_1 = X, T_{d+1} = X T_d - T_{d-1}.

    This is the normalisation in which T_d(2cos t) = 2cos(d t).
    """
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    size = x.shape[0]
    previous, current = 2 * identity(size), x.astype(np.complex128)
    if degree == 0:
        return previous
    for _ in range(degree - 1):
        previous, current = current, x @ current - previous
    return current


def chebyshev_second_kind(index: int, x: np.ndarray) -> ComplexMatrix:
    """S_n(X) with S_0 = I, S_1 = X, S_{n+1} = X S_n - S_{n-1}; S_{-1} = 0."""
    size = x.shape[0]
    if index < 0:
        return np.zeros((size, size), dtype=np.complex128)
    previous, current = np.zeros((size, size), dtype=np.complex128), identity(size)
    for _ in range(index):
        previous, current = current, x @ current - previous
    return current
