import logging
from functools import lru_cache
from typing import List

import numpy as np

from .errors import BadDimensionError
from .models import AdjointMatrix, SuBasis, UnitaryGate
from .su2_service import X, Y, Z

logger = logging.getLogger(__name__)


def _gell_mann(d: int) -> List[np.ndarray]:
    """Generalized Gell-Mann matrices: symmetric, antisymmetric, then diagonal."""
    symmetric, antisymmetric, diagonal = [], [], []
    for j in range(d):
        for k in range(j + 1, d):
            s = np.zeros((d, d), dtype=complex)
            s[j, k] = s[k, j] = 1.0
            symmetric.append(s)

            a = np.zeros((d, d), dtype=complex)
            a[j, k], a[k, j] = -1j, 1j
            antisymmetric.append(a)

    for l in range(1, d):
        g = np.zeros((d, d), dtype=complex)
        g[np.arange(l), np.arange(l)] = 1.0
        g[l, l] = -l
        diagonal.append(np.sqrt(2.0 / (l * (l + 1))) * g)

    return symmetric + antisymmetric + diagonal


@lru_cache(maxsize=None)
def su_basis(d: int) -> SuBasis:
    """
    Orthonormal basis of su(d), (X_i|X_j) = -1/2 tr X_i X_j = delta_ij.

    For d = 2 the order is (Z, Y, X) with Z = -i sigma_3, Y = i sigma_1,
    X = i sigma_2, which makes adjoint_of(U(phi, k)) equal O(2 phi, k).
    For d >= 3 the elements are i times the generalized Gell-Mann matrices:
    symmetric pairs (row-major), antisymmetric pairs, then diagonal ones.

    Args:
        d: Dimension, at least 2

    Returns:
        SuBasis: d^2 - 1 antihermitian traceless matrices (read-only, cached per d)

    Raises:
        BadDimensionError: If d < 2
    """
    if d < 2:
        raise BadDimensionError(f"su(d) needs d >= 2, got {d}")

    if d == 2:
        elements = [Z, Y, X]
    else:
        elements = [1j * g for g in _gell_mann(d)]

    frozen = []
    for e in elements:
        e = np.array(e, dtype=complex)
        e.setflags(write=False)
        frozen.append(e)

    logger.debug(f"Built su({d}) basis with {len(frozen)} elements")
    return SuBasis(d, tuple(frozen))


def inner(x: np.ndarray, y: np.ndarray) -> float:
    """(X|Y) = -1/2 tr XY."""
    return float(np.real(-0.5 * np.trace(x @ y)))


def adjoint_of(u: UnitaryGate) -> AdjointMatrix:
    """
    Adjoint representation matrix with (Ad_U)_ij = -1/2 tr(X_i U X_j U^-1).

    Args:
        u: A validated special-unitary gate

    Returns:
        AdjointMatrix: Real orthogonal (d^2-1) x (d^2-1) matrix, det 1
    """
    basis = su_basis(u.d).stacked()
    m = u.matrix
    conjugated = np.einsum("ab,jbc,cd->jad", m, basis, m.conj().T)
    entries = -0.5 * np.einsum("iab,jba->ij", basis, conjugated)
    return AdjointMatrix(u.d, np.real(entries))


def basis_coordinates(x: np.ndarray, d: int) -> np.ndarray:
    """Coordinates of an su(d) element in su_basis(d)."""
    return np.array([inner(e, x) for e in su_basis(d).elements])
