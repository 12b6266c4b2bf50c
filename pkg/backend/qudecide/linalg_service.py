import logging
from typing import Optional

import numpy as np
from scipy import linalg

from .config import TOL_RANK, TOL_SINGULAR
from .errors import DimensionMismatchError, SingularMatrixError
from .models import Eigenphases, UnitaryGate

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi


def hs_norm(m: np.ndarray) -> float:
    """
    Hilbert-Schmidt norm sqrt(tr M M^dagger).

    Args:
        m: Any complex or real matrix

    Returns:
        float: The norm, zero only for the zero matrix
    """
    return float(np.linalg.norm(m))


def eigenphases(u: UnitaryGate) -> Eigenphases:
    """
    Phases of the spectrum of a special-unitary gate.

    Args:
        u: The gate (validated on construction)

    Returns:
        Eigenphases: d angles in [0, 2pi), sorted ascending; ties keep eigenvector order
    """
    values = np.linalg.eigvals(u.matrix)
    phases = np.mod(np.angle(values), TWO_PI)
    # Snap values that round up to a full turn
    phases[phases >= TWO_PI - 1e-12] = 0.0
    order = np.argsort(phases, kind="stable")
    return tuple(float(p) for p in phases[order])


def kernel_dimension(m: np.ndarray, tol_rank: float = TOL_RANK) -> int:
    """
    Dimension of the (right) kernel, counting singular values <= tol_rank * sigma_max.

    Args:
        m: Nonempty matrix
        tol_rank: Cutoff relative to the largest singular value

    Returns:
        int: cols - numerical rank; cols for the zero matrix
    """
    cols = m.shape[1]
    s = linalg.svd(m, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return cols
    rank = int(np.count_nonzero(s > tol_rank * s[0]))
    return cols - rank


def kernel_basis(m: np.ndarray, tol_rank: float = TOL_RANK) -> np.ndarray:
    """Orthonormal kernel basis as columns, using the same cutoff as kernel_dimension."""
    cols = m.shape[1]
    _, s, vh = linalg.svd(m)
    if s.size == 0 or s[0] == 0.0:
        return np.eye(cols, dtype=m.dtype)
    rank = int(np.count_nonzero(s > tol_rank * s[0]))
    return vh[rank:].conj().T


def vectorize(m: np.ndarray) -> np.ndarray:
    """Stack the columns of m on top of one another."""
    return np.asarray(m).reshape(-1, order="F")


def unvectorize(v: np.ndarray, rows: int, cols: int) -> np.ndarray:
    """Inverse of vectorize."""
    return np.asarray(v).reshape((rows, cols), order="F")


def group_commutator(u1: UnitaryGate, u2: UnitaryGate) -> UnitaryGate:
    """
    Group commutator U1 U2 U1^-1 U2^-1.

    Raises:
        DimensionMismatchError: If the gates act on different dimensions
    """
    if u1.d != u2.d:
        raise DimensionMismatchError(f"cannot commute d={u1.d} with d={u2.d}")
    a, b = u1.matrix, u2.matrix
    product = a @ b @ a.conj().T @ b.conj().T
    return UnitaryGate(f"[{u1.name},{u2.name}]", product)


def project_to_special_unitary(m: np.ndarray, name: str = "projected") -> UnitaryGate:
    """
    Nearest unitary (polar factor) rescaled to determinant one.

    Args:
        m: Square nonsingular matrix
        name: Name for the resulting gate

    Returns:
        UnitaryGate: W V^dagger from the SVD of m, times det^(-1/d)

    Raises:
        SingularMatrixError: If the smallest singular value is below 1e-12
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {m.shape}")
    d = m.shape[0]

    w, s, vh = linalg.svd(m)
    if s[-1] < TOL_SINGULAR:
        raise SingularMatrixError(f"smallest singular value {s[-1]:.3e} is below {TOL_SINGULAR:.0e}")

    u = w @ vh
    det_phase = np.angle(np.linalg.det(u))
    u = u * np.exp(-1j * det_phase / d)
    return UnitaryGate(name, u)


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random U(d) matrix: QR of a complex Ginibre matrix with R-diagonal phase fix."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2.0)
    q, r = linalg.qr(z)
    diag = np.diag(r)
    return q * (diag / np.abs(diag))


def haar_special_unitary(d: int, rng: np.random.Generator, name: Optional[str] = None) -> UnitaryGate:
    """Haar-random SU(d) gate: haar_unitary rescaled by a d-th root of its determinant."""
    q = haar_unitary(d, rng)
    q = q * np.exp(-1j * np.angle(np.linalg.det(q)) / d)
    return UnitaryGate(name or "haar", q)
