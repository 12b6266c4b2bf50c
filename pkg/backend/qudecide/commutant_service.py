import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

import numpy as np

from .adjoint_service import adjoint_of
from .config import TOL_RANK, get_thread_count
from .linalg_service import kernel_basis, unvectorize, vectorize
from .models import CommutantReport, GateSet, UnitaryGate

logger = logging.getLogger(__name__)


def _commutator_block(gate: UnitaryGate) -> np.ndarray:
    """I (x) Ad_U - Ad_{U^dagger} (x) I, so that block @ vec(L) = vec(Ad_U L - L Ad_U)."""
    ad = adjoint_of(gate).entries
    n = ad.shape[0]
    identity = np.eye(n)
    return np.kron(identity, ad) - np.kron(ad.T, identity)


def build_MS(s: GateSet, threads: Optional[int] = None) -> np.ndarray:
    """
    Stack the commutator blocks of every gate, in gate order.

    Args:
        s: The gate set
        threads: Worker cap for per-gate blocks; QUDECIDE_THREADS when None

    Returns:
        np.ndarray: Real n(d^2-1)^2 x (d^2-1)^2 matrix whose kernel is vec of the commutant
    """
    workers = min(get_thread_count(threads), len(s))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            blocks = list(pool.map(_commutator_block, s.gates))
    else:
        blocks = [_commutator_block(gate) for gate in s.gates]
    return np.vstack(blocks)


def necessary_condition(s: GateSet, tol_rank: float = TOL_RANK, threads: Optional[int] = None) -> CommutantReport:
    """
    Commutant test: trivial iff the kernel of M_S is one-dimensional.

    When the kernel is larger, the witness is a kernel vector orthogonalized
    against vec(I), normalized, and reshaped to a (d^2-1) x (d^2-1) matrix.

    Args:
        s: The gate set
        tol_rank: Relative singular-value cutoff
        threads: Worker cap for building M_S

    Returns:
        CommutantReport: kernel dimension, triviality and optional witness
    """
    ms = build_MS(s, threads)
    basis = kernel_basis(ms, tol_rank)
    kernel_dim = basis.shape[1]
    n = s.d * s.d - 1

    witness = None
    if kernel_dim >= 2:
        e = vectorize(np.eye(n)) / np.sqrt(n)
        residual = basis - np.outer(e, e @ basis)
        norms = np.linalg.norm(residual, axis=0)
        best = int(np.argmax(norms))
        w = np.real(residual[:, best]) / norms[best]
        witness = unvectorize(w, n, n)

    logger.info(f"Commutant test on {len(s)} gate(s), d={s.d}: kernel_dim={kernel_dim}")
    return CommutantReport(kernel_dim=kernel_dim, trivial=kernel_dim == 1, witness=witness)
