import logging
from math import asin, ceil, pi, sqrt
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .config import TOL_BOUNDARY, TOL_CENTER, TOL_PHASE
from .errors import BadDimensionError, DimensionMismatchError
from .linalg_service import eigenphases
from .models import BallMembership, CenterElement, SpectrumClass, UnitaryGate

logger = logging.getLogger(__name__)

# B_alpha = {U : ||U - alpha I|| <= 1/sqrt(2)}
BALL_RADIUS = 1.0 / sqrt(2.0)
BALL_THRESHOLD = 1.0 / 8.0


def dirichlet_power_bound() -> int:
    """Upper bound on n_U for SU(2): ceil((pi/2 - arcsin 1/4) / arcsin 1/4) = 6."""
    a = asin(0.25)
    return int(ceil((pi / 2 - a) / a))


N_SU2 = dirichlet_power_bound()


def center_elements(d: int) -> List[CenterElement]:
    """
    The center Z(SU(d)) = {alpha_m I : alpha_m = exp(2 pi i m / d)}.

    Raises:
        BadDimensionError: If d < 2
    """
    if d < 2:
        raise BadDimensionError(f"center needs d >= 2, got {d}")
    return [CenterElement(m, d, complex(np.exp(2j * np.pi * m / d))) for m in range(d)]


def distance_to_center(u: UnitaryGate, c: CenterElement) -> float:
    """
    ||U - alpha I|| from the trace identity 2 tr I - alpha tr U^dagger - alpha* tr U.

    Raises:
        DimensionMismatchError: If the center element belongs to another dimension
    """
    if u.d != c.d:
        raise DimensionMismatchError(f"center element for d={c.d} used with d={u.d}")
    tr = complex(np.trace(u.matrix))
    value = 2 * u.d - c.alpha * tr.conjugate() - c.alpha.conjugate() * tr
    return sqrt(max(float(np.real(value)), 0.0))


def criterion_sums(phases, d: int) -> np.ndarray:
    """
    sum_i sin^2((phi_i - theta_m) / 2) for every center m.

    Args:
        phases: Array whose last axis holds the d eigenphases
        d: Dimension

    Returns:
        np.ndarray: Same leading shape as phases, last axis indexed by m
    """
    phases = np.asarray(phases, dtype=float)
    thetas = 2.0 * np.pi * np.arange(d) / d
    diffs = phases[..., None, :] - thetas[:, None]
    return np.sum(np.sin(diffs / 2.0) ** 2, axis=-1)


def _membership_from_phases(phases: Sequence[float], d: int) -> BallMembership:
    sums = criterion_sums(phases, d)
    best = int(np.argmin(sums))
    value = float(sums[best])
    # ||U - alpha I||^2 = 4 sum_i sin^2((phi_i - theta)/2)
    distance = 2.0 * sqrt(value)
    boundary = abs(value - BALL_THRESHOLD) <= TOL_BOUNDARY
    in_ball = value < BALL_THRESHOLD and not boundary
    center = center_elements(d)[best] if in_ball else None
    return BallMembership(in_ball=in_ball, center=center, distance=distance, boundary=boundary)


def ball_membership(u: UnitaryGate) -> BallMembership:
    """
    Whether U lies in some ball B_alpha, using the strict eigenphase criterion.

    Values within 1e-12 of the 1/8 threshold count as outside and set `boundary`.

    Args:
        u: The gate

    Returns:
        BallMembership: nearest center when inside, plus the distance to the nearest center
    """
    membership = _membership_from_phases(eigenphases(u), u.d)
    if membership.boundary:
        logger.warning(f"Gate '{u.name}' sits on the ball boundary; classified as outside")
    return membership


def in_ball_not_center(u: UnitaryGate, tol_center: float = TOL_CENTER) -> bool:
    """True iff U is in the union of balls but farther than tol_center from every center."""
    membership = ball_membership(u)
    return membership.in_ball and membership.distance > tol_center


def power_into_ball(u: UnitaryGate, n_max: int) -> Optional[int]:
    """
    Smallest 1 <= n <= n_max with U^n inside the union of balls.

    The powers are evaluated on the eigenphases (n * phi_i), which is exact
    for the spectrum of U^n.

    Args:
        u: The gate
        n_max: Largest power tried

    Returns:
        Optional[int]: n_U, or None when no power up to n_max enters a ball
    """
    phases = np.array(eigenphases(u))
    for n in range(1, n_max + 1):
        if _membership_from_phases(n * phases, u.d).in_ball:
            return n
    return None


def scan_powers(u: UnitaryGate, n_max: int, tol_center: float = TOL_CENTER) -> Tuple[Optional[int], bool]:
    """
    Search U^n, 1 <= n <= n_max, for an element of the balls that is not central.

    Returns:
        Tuple[Optional[int], bool]: first such n (None if absent) and whether any
        scanned power sat on the ball boundary
    """
    phases = np.array(eigenphases(u))
    boundary = False
    for n in range(1, n_max + 1):
        membership = _membership_from_phases(n * phases, u.d)
        boundary = boundary or membership.boundary
        if membership.in_ball and membership.distance > tol_center:
            return n, boundary
    return None, boundary


def escape_power(u: UnitaryGate, n_max: int, tol_center: float = TOL_CENTER) -> Optional[int]:
    """Smallest 1 <= n <= n_max with U^n in a ball but not central; powers hitting the center are skipped."""
    return scan_powers(u, n_max, tol_center)[0]


def _wrapped(x: np.ndarray) -> np.ndarray:
    return np.abs(np.angle(np.exp(1j * x)))


def is_exceptional_spectrum(u: UnitaryGate, n_bound: int) -> SpectrumClass:
    """
    Classify the spectrum of U (meaningful only outside the balls).

    Exceptional iff U is outside every ball and, for some 1 <= n <= n_bound and a
    single alpha with alpha^d = 1, every e^{i n phi_j} equals alpha (phase
    tolerance 1e-9 on phi_j).

    Args:
        u: The gate
        n_bound: Largest n considered (6 for d = 2)

    Returns:
        SpectrumClass: phases, the exceptional flag and n_U when some power enters a ball
    """
    phases = eigenphases(u)
    n_power = power_into_ball(u, n_bound)
    if ball_membership(u).in_ball:
        return SpectrumClass(phases=phases, exceptional=False, n_power=n_power)

    arr = np.array(phases)
    for n in range(1, n_bound + 1):
        for c in center_elements(u.d):
            if np.all(_wrapped(n * arr - c.theta) / n <= TOL_PHASE):
                return SpectrumClass(phases=phases, exceptional=True, n_power=n_power)
    return SpectrumClass(phases=phases, exceptional=False, n_power=n_power)
