"""
SU(2) / SO(3) axis-angle geometry.

Pauli assignment: X = i sigma_2, Y = i sigma_1, Z = -i sigma_3. With it
U(phi, (0,0,1)) = diag(e^{-i phi}, e^{i phi}) is the phase gate T_phi,
U(pi/2, (1,0,0)) = [[0, 1], [-1, 0]], and the quaternion units satisfy
XY = -Z, YZ = -X, ZX = -Y.
"""

import logging
from math import gcd
from typing import Tuple

import numpy as np

from .config import TOL_DEGENERATE, TOL_PHASE
from .errors import CommutingPairError, DegenerateCompositionError, DimensionMismatchError, NonUnitAxisError
from .linalg_service import hs_norm
from .models import AdjointMatrix, AxisAngle, UnitaryGate

logger = logging.getLogger(__name__)

SIGMA_1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_3 = np.array([[1, 0], [0, -1]], dtype=complex)

X = 1j * SIGMA_2
Y = 1j * SIGMA_1
Z = -1j * SIGMA_3

# Coefficient order of k = (k_x, k_y, k_z)
GENERATORS = (X, Y, Z)

# Largest denominator i in the exceptional list k_i pi / i
MAX_EXCEPTIONAL_DENOMINATOR = 6


def _build_exceptional_table() -> Tuple[float, ...]:
    angles = set()
    for i in range(1, MAX_EXCEPTIONAL_DENOMINATOR + 1):
        for k in range(0, 2 * i):
            if gcd(k, i) == 1:
                angles.add((k, i))
    return tuple(sorted(k * np.pi / i for k, i in angles))


EXCEPTIONAL_ANGLES: Tuple[float, ...] = _build_exceptional_table()


def _euler_phi(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


def exceptional_angle_count() -> int:
    """Count of exceptional angles from the totient identity (24)."""
    return sum(_euler_phi(i) for i in range(1, 7)) + sum(_euler_phi(2 * i) for i in range(4, 7))


def _unit_axis(k) -> np.ndarray:
    v = np.asarray(k, dtype=float)
    if v.shape != (3,) or not abs(float(v @ v) - 1.0) <= 1e-12:
        raise NonUnitAxisError(f"axis {tuple(v)} is not a unit 3-vector")
    return v


def su2_from_axis_angle(a: AxisAngle, name: str = "U") -> UnitaryGate:
    """
    Build U(phi, k) = I cos(phi) + sin(phi)(k_x X + k_y Y + k_z Z).

    Args:
        a: Angle and unit axis
        name: Name for the gate

    Returns:
        UnitaryGate: The 2 x 2 special-unitary matrix
    """
    kx, ky, kz = a.k
    m = np.cos(a.phi) * np.eye(2) + np.sin(a.phi) * (kx * X + ky * Y + kz * Z)
    return UnitaryGate(name, m)


def _rotation_generator(k: np.ndarray) -> np.ndarray:
    """-k_x X12 + k_y X13 - k_z X23 with X_ij = E_ij - E_ji (1-based indices)."""
    kx, ky, kz = k
    g = np.zeros((3, 3))
    g[0, 1], g[1, 0] = -kx, kx
    g[0, 2], g[2, 0] = ky, -ky
    g[1, 2], g[2, 1] = -kz, kz
    return g


def so3_from_axis_angle(phi: float, k) -> AdjointMatrix:
    """
    Build O(phi, k) = I + sin(phi) K + 2 sin^2(phi/2) K^2.

    Raises:
        NonUnitAxisError: If k is not a unit 3-vector
    """
    g = _rotation_generator(_unit_axis(k))
    o = np.eye(3) + np.sin(phi) * g + 2.0 * np.sin(phi / 2.0) ** 2 * (g @ g)
    return AdjointMatrix(2, o)


def compose_axis_angle(a1: AxisAngle, a2: AxisAngle) -> AxisAngle:
    """
    Axis-angle form of U(phi1, k1) U(phi2, k2).

    cos(gamma) = cos(phi1)cos(phi2) - sin(phi1)sin(phi2)(k1.k2), gamma in [0, pi].
    The axis is (k1 sin(phi1)cos(phi2) + k2 sin(phi2)cos(phi1) - k1 x k2 sin(phi1)sin(phi2)) / sin(gamma);
    the cross term's sign follows XY = -Z.

    Args:
        a1: Left factor
        a2: Right factor

    Returns:
        AxisAngle: (gamma, k12) with su2_from_axis_angle(result) equal to the product

    Raises:
        DegenerateCompositionError: If |sin(gamma)| < 1e-12; `fallback` is (gamma, (0,0,1))
    """
    k1, k2 = a1.axis, a2.axis
    c1, s1 = np.cos(a1.phi), np.sin(a1.phi)
    c2, s2 = np.cos(a2.phi), np.sin(a2.phi)

    cos_gamma = c1 * c2 - s1 * s2 * float(k1 @ k2)
    v = k1 * s1 * c2 + k2 * s2 * c1 - np.cross(k1, k2) * s1 * s2
    sin_gamma = float(np.linalg.norm(v))
    gamma = float(np.arctan2(sin_gamma, cos_gamma))

    if sin_gamma < TOL_DEGENERATE:
        fallback = AxisAngle(0.0 if cos_gamma > 0 else np.pi, (0.0, 0.0, 1.0))
        raise DegenerateCompositionError(
            f"product is {'+' if cos_gamma > 0 else '-'}I (|sin gamma| = {sin_gamma:.1e})",
            fallback=fallback,
        )
    return AxisAngle.normalized(gamma, v)


def axis_angle_from_su2(u: UnitaryGate) -> AxisAngle:
    """
    Inverse parametrization with phi in [0, pi].

    Raises:
        DimensionMismatchError: If u is not 2 x 2
    """
    if u.d != 2:
        raise DimensionMismatchError(f"axis-angle form needs d=2, got d={u.d}")
    m = u.matrix
    a0 = float(np.real(np.trace(m))) / 2.0
    # Coefficient of an su(2) unit E in U is -Re tr(E U) / 2
    vec = np.array([-float(np.real(np.trace(g @ m))) / 2.0 for g in GENERATORS])
    norm = float(np.linalg.norm(vec))
    if norm < TOL_DEGENERATE:
        return AxisAngle(0.0 if a0 > 0 else np.pi, (0.0, 0.0, 1.0))
    return AxisAngle.normalized(float(np.arctan2(norm, a0)), vec)


def su2_commute(a1: AxisAngle, a2: AxisAngle, tol: float = TOL_PHASE) -> bool:
    """U(phi1, k1) and U(phi2, k2) commute iff the axes are parallel or some phi = k pi."""
    if _near_multiple(a1.phi, np.pi, tol) or _near_multiple(a2.phi, np.pi, tol):
        return True
    return float(np.linalg.norm(np.cross(a1.axis, a2.axis))) < tol


def so3_commute(a1: AxisAngle, a2: AxisAngle, tol: float = TOL_PHASE) -> bool:
    """
    Whether the rotations O(phi1, k1) and O(phi2, k2) commute.

    True iff the axes are parallel, some phi = 0 (mod 2 pi), or
    phi1 = pi = phi2 (mod 2 pi) with perpendicular axes.
    """
    if _near_multiple(a1.phi, 2 * np.pi, tol) or _near_multiple(a2.phi, 2 * np.pi, tol):
        return True
    if float(np.linalg.norm(np.cross(a1.axis, a2.axis))) < tol:
        return True
    half_turns = _near_odd_multiple(a1.phi, np.pi, tol) and _near_odd_multiple(a2.phi, np.pi, tol)
    return half_turns and abs(float(a1.axis @ a2.axis)) < tol


def commutant_trivial_su2(a1: AxisAngle, a2: AxisAngle, tol: float = TOL_PHASE) -> bool:
    """
    Closed-form commutant test for a noncommuting SU(2) pair.

    The commutant of {Ad U1, Ad U2} is nontrivial iff (1) both angles are odd
    multiples of pi/2, or (2) one angle is an odd multiple of pi/2 and the axes
    are perpendicular.

    Args:
        a1: First gate
        a2: Second gate
        tol: Angle and orthogonality tolerance

    Returns:
        bool: True when the commutant is only the real multiples of I

    Raises:
        CommutingPairError: If the two gates commute
    """
    u1 = su2_from_axis_angle(a1).matrix
    u2 = su2_from_axis_angle(a2).matrix
    if hs_norm(u1 @ u2 - u2 @ u1) <= 1e-8:
        raise CommutingPairError(f"U({a1.phi:.6g}, {a1.k}) and U({a2.phi:.6g}, {a2.k}) commute")

    quarter1 = _near_odd_multiple(a1.phi, np.pi / 2, tol)
    quarter2 = _near_odd_multiple(a2.phi, np.pi / 2, tol)
    perpendicular = abs(float(a1.axis @ a2.axis)) < tol

    if quarter1 and quarter2:
        return False
    if (quarter1 or quarter2) and perpendicular:
        return False
    return True


def _near_multiple(x: float, step: float, tol: float) -> bool:
    r = np.mod(x, step)
    return min(r, step - r) < tol


def _near_odd_multiple(x: float, step: float, tol: float) -> bool:
    r = np.mod(x - step, 2 * step)
    return min(r, 2 * step - r) < tol


def _rational_pi_denominator(phi: float, tol: float):
    """Smallest q <= 6 with phi/pi within tol/pi of p/q, from continued-fraction convergents."""
    x = phi / np.pi
    h_prev, h = 1, int(np.floor(x))
    k_prev, k = 0, 1
    frac = x - np.floor(x)
    for _ in range(32):
        if abs(x - h / k) * np.pi <= tol:
            return h, k
        if frac < 1e-15 or k > MAX_EXCEPTIONAL_DENOMINATOR:
            break
        inv = 1.0 / frac
        a = int(np.floor(inv))
        frac = inv - a
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
    return None


def is_exceptional_angle(phi: float, tol: float = TOL_PHASE) -> bool:
    """
    Whether phi mod 2pi is within tol of one of the 24 exceptional angles.

    Rational detection (denominator <= 6) is cross-checked against the table.
    """
    reduced = float(np.mod(phi, 2 * np.pi))
    in_table = any(
        min(abs(reduced - theta), 2 * np.pi - abs(reduced - theta)) <= tol
        for theta in EXCEPTIONAL_ANGLES
    )
    rational = _rational_pi_denominator(reduced, tol)
    detected = rational is not None and rational[1] <= MAX_EXCEPTIONAL_DENOMINATOR
    if detected != in_table:
        logger.warning(f"Exceptional-angle checks disagree for phi={phi!r}; using the table")
    return in_table
