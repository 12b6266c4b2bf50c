from __future__ import annotations

from typing import Callable, List, Tuple

import numpy as np
import pytest

from qudecide.main import HADAMARD, phase_gate
from qudecide.models import AxisAngle, GateSet, UnitaryGate
from qudecide.su2_service import su2_from_axis_angle


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240617)


@pytest.fixture
def hadamard() -> UnitaryGate:
    return UnitaryGate("H", HADAMARD)


@pytest.fixture
def h_and_phase(hadamard: UnitaryGate) -> Callable[[float], GateSet]:
    def build(phi: float) -> GateSet:
        return GateSet.of(hadamard, UnitaryGate("T", phase_gate(phi)))

    return build


@pytest.fixture
def example_one() -> GateSet:
    """U(1.0, z) with U(pi/2, x): perpendicular axes, one quarter turn."""
    u1 = su2_from_axis_angle(AxisAngle(1.0, (0.0, 0.0, 1.0)), "U1")
    u2 = su2_from_axis_angle(AxisAngle(np.pi / 2, (1.0, 0.0, 0.0)), "U2")
    return GateSet.of(u1, u2)


GOLDEN = (1.0 + np.sqrt(5.0)) / 2.0
DIAGONAL = tuple(np.array([1.0, 1.0, -1.0]) / np.sqrt(3.0))


def _rotation(phi: float, k, name: str) -> UnitaryGate:
    return su2_from_axis_angle(AxisAngle.normalized(phi, k), name)


@pytest.fixture
def polyhedral() -> Callable[[str], GateSet]:
    """Two-generator presentations of the binary polyhedral groups, keyed by their order."""
    third_turn = _rotation(np.pi / 3, DIAGONAL, "B")
    sets = {
        "tetrahedral": GateSet.of(_rotation(np.pi / 2, (0.0, 0.0, 1.0), "A"), third_turn),
        "octahedral": GateSet.of(_rotation(np.pi / 4, (0.0, 0.0, 1.0), "A"), third_turn),
        "icosahedral": GateSet.of(_rotation(np.pi / 5, (1.0 / GOLDEN, 1.0, 0.0), "A"), third_turn),
    }
    return sets.__getitem__


@pytest.fixture
def noncommuting_su2_pairs(rng: np.random.Generator) -> Callable[[int], List[Tuple[AxisAngle, AxisAngle]]]:
    """Generic pairs mixed with quarter-turn pairs and quarter turns on perpendicular axes."""

    def axis() -> np.ndarray:
        v = rng.standard_normal(3)
        return v / np.linalg.norm(v)

    def sample(n: int) -> List[Tuple[AxisAngle, AxisAngle]]:
        pairs = []
        for i in range(n):
            k1, k2 = axis(), axis()
            phi1, phi2 = rng.uniform(0.05, np.pi - 0.05, size=2)
            kind = i % 4
            if kind == 1:
                phi1, phi2 = rng.choice([np.pi / 2, 3 * np.pi / 2], size=2)
            elif kind == 2:
                phi1 = np.pi / 2
                k2 = np.cross(k1, k2)
            elif kind == 3:
                phi1 = 3 * np.pi / 2
            pairs.append((AxisAngle.normalized(phi1, k1), AxisAngle.normalized(phi2, k2)))
        return pairs

    return sample
