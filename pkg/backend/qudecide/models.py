from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterator, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, field_validator

from .config import MAX_GROUP, TOL_AXIS, TOL_CENTER, TOL_EQ, TOL_RANK, TOL_UNITARY
from .errors import (
    BadDimensionError,
    DimensionMismatchError,
    InvalidInputError,
    NonUnitAxisError,
    NotUnitaryError,
)


def unitarity_defects(matrix: np.ndarray) -> Tuple[float, float]:
    """Return (||U^dagger U - I||_HS, |det U - 1|) for a square matrix."""
    d = matrix.shape[0]
    unitary_defect = float(np.linalg.norm(matrix.conj().T @ matrix - np.eye(d)))
    det_defect = float(abs(np.linalg.det(matrix) - 1.0))
    return unitary_defect, det_defect


# Numeric Types
@dataclass(frozen=True, eq=False)
class UnitaryGate:
    """A named d x d special-unitary matrix, validated on construction."""
    name: str
    matrix: np.ndarray
    tol: float = field(default=TOL_UNITARY, repr=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatchError(f"gate '{self.name}' must be square, got shape {m.shape}")
        if m.shape[0] < 2:
            raise BadDimensionError(f"gate '{self.name}' has dimension {m.shape[0]} < 2")
        if not np.all(np.isfinite(m)):
            raise NotUnitaryError(f"gate '{self.name}' has non-finite entries")

        unitary_defect, det_defect = unitarity_defects(m)
        if unitary_defect > self.tol:
            raise NotUnitaryError(
                f"gate '{self.name}': ||U^dagger U - I|| = {unitary_defect:.3e} exceeds {self.tol:.1e}"
            )
        if det_defect > self.tol:
            raise NotUnitaryError(
                f"gate '{self.name}': |det U - 1| = {det_defect:.3e} exceeds {self.tol:.1e}"
            )

        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def d(self) -> int:
        return self.matrix.shape[0]


# Sorted ascending, each in [0, 2pi)
Eigenphases = Tuple[float, ...]


@dataclass(frozen=True)
class AxisAngle:
    """SU(2) parametrization U(phi, k) = I cos(phi) + sin(phi)(k_x X + k_y Y + k_z Z)."""
    phi: float
    k: Tuple[float, float, float]

    def __post_init__(self):
        k = tuple(float(c) for c in self.k)
        if len(k) != 3:
            raise NonUnitAxisError(f"axis must have 3 components, got {len(k)}")
        norm_sq = sum(c * c for c in k)
        if not abs(norm_sq - 1.0) <= TOL_AXIS:
            raise NonUnitAxisError(f"axis {k} has squared norm {norm_sq!r}")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "phi", float(self.phi))

    @classmethod
    def normalized(cls, phi: float, vector) -> "AxisAngle":
        v = np.asarray(vector, dtype=float)
        n = float(np.linalg.norm(v))
        if n == 0.0:
            raise NonUnitAxisError("axis vector is zero")
        return cls(phi, tuple(v / n))

    @property
    def axis(self) -> np.ndarray:
        return np.array(self.k)


@dataclass(frozen=True, eq=False)
class SuBasis:
    """Orthonormal basis of su(d) under (X|Y) = -1/2 tr XY."""
    d: int
    elements: Tuple[np.ndarray, ...]

    def __len__(self) -> int:
        return len(self.elements)

    def stacked(self) -> np.ndarray:
        """Basis as a (d^2-1, d, d) array."""
        return np.stack(self.elements)


@dataclass(frozen=True, eq=False)
class AdjointMatrix:
    """Real (d^2-1) x (d^2-1) orthogonal matrix of Ad_U in a fixed basis."""
    d: int
    entries: np.ndarray

    def __post_init__(self):
        a = np.array(self.entries, dtype=float)
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)


@dataclass(frozen=True, eq=False)
class GateSet:
    """Dimension d plus an ordered, uniquely named list of gates."""
    d: int
    gates: Tuple[UnitaryGate, ...]

    def __post_init__(self):
        gates = tuple(self.gates)
        if not gates:
            raise InvalidInputError("gate set is empty")
        for gate in gates:
            if gate.d != self.d:
                raise InvalidInputError(
                    f"gate '{gate.name}' has dimension {gate.d}, gate set has d={self.d}"
                )
        names = [gate.name for gate in gates]
        if len(set(names)) != len(names):
            raise InvalidInputError(f"gate names are not unique: {names}")
        object.__setattr__(self, "gates", gates)

    @classmethod
    def of(cls, *gates: UnitaryGate) -> "GateSet":
        if not gates:
            raise InvalidInputError("gate set is empty")
        return cls(gates[0].d, tuple(gates))

    @property
    def names(self) -> List[str]:
        return [gate.name for gate in self.gates]

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self) -> Iterator[UnitaryGate]:
        return iter(self.gates)


@dataclass(frozen=True, eq=False)
class CommutantReport:
    kernel_dim: int
    trivial: bool
    witness: Optional[np.ndarray] = None


@dataclass(frozen=True)
class CenterElement:
    """alpha_m I with alpha_m = exp(2 pi i m / d)."""
    m: int
    d: int
    alpha: complex

    @property
    def theta(self) -> float:
        return 2.0 * np.pi * self.m / self.d


@dataclass(frozen=True)
class BallMembership:
    in_ball: bool
    center: Optional[CenterElement]
    distance: float
    boundary: bool = False


@dataclass(frozen=True)
class SpectrumClass:
    phases: Eigenphases
    exceptional: bool
    n_power: Optional[int] = None


@dataclass(frozen=True, eq=False)
class Word:
    """Ordered product of named generators."""
    letters: Tuple[str, ...]
    product: UnitaryGate

    @property
    def length(self) -> int:
        return len(self.letters)


class VerdictKind(str, Enum):
    UNIVERSAL = "universal"
    FINITE_GROUP = "finite_group"
    INFINITE_NON_UNIVERSAL = "not_universal_commutant"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True, eq=False)
class Verdict:
    kind: VerdictKind
    kernel_dim: int
    witness: Optional[Word] = None
    witness_power: Optional[int] = None
    order: Optional[int] = None
    terminating_l: Optional[int] = None
    reason: Optional[str] = None
    commutant_witness: Optional[np.ndarray] = None
    overflowed: Optional[bool] = None
    warnings: Tuple[str, ...] = ()


@dataclass(frozen=True, eq=False)
class ClosureResult:
    elements: Tuple[UnitaryGate, ...]
    order: int
    generations: int
    overflowed: bool


# Config Models
class DeciderConfig(BaseModel):
    """Tolerances and caps for the universality decider."""
    tol_rank: float = Field(TOL_RANK, description="Relative singular-value cutoff for kernel dimension")
    tol_eq: float = Field(TOL_EQ, description="HS distance under which two elements are equal")
    tol_center: float = Field(TOL_CENTER, description="HS distance under which an element is central")
    max_word_len: Optional[int] = Field(None, description="Word length cap; 13 for d=2, 20 otherwise")
    max_group_size: int = Field(MAX_GROUP, description="Cap on the number of distinct elements")
    n_power_max: Optional[int] = Field(None, description="Power search cap; 6 for d=2, 64 otherwise")
    closure_on_fail: bool = Field(False, description="Run closure enumeration when the commutant test fails")
    threads: Optional[int] = Field(None, description="Worker thread cap; QUDECIDE_THREADS when unset")

    @field_validator('tol_rank', 'tol_eq', 'tol_center')
    @classmethod
    def validate_tolerance(cls, v):
        if not v > 0:
            raise ValueError("tolerances must be positive")
        return v

    @field_validator('max_word_len', 'n_power_max', 'threads')
    @classmethod
    def validate_optional_positive(cls, v):
        if v is not None and v < 1:
            raise ValueError("must be a positive integer")
        return v

    @field_validator('max_group_size')
    @classmethod
    def validate_group_size(cls, v):
        if v < 1:
            raise ValueError("max_group_size must be a positive integer")
        return v

    def resolved(self, d: int) -> "DeciderConfig":
        """Fill the dimension-dependent defaults."""
        updates: Dict[str, Any] = {}
        if self.max_word_len is None:
            updates["max_word_len"] = 13 if d == 2 else 20
        if self.n_power_max is None:
            updates["n_power_max"] = 6 if d == 2 else 64
        return self.model_copy(update=updates)


# Document Models
class AxisAngleEntry(BaseModel):
    """Axis-angle gate description (d = 2 only)."""
    phi: float = Field(..., description="Rotation parameter in radians")
    k: List[float] = Field(..., description="Unit axis [x, y, z]")

    @field_validator('k')
    @classmethod
    def validate_axis(cls, v):
        if len(v) != 3:
            raise ValueError("axis must have exactly 3 components")
        return v


class GateEntry(BaseModel):
    """One gate of a gate-set document; exactly one source field is set."""
    name: str = Field(..., description="Unique gate name")
    matrix: Optional[List[List[List[float]]]] = Field(None, description="d x d array of [re, im] pairs")
    builtin: Optional[str] = Field(None, description="'H' or 'phase'")
    phi: Optional[float] = Field(None, description="Angle for the builtin phase gate")
    axis_angle: Optional[AxisAngleEntry] = Field(None, description="Axis-angle description")

    @field_validator('name')
    @classmethod
    def validate_name(cls, v):
        if not v or not v.strip():
            raise ValueError("gate name cannot be empty")
        return v.strip()

    @field_validator('builtin')
    @classmethod
    def validate_builtin(cls, v):
        if v is not None and v not in ("H", "phase"):
            raise ValueError(f"unknown builtin '{v}' (expected 'H' or 'phase')")
        return v


class GateSetDocument(BaseModel):
    """Input document: dimension plus gate entries."""
    d: int = Field(..., description="Qudit dimension")
    gates: List[GateEntry] = Field(..., description="Gate entries in order")

    @field_validator('d')
    @classmethod
    def validate_d(cls, v):
        if v < 2:
            raise ValueError("d must be at least 2")
        return v

    @field_validator('gates')
    @classmethod
    def validate_gates(cls, v):
        if not v:
            raise ValueError("gate list cannot be empty")
        names = [g.name for g in v]
        if len(set(names)) != len(names):
            raise ValueError(f"gate names must be unique: {names}")
        return v


class VerdictDocument(BaseModel):
    """Machine-readable verdict; every field is always present."""
    verdict: str = Field(..., description="Verdict kind")
    kernel_dim: int = Field(..., description="Kernel dimension of M_S")
    terminating_l: Optional[int] = Field(None, description="Word length at termination")
    order: Optional[int] = Field(None, description="Group order when finite")
    overflowed: Optional[bool] = Field(None, description="Closure diagnostic overflowed its cap")
    witness_word: Optional[List[str]] = Field(None, description="Letters of the ball-escape witness")
    witness_power: Optional[int] = Field(None, description="Power n of the witness word")
    reason: Optional[str] = Field(None, description="Why the run was inconclusive")
    warnings: List[str] = Field([], description="Diagnostics raised during the run")
    config: Dict[str, Any] = Field({}, description="Echo of the effective configuration")


class CoverageReport(BaseModel):
    """Worst nearest-word distance over Haar samples."""
    word_length_cap: int = Field(..., description="Longest word enumerated")
    samples: int = Field(..., description="Number of Haar-random targets")
    word_count: int = Field(..., description="Distinct words enumerated")
    max_min_distance: float = Field(..., description="Worst HS distance from a sample to its nearest word")
    epsilon_target: float = Field(..., description="Net radius 1/(2 sqrt 2 + delta)")
    covered: bool = Field(..., description="max_min_distance < epsilon_target")
    seed: int = Field(..., description="Seed of the sampling generator")
    bit_generator: str = Field("Philox", description="Counter-based bit generator used for sampling")
    warnings: List[str] = Field([], description="Diagnostics raised during the run")
