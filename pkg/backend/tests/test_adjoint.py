from __future__ import annotations

import numpy as np
import pytest

from qudecide.adjoint_service import adjoint_of, basis_coordinates, inner, su_basis
from qudecide.ball_service import center_elements
from qudecide.errors import BadDimensionError
from qudecide.linalg_service import haar_special_unitary, hs_norm
from qudecide.models import UnitaryGate
from qudecide.su2_service import X, Y, Z


@pytest.mark.parametrize("d", [2, 3, 4])
def test_basis_is_orthonormal_traceless_antihermitian(d: int) -> None:
    basis = su_basis(d)
    assert len(basis) == d * d - 1
    gram = np.array([[inner(a, b) for b in basis.elements] for a in basis.elements])
    assert np.allclose(gram, np.eye(d * d - 1), atol=1e-12)
    for e in basis.elements:
        assert abs(np.trace(e)) < 1e-12
        assert np.allclose(e.conj().T, -e)


def test_su2_basis_order() -> None:
    elements = su_basis(2).elements
    for got, want in zip(elements, (Z, Y, X)):
        assert np.allclose(got, want)


def test_basis_is_cached_and_read_only() -> None:
    assert su_basis(3) is su_basis(3)
    with pytest.raises(ValueError):
        su_basis(3).elements[0][0, 0] = 1.0


def test_bad_dimension() -> None:
    with pytest.raises(BadDimensionError):
        su_basis(1)


def test_adjoint_of_identity() -> None:
    assert np.allclose(adjoint_of(UnitaryGate("I", np.eye(3))).entries, np.eye(8))


@pytest.mark.parametrize("d", [2, 3, 4])
def test_adjoint_is_orthogonal_homomorphism(rng: np.random.Generator, d: int) -> None:
    for _ in range(100):
        u = haar_special_unitary(d, rng)
        v = haar_special_unitary(d, rng)
        ad_u = adjoint_of(u).entries
        ad_v = adjoint_of(v).entries
        ad_uv = adjoint_of(UnitaryGate("UV", u.matrix @ v.matrix)).entries

        assert np.allclose(ad_uv, ad_u @ ad_v, atol=1e-10)
        assert np.allclose(ad_u.T @ ad_u, np.eye(d * d - 1), atol=1e-10)
        assert np.linalg.det(ad_u) == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_adjoint_preserves_inner_product(rng: np.random.Generator, d: int) -> None:
    basis = su_basis(d).stacked()
    for _ in range(100):
        u = haar_special_unitary(d, rng).matrix
        x = np.tensordot(rng.standard_normal(d * d - 1), basis, axes=1)
        y = np.tensordot(rng.standard_normal(d * d - 1), basis, axes=1)
        ux, uy = u @ x @ u.conj().T, u @ y @ u.conj().T
        assert inner(ux, uy) == pytest.approx(inner(x, y), abs=1e-10)


def test_adjoint_acts_on_coordinates(rng: np.random.Generator) -> None:
    u = haar_special_unitary(3, rng)
    x = np.tensordot(rng.standard_normal(8), su_basis(3).stacked(), axes=1)
    conjugated = u.matrix @ x @ u.matrix.conj().T
    assert np.allclose(basis_coordinates(conjugated, 3), adjoint_of(u).entries @ basis_coordinates(x, 3))


@pytest.mark.parametrize("d", [2, 3])
def test_adjoint_of_inverse_is_transpose(rng: np.random.Generator, d: int) -> None:
    for _ in range(50):
        u = haar_special_unitary(d, rng)
        inverse = UnitaryGate("U^-1", u.matrix.conj().T)
        assert np.allclose(adjoint_of(inverse).entries, adjoint_of(u).entries.T, atol=1e-10)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_kernel_of_adjoint_is_the_center(rng: np.random.Generator, d: int) -> None:
    identity = np.eye(d * d - 1)
    for c in center_elements(d):
        assert np.allclose(adjoint_of(UnitaryGate("alpha", c.alpha * np.eye(d))).entries, identity, atol=1e-10)

    for _ in range(100):
        u = haar_special_unitary(d, rng)
        distance = min(hs_norm(u.matrix - c.alpha * np.eye(d)) for c in center_elements(d))
        assert distance > 1e-8
        assert not np.allclose(adjoint_of(u).entries, identity, atol=1e-10)
