from __future__ import annotations

import numpy as np
import pytest

from qudecide.ball_service import N_SU2, ball_membership, is_exceptional_spectrum
from qudecide.decider_service import decide
from qudecide.errors import InvalidInputError
from qudecide.linalg_service import hs_norm
from qudecide.models import GateSet, UnitaryGate
from qudecide.oracle_service import closure_enumerate, epsilon_net_coverage, net_epsilon


@pytest.mark.parametrize("phi, order", [(np.pi / 4, 48), (np.pi / 2, 16), (0.0, 4), (np.pi, 4)])
def test_closure_orders(h_and_phase, phi: float, order: int) -> None:
    result = closure_enumerate(h_and_phase(phi), 1000)
    assert result.order == order
    assert not result.overflowed
    assert len(result.elements) == order


def test_hadamard_alone_is_cyclic(hadamard: UnitaryGate) -> None:
    assert closure_enumerate(GateSet.of(hadamard), 100).order == 4


def test_dense_set_overflows(h_and_phase) -> None:
    result = closure_enumerate(h_and_phase(0.6), 200)
    assert result.overflowed
    assert result.order > 200


def test_closure_contains_identity_and_is_closed(h_and_phase) -> None:
    result = closure_enumerate(h_and_phase(np.pi / 2), 1000)
    stack = np.array([g.matrix for g in result.elements])
    assert np.allclose(stack[0], np.eye(2))
    for a in stack:
        for b in stack:
            distances = np.sqrt(np.sum(np.abs(stack - a @ b) ** 2, axis=(1, 2)))
            assert distances.min() <= 1e-8


def test_octahedral_elements_have_exceptional_spectra(h_and_phase) -> None:
    result = closure_enumerate(h_and_phase(np.pi / 4), 1000)
    for gate in result.elements:
        if ball_membership(gate).in_ball:
            # Only the center lies inside the balls
            assert min(hs_norm(gate.matrix - np.eye(2)), hs_norm(gate.matrix + np.eye(2))) < 1e-8
            continue
        assert is_exceptional_spectrum(gate, N_SU2).exceptional


def test_net_epsilon() -> None:
    assert net_epsilon(0.0) == pytest.approx(1 / (2 * np.sqrt(2)))
    assert net_epsilon(0.1) < net_epsilon(0.0)


def test_coverage_of_empty_words_is_distance_to_identity(h_and_phase) -> None:
    s = h_and_phase(0.6)
    report = epsilon_net_coverage(s, 0, 20, seed=7)
    assert report.word_count == 1
    assert 0.0 <= report.max_min_distance <= np.sqrt(8.0)
    assert report.bit_generator == "Philox"
    assert report.warnings == []


def test_coverage_is_monotone_in_word_length(h_and_phase) -> None:
    s = h_and_phase(0.6)
    verdict = decide(s)
    distances = [epsilon_net_coverage(s, cap, 30, seed=11, verdict=verdict).max_min_distance for cap in range(6)]
    assert all(later <= earlier for earlier, later in zip(distances, distances[1:]))


def test_coverage_is_reproducible(h_and_phase) -> None:
    s = h_and_phase(0.6)
    verdict = decide(s)
    one = epsilon_net_coverage(s, 4, 25, seed=3, verdict=verdict, threads=1)
    four = epsilon_net_coverage(s, 4, 25, seed=3, verdict=verdict, threads=4)
    assert one.max_min_distance == four.max_min_distance
    assert one.covered == (one.max_min_distance < one.epsilon_target)


def test_coverage_warns_on_finite_group(h_and_phase) -> None:
    report = epsilon_net_coverage(h_and_phase(np.pi / 4), 3, 5, seed=1)
    assert any(w.startswith("NOT_DENSE") for w in report.warnings)
    assert report.word_count <= 48


def test_coverage_rejects_bad_arguments(h_and_phase) -> None:
    with pytest.raises(InvalidInputError):
        epsilon_net_coverage(h_and_phase(0.6), 2, 0, seed=1)
    with pytest.raises(InvalidInputError):
        epsilon_net_coverage(h_and_phase(0.6), -1, 5, seed=1)


def test_icosahedral_closure_is_closed(polyhedral) -> None:
    result = closure_enumerate(polyhedral("icosahedral"), 1000)
    assert result.order == 120
    assert not result.overflowed
    stack = np.array([g.matrix for g in result.elements])
    assert np.allclose(stack[0], np.eye(2))
    for a in stack:
        products = np.einsum("ij,njk->nik", a, stack)
        distances = np.sqrt(np.sum(np.abs(stack[None] - products[:, None]) ** 2, axis=(2, 3)))
        assert np.all(distances.min(axis=1) <= 1e-8)
