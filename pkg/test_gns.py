"""
Тесты GNS-конструкции, чистоты и производной Радона-Никодима
"""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from services.gns import (
    StarAlgebra,
    State,
    diagonal_algebra,
    full_matrix_algebra,
    gns_construct,
    is_pure,
    radon_nikodym,
)
from services.matrix_core import max_norm, random_density
from utils.errors import InvalidAlgebraError, NotAStateError, NotDominatedError


def _random_element(algebra: StarAlgebra, rng) -> np.ndarray:
    coords = rng.standard_normal(algebra.dim) + 1j * rng.standard_normal(algebra.dim)
    return algebra.element(coords)


def test_full_algebra_basis():
    algebra = full_matrix_algebra(3)
    assert algebra.dim == 9
    assert algebra.is_closed()


def test_open_basis_rejected():
    e01 = np.array([[0, 1], [0, 0]], dtype=complex)
    with pytest.raises(InvalidAlgebraError):
        StarAlgebra(ambient_dim=2, basis=(np.eye(2, dtype=complex), e01))


def test_algebra_from_generators():
    assert StarAlgebra.from_generators([np.diag([1.0, 1.0, 2.0])]).dim == 2
    e01 = np.array([[0, 1], [0, 0]], dtype=complex)
    assert StarAlgebra.from_generators([e01]).dim == 4


def test_invalid_state_rejected():
    state = State(algebra=full_matrix_algebra(2), density=np.diag([2.0, 0.0]))
    with pytest.raises(NotAStateError):
        state.validate()


def test_vector_state_on_full_algebra_is_pure():
    state = State.vector_state(full_matrix_algebra(2), np.array([1.0, 0.0]))
    triple = gns_construct(state)
    assert triple.rep_dim == 2
    pure, projection = is_pure(state)
    assert pure
    assert projection is None


def test_tracial_state_reproduces_expectations(rng):
    algebra = full_matrix_algebra(2)
    state = State.tracial(algebra)
    triple = gns_construct(state)
    assert triple.rep_dim == 4
    assert np.linalg.norm(triple.omega) == pytest.approx(1.0)
    for _ in range(5):
        X = _random_element(algebra, rng)
        assert triple.expectation(X) == pytest.approx(state(X), abs=1e-10)


def test_representation_is_star_homomorphism(rng):
    algebra = full_matrix_algebra(3)
    triple = gns_construct(State(algebra=algebra, density=random_density(3, rng)))
    A = _random_element(algebra, rng)
    B = _random_element(algebra, rng)
    assert max_norm(triple.represent(A @ B) - triple.represent(A) @ triple.represent(B)) < 1e-8
    assert max_norm(triple.represent(A.conj().T) - triple.represent(A).conj().T) < 1e-8
    assert triple.cyclic_rank() == triple.rep_dim


def test_character_of_diagonal_algebra():
    state = State.vector_state(diagonal_algebra(3), np.array([1.0, 0.0, 0.0]))
    assert gns_construct(state).rep_dim == 1
    assert is_pure(state)[0]


def test_mixed_state_has_reducing_projection():
    pure, projection = is_pure(State.tracial(diagonal_algebra(3)))
    assert not pure
    assert projection is not None
    assert max_norm(projection @ projection - projection) < 1e-8


@pytest.mark.parametrize("c", [0.0, 0.25, 0.5, 1.0])
def test_radon_nikodym_of_scaled_state(rng, c):
    algebra = full_matrix_algebra(2)
    density = random_density(2, rng)
    state = State(algebra=algebra, density=density)
    derivative = radon_nikodym(state, c * density)
    assert derivative.residual < 1e-8
    triple = gns_construct(state)
    assert_allclose(derivative.operator, c * np.eye(triple.rep_dim), atol=1e-8)


@pytest.mark.parametrize("dim", [2, 3])
def test_purity_matches_density_rank(rng, dim):
    algebra = full_matrix_algebra(dim)
    for _ in range(50):
        rank_ = int(rng.integers(1, dim + 1))
        state = State(algebra=algebra, density=random_density(dim, rng, rank_=rank_))
        pure, projection = is_pure(state)
        assert pure == (rank_ == 1)
        assert (projection is None) == pure
        assert gns_construct(state).rep_dim == dim * rank_


def test_radon_nikodym_spectrum_in_unit_interval():
    algebra = full_matrix_algebra(2)
    state = State.tracial(algebra)
    derivative = radon_nikodym(state, np.diag([0.5, 0.0]))
    assert derivative.residual < 1e-8
    A = derivative.operator
    assert max_norm(A - A.conj().T) < 1e-8
    spectrum = np.linalg.eigvalsh((A + A.conj().T) / 2)
    assert spectrum[0] >= -1e-8
    assert spectrum[-1] <= 1 + 1e-8


def test_dominance_violation_rejected(rng):
    density = random_density(2, rng)
    state = State(algebra=full_matrix_algebra(2), density=density)
    with pytest.raises(NotDominatedError):
        radon_nikodym(state, 2.0 * density)
