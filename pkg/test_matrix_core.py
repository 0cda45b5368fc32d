"""
Тесты матричного ядра
"""

import numpy as np
import pytest
from numpy.testing import assert_allclose
from pydantic import ValidationError

from services.matrix_core import (
    Tolerance,
    gram_schmidt,
    hermitian_parts,
    inner,
    is_hermitian,
    is_projection,
    is_unitary,
    join,
    ket_bra,
    leq,
    meet,
    norm,
    null_projection,
    random_density,
    random_hermitian,
    random_unitary,
    range_projection,
    rank,
    require_square,
    solve_intertwiner,
    sum_is_projection,
    trace_pairing,
    unitary_from_projection,
)
from utils.errors import DependentInputError, DimMismatchError, NonSquareError, NotProjectionError


def test_tolerance_rejects_negative_values():
    with pytest.raises(ValidationError):
        Tolerance(abs_tol=-1.0)


def test_tolerance_bound_scales_with_magnitude():
    tol = Tolerance(abs_tol=1e-9, rel_tol=1e-6)
    assert tol.bound(10.0) == pytest.approx(1e-9 + 1e-5)
    assert tol.scaled(10).abs_tol == pytest.approx(1e-8)


def test_require_square_rejects_rectangular():
    with pytest.raises(NonSquareError):
        require_square(np.zeros((2, 3)))


def test_hermitian_parts_recombine(rng):
    A = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    R, S = hermitian_parts(A)
    assert is_hermitian(R)
    assert is_hermitian(S)
    assert_allclose(R + 1j * S, A, atol=1e-12)


def test_unitary_from_projection_on_circle():
    P = np.diag([1.0, 0.0, 1.0])
    U = unitary_from_projection(P, np.exp(0.7j))
    assert is_unitary(U)
    assert not is_unitary(unitary_from_projection(P, 2.0))


def test_random_unitary_is_unitary(rng):
    for dim in (1, 2, 5):
        assert is_unitary(random_unitary(dim, rng))


def test_weighted_inner_product():
    x = np.array([1.0, 1j])
    y = np.array([2.0, 1.0])
    assert inner(x, y) == pytest.approx(2.0 - 1j)
    assert inner(x, y, weights=np.array([0.5, 2.0])) == pytest.approx(1.0 - 2j)
    assert norm(x, weights=np.array([1.0, 3.0])) == pytest.approx(2.0)


def test_inner_rejects_mismatched_lengths():
    with pytest.raises(DimMismatchError):
        inner(np.ones(2), np.ones(3))


def test_gram_schmidt_orthonormal_and_nested(rng):
    vectors = [rng.standard_normal(5) + 1j * rng.standard_normal(5) for _ in range(4)]
    basis = gram_schmidt(vectors)
    Q = np.column_stack(basis)
    assert_allclose(Q.conj().T @ Q, np.eye(4), atol=1e-12)
    # первый вектор пропорционален первому входу
    assert abs(abs(inner(basis[0], vectors[0])) - np.linalg.norm(vectors[0])) < 1e-10


def test_gram_schmidt_with_weights():
    weights = np.array([1.0, 2.0, 3.0])
    basis = gram_schmidt([np.array([1.0, 0, 0]), np.array([1.0, 1.0, 0])], weights=weights)
    assert abs(inner(basis[0], basis[1], weights)) < 1e-12
    assert norm(basis[1], weights) == pytest.approx(1.0)


def test_gram_schmidt_dependent_input():
    v = np.array([1.0, 2.0, 3.0])
    with pytest.raises(DependentInputError):
        gram_schmidt([v, 2 * v])


def test_rank_and_projections():
    A = np.array([[1.0, 2.0], [2.0, 4.0]])
    assert rank(A) == 1
    P = range_projection(A)
    N = null_projection(A)
    assert is_projection(P)
    assert is_projection(N)
    assert_allclose(P + N, np.eye(2), atol=1e-12)


def test_lattice_operations():
    P = np.diag([1.0, 1.0, 0.0])
    Q = np.diag([0.0, 1.0, 1.0])
    assert_allclose(meet(P, Q), np.diag([0.0, 1.0, 0.0]), atol=1e-12)
    assert_allclose(join(P, Q), np.eye(3), atol=1e-12)
    assert leq(meet(P, Q), P)
    assert not leq(P, Q)
    assert sum_is_projection(np.diag([1.0, 0, 0]), np.diag([0, 0, 1.0]))
    assert not sum_is_projection(P, Q)


def test_lattice_requires_projections():
    with pytest.raises(NotProjectionError):
        meet(np.diag([2.0, 0.0]), np.eye(2))


def test_trace_pairing_matches_trace(rng):
    A = random_hermitian(3, rng)
    rho = random_density(3, rng)
    assert trace_pairing(A, rho) == pytest.approx(np.trace(A @ rho))
    assert np.trace(rho).real == pytest.approx(1.0)


def test_ket_bra_rank_one():
    xi = np.array([1.0, 1j])
    eta = np.array([0.0, 1.0])
    assert_allclose(ket_bra(xi, eta) @ eta, xi)
    assert rank(ket_bra(xi, eta)) == 1


def test_solve_intertwiner_recovers_unitary(rng):
    U = random_unitary(3, rng)
    source = rng.standard_normal((3, 5)) + 1j * rng.standard_normal((3, 5))
    W, residual = solve_intertwiner(source, U @ source)
    assert residual < 1e-10
    assert_allclose(W, U, atol=1e-10)


@pytest.mark.parametrize("weighted", [False, True])
def test_cauchy_schwarz_and_parallelogram(rng, weighted):
    for _ in range(200):
        dim = int(rng.integers(1, 33))
        weights = rng.uniform(0.1, 2.0, dim) if weighted else None
        x = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        y = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        assert abs(inner(x, y, weights)) <= norm(x, weights) * norm(y, weights) * (1 + 1e-12)
        lhs = norm(x + y, weights) ** 2 + norm(x - y, weights) ** 2
        rhs = 2 * norm(x, weights) ** 2 + 2 * norm(y, weights) ** 2
        assert lhs == pytest.approx(rhs, rel=1e-10)
        assert inner(y, x, weights) == pytest.approx(inner(x, y, weights).conjugate(), rel=1e-12, abs=1e-12)
