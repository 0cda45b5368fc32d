"""
Тесты симметрических операторов на сетке и матриц Гейзенберга
"""

from dataclasses import replace

import numpy as np
import pytest
from numpy.testing import assert_allclose

from services.matrix_core import is_hermitian, is_unitary, max_norm, random_hermitian
from services.unbounded import (
    ExtensionParameter,
    align_phase,
    cayley,
    cayley_matrix,
    cayley_residuals,
    commutator_defect,
    deficiency,
    deficiency_angle,
    deficiency_oracle,
    extension_matrix,
    hermite_diagonalization,
    hermite_functions,
    hermitian_grid_operator,
    heisenberg_PQ,
    interior_stencil,
    inverse_cayley,
    laplacian_operator,
    momentum_operator,
    oscillator_check,
    position_grid,
    self_adjoint_extension,
    von_neumann_dimensions,
)
from utils.errors import GridTooSmallError, IndexMismatchError, OutsideDomainError, StencilError


def test_momentum_deficiency_indices():
    op = momentum_operator(256)
    data = deficiency(op)
    assert data.indices == (1, 1)
    assert data.residual < 1e-8
    for sign, basis in ((1, data.basis_plus), (-1, data.basis_minus)):
        oracle = deficiency_oracle(op, sign)
        assert max_norm(align_phase(basis[0], oracle) - oracle) < 1e-3
    assert 0 < deficiency_angle(data) < np.pi / 2


def test_laplacian_deficiency_indices():
    op = laplacian_operator(64)
    data = deficiency(op)
    assert data.indices == (2, 2)
    assert von_neumann_dimensions(op, data)["consistent"]


def test_hermitian_matrix_has_no_deficiency(rng):
    op = hermitian_grid_operator(random_hermitian(6, rng))
    data = deficiency(op)
    assert data.indices == (0, 0)
    assert deficiency_angle(data) == pytest.approx(np.pi / 2)
    dims = von_neumann_dimensions(op, data)
    assert dims["minimal"] == dims["maximal"] == 6


def test_momentum_dimension_balance():
    dims = von_neumann_dimensions(momentum_operator(32))
    assert dims == {"minimal": 30, "d_plus": 1, "d_minus": 1, "maximal": 32, "consistent": True}


def test_grid_too_small():
    with pytest.raises(GridTooSmallError):
        momentum_operator(8)


def test_cayley_transform_is_isometric():
    op = momentum_operator(64)
    x = np.sin(np.pi * op.grid)
    x[[0, -1]] = 0.0
    residuals = cayley_residuals(op, x)
    assert residuals["pythagoras"] < 1e-10
    assert residuals["isometry"] < 1e-10


def test_cayley_rejects_vectors_outside_domain():
    op = momentum_operator(32)
    with pytest.raises(OutsideDomainError):
        cayley(op, np.ones(32))
    with pytest.raises(OutsideDomainError):
        cayley(op, np.zeros(31))


def test_cayley_matrix_roundtrip(rng):
    H = random_hermitian(5, rng)
    U = cayley_matrix(H)
    assert is_unitary(U)
    assert_allclose(inverse_cayley(U), H, atol=1e-10)


def test_extension_parameter_wraps_phase():
    assert ExtensionParameter(2 * np.pi + 0.5).theta == pytest.approx(0.5)
    assert ExtensionParameter(np.pi).phase == pytest.approx(-1.0)


@pytest.mark.parametrize("theta", [0.0, np.pi / 2, 1.0, np.pi])
def test_extension_spectrum(theta):
    result = self_adjoint_extension(momentum_operator(512), ExtensionParameter(theta))
    assert result.max_imaginary < 1e-9
    for n in range(-3, 4):
        target = theta + 2 * np.pi * n
        assert result.nearest(target) == pytest.approx(target, abs=1e-3)
    assert len(result.lowest(7)) == 7
    assert result.spurious > 0


def test_extension_agrees_with_operator_on_minimal_domain(rng):
    op = momentum_operator(64)
    result = self_adjoint_extension(op, ExtensionParameter(0.7))
    assert result.extension_residual < 1e-12
    assert is_hermitian(result.matrix)
    x = rng.standard_normal(64) + 1j * rng.standard_normal(64)
    x[[0, -1]] = 0.0
    assert max_norm((result.matrix @ x[:63])[1:] - (op.matrix @ x)[1:63]) < 1e-9


def test_extension_encodes_boundary_phase():
    op = momentum_operator(32)
    A = extension_matrix(op, np.pi / 2)
    # последний внутренний узел видит узел 0 через фазу e^(i theta)
    assert A[30, 0] == pytest.approx(op.matrix[15, 16] * 1j)
    assert A[0, 30] == pytest.approx(op.matrix[15, 14] * -1j)


def test_extension_follows_operator_scale():
    op = momentum_operator(256)
    scaled = replace(op, matrix=5 * op.matrix, maximal=5 * op.maximal)
    result = self_adjoint_extension(scaled, ExtensionParameter(1.0))
    for n in (-1, 0, 1):
        target = 5 * (1.0 + 2 * np.pi * n)
        assert result.nearest(target) == pytest.approx(target, abs=5e-3)


def test_unextrapolated_spectrum_is_second_order():
    op = momentum_operator(512)
    raw = self_adjoint_extension(op, ExtensionParameter(0.0), extrapolate=False)
    # sin(kh)/h при k = 6 pi
    h = 1 / 511
    assert raw.nearest(6 * np.pi) == pytest.approx(np.sin(6 * np.pi * h) / h, abs=1e-9)


def test_non_uniform_operator_rejected():
    op = momentum_operator(32)
    matrix = op.matrix.copy()
    matrix[10, 11] *= 2
    with pytest.raises(StencilError):
        interior_stencil(replace(op, matrix=matrix))


def test_extension_requires_unit_indices():
    with pytest.raises(IndexMismatchError):
        self_adjoint_extension(laplacian_operator(32), ExtensionParameter(0.0))


def test_heisenberg_matrices():
    P, Q = heisenberg_PQ(6)
    assert is_hermitian(P)
    assert is_hermitian(Q)
    defect = commutator_defect(6)
    assert max_norm(defect[:-1, :-1]) < 1e-12
    assert abs(defect[-1, -1]) == pytest.approx(6.0)


def test_unnormalized_heisenberg_entries():
    P, _ = heisenberg_PQ(4, normalized=False)
    assert_allclose(np.diag(P, 1), [1.0, np.sqrt(2), np.sqrt(3)])
    with pytest.raises(GridTooSmallError):
        heisenberg_PQ(1)


def test_oscillator_spectrum():
    assert_allclose(oscillator_check(32)[:6], [1, 3, 5, 7, 9, 11], atol=1e-10)


def test_hermite_functions_orthonormal():
    x = position_grid()
    functions = np.column_stack(hermite_functions(5, x))
    h = x[1] - x[0]
    weights = np.full(x.size, h)
    weights[[0, -1]] = h / 2
    gram = functions.T @ (weights[:, None] * functions)
    assert_allclose(gram, np.eye(5), atol=1e-6)


def test_hermite_diagonalization():
    diagonal, off_diagonal = hermite_diagonalization(5)
    assert_allclose(diagonal, [1, 3, 5, 7, 9], atol=1e-2)
    assert off_diagonal < 1e-2
