"""
Тесты спектрального разложения и функционального исчисления
"""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from config import settings
from services.matrix_core import max_norm, random_hermitian
from services.spectral import (
    approximate_by_steps,
    functional_calculus,
    interval,
    jacobi_eigh,
    pvm_evaluate,
    spectral_decompose,
    step_calculus,
    vector_measure,
)
from utils.errors import BadLevelError, NotHermitianError


def test_block_example_multiplicities():
    S = spectral_decompose(np.diag([1.0, 1.0, 2.0]))
    assert_allclose(S.eigenvalues, [2.0, 1.0])
    assert S.multiplicities == (1, 2)
    assert_allclose(S.projections[1], np.diag([1.0, 1.0, 0.0]), atol=1e-12)


@pytest.mark.parametrize("batch", range(10))
def test_reconstruction_of_random_hermitian(batch):
    rng = np.random.default_rng([settings.DEFAULT_SEED, batch])
    for k in range(20):
        dim = 2 + (20 * batch + k) % 31
        A = random_hermitian(dim, rng)
        S = spectral_decompose(A)
        assert max_norm(A - S.reconstruct()) <= 1e-8
        assert S.dimension == dim
        assert np.all(np.diff(S.eigenvalues) < 0)


@pytest.mark.parametrize("dim", [2, 5, 9, 16, 32])
def test_jacobi_reconstruction(rng, dim):
    A = random_hermitian(dim, rng)
    S = spectral_decompose(A, method="jacobi")
    assert max_norm(A - S.reconstruct()) <= 1e-8
    assert S.multiplicities == (1,) * dim


def test_jacobi_matches_lapack(rng):
    A = random_hermitian(6, rng)
    values, vectors = jacobi_eigh(A)
    assert_allclose(np.sort(values), np.linalg.eigvalsh(A), atol=1e-10)
    assert_allclose(vectors.conj().T @ vectors, np.eye(6), atol=1e-10)


def test_degenerate_eigenvalues_are_grouped(rng):
    U = np.linalg.qr(rng.standard_normal((4, 4)))[0]
    A = U @ np.diag([3.0, 3.0 + 1e-12, -1.0, -1.0]) @ U.T
    S = spectral_decompose(A)
    assert S.multiplicities == (2, 2)


def test_non_hermitian_rejected():
    with pytest.raises(NotHermitianError):
        spectral_decompose(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_pvm_is_multiplicative(rng):
    S = spectral_decompose(random_hermitian(8, rng))
    E = interval(upper=0.5)
    F = interval(lower=-0.5)
    both = pvm_evaluate(S, lambda x: E(x) and F(x))
    assert max_norm(pvm_evaluate(S, E) @ pvm_evaluate(S, F) - both) <= 1e-8
    assert_allclose(pvm_evaluate(S, interval()), np.eye(8), atol=1e-10)
    assert max_norm(pvm_evaluate(S, [])) == 0.0


def test_pvm_of_finite_set():
    S = spectral_decompose(np.diag([1.0, 2.0, 2.0]))
    assert_allclose(pvm_evaluate(S, [2.0]), np.diag([0.0, 1.0, 1.0]), atol=1e-12)


def test_functional_calculus_square_root(rng):
    B = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    A = B @ B.conj().T
    root = functional_calculus(spectral_decompose(A), lambda x: np.sqrt(max(x, 0.0)))
    assert_allclose(root @ root, A, atol=1e-8)


def test_vector_measure_total_mass(rng):
    S = spectral_decompose(random_hermitian(5, rng))
    x = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    measure = vector_measure(S, x)
    assert sum(measure.values()) == pytest.approx(np.vdot(x, x).real)
    # <x, f(A) x> = integral f d mu_x
    A = S.reconstruct()
    assert sum(v * m for v, m in measure.items()) == pytest.approx(np.vdot(x, A @ x).real)


def test_step_function_values():
    steps = approximate_by_steps(5.0, 2)
    assert steps(0.3) == pytest.approx(0.25)
    assert steps(1.99) == pytest.approx(1.75)
    assert steps(5.0) == pytest.approx(2.0)
    with pytest.raises(BadLevelError):
        approximate_by_steps(1.0, 0)


def test_step_breakpoints_clamped_to_level():
    steps = approximate_by_steps(5.0, 2)
    assert np.all(np.diff(steps.breakpoints) > 0)
    assert steps.breakpoints[-1] == 2.0
    assert np.all(np.diff(steps.values) >= 0)


def test_step_function_beyond_stored_range():
    steps = approximate_by_steps(1.3, 3)
    assert steps.breakpoints[-1] == 1.25
    assert steps(2.0) == 2.0
    assert steps(2.9) == 2.875
    assert steps(3.5) == 3.0
    x = np.linspace(0.0, 2.999, 400)
    values = steps(x)
    assert np.all(values <= x)
    assert np.all(x - 2.0 ** -3 < values)
    assert np.all(values <= approximate_by_steps(1.3, 4)(x))


def test_step_calculus_converges(rng):
    A = random_hermitian(4, rng)
    A = A / (2 * np.linalg.norm(A, 2))
    S = spectral_decompose(A)
    exact = functional_calculus(S, lambda x: x ** 2)
    for n in (2, 4, 8):
        approx = step_calculus(S, lambda x: x ** 2, n)
        assert np.linalg.norm(exact - approx, 2) <= 2.0 ** -n + 1e-12
