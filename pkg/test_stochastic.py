"""
Тесты разложения Карунена-Лоэва броуновского движения
"""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from config import settings
from services.stochastic import (
    analytic_eigenfunction,
    analytic_eigenvalue,
    brownian_kernel,
    covariance_check,
    increment_check,
    kernel_solves_ode,
    kl_decompose,
    sample_paths,
    truncation_error,
)
from utils.errors import BadModeCountError, GridTooSmallError


def test_kernel_on_midpoint_grid():
    kernel = brownian_kernel(4)
    assert_allclose(kernel.grid, [0.125, 0.375, 0.625, 0.875])
    assert_allclose(kernel.matrix, kernel.matrix.T)
    assert kernel.matrix[0, 3] == pytest.approx(0.125 / 4)
    with pytest.raises(GridTooSmallError):
        brownian_kernel(1)


def test_leading_eigenvalue():
    basis = kl_decompose(512, 5)
    assert basis.eigenvalues[0] == pytest.approx(4 / np.pi ** 2, rel=1e-3)
    for k in range(1, 6):
        assert basis.eigenvalues[k - 1] == pytest.approx(analytic_eigenvalue(k), rel=1e-2)


def test_eigenfunctions_match_sines():
    basis = kl_decompose(256, 3)
    assert basis.orthonormality_residual() < 1e-10
    grid = basis.kernel.grid
    for k in range(1, 4):
        assert np.max(np.abs(basis.eigenfunctions[:, k - 1] - analytic_eigenfunction(k, grid))) < 1e-2


def test_nystrom_extension_vanishes_at_zero():
    basis = kl_decompose(64, 4)
    assert_allclose(basis.evaluate(0.0), np.zeros((1, 4)), atol=1e-14)
    assert_allclose(basis.evaluate(basis.kernel.grid), basis.eigenfunctions, atol=1e-10)


def test_truncation_error_decreases():
    errors = [truncation_error(kl_decompose(128, m)) for m in (1, 4, 16)]
    assert errors[0] > errors[1] > errors[2] > 0
    assert truncation_error(kl_decompose(128, 128)) == pytest.approx(0.0, abs=1e-12)


def test_bad_mode_count():
    with pytest.raises(BadModeCountError):
        kl_decompose(16, 0)
    with pytest.raises(BadModeCountError):
        kl_decompose(16, 17)


def test_kernel_inverts_second_derivative():
    report = kernel_solves_ode(np.cos, 128)
    assert report.residual < 1e-8
    assert report.boundary_value == 0.0
    assert report.terminal_slope == 0.0


@pytest.mark.parametrize(
    "f, solution",
    [
        (lambda t: np.ones_like(t), lambda t: t - t ** 2 / 2),
        (lambda t: np.zeros_like(t), lambda t: np.zeros_like(t)),
        (lambda t: np.sin(np.pi * t), lambda t: np.sin(np.pi * t) / np.pi ** 2 + t / np.pi),
    ],
)
def test_kernel_solution_matches_closed_form(f, solution):
    report = kernel_solves_ode(f, 512)
    assert np.max(np.abs(report.solution - solution(report.grid))) < 1e-3
    assert report.boundary_value == 0.0
    assert report.terminal_slope == 0.0


def test_sample_paths_deterministic_for_seed():
    basis = kl_decompose(32, 8)
    first = sample_paths(basis, 10, seed=7)
    assert first.shape == (10, 32)
    assert_allclose(first, sample_paths(basis, 10, seed=7))
    assert_allclose(sample_paths(basis, 3, coefficients=np.zeros((3, 8))), np.zeros((3, 32)))
    with pytest.raises(BadModeCountError):
        sample_paths(basis, 3, coefficients=np.zeros((3, 7)))


def test_empirical_covariance():
    basis = kl_decompose(64, 64)
    paths = sample_paths(basis, 20000, seed=settings.DEFAULT_SEED)
    report = covariance_check(paths, basis.kernel.grid)
    assert report.tolerance == 0.02
    assert report.max_deviation <= 0.02
    assert report.passed
    assert report.terminal_variance == pytest.approx(report.terminal_time, abs=0.02)
    assert increment_check(paths, basis.kernel.grid, stride=8) < 0.05
