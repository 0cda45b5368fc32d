"""
Тесты базиса Хаара и матрицы оператора умножения на t
"""

from fractions import Fraction

import numpy as np
import pytest
import sympy

from services.wavelet import (
    diagonal_plus_compact_report,
    gram_matrix,
    haar_basis,
    haar_coefficients,
    mt_matrix,
    mt_spectrum,
    parseval_defect,
    spectrum_moments,
)
from utils.errors import BadLevelError, DimMismatchError


def test_basis_layout():
    basis = haar_basis(2)
    assert basis.size == 8
    assert basis.cells == 8
    assert basis.names()[:4] == ["phi0", "psi(0,0)", "psi(1,0)", "psi(1,1)"]
    with pytest.raises(BadLevelError):
        haar_basis(-1)


def test_haar_function_values():
    basis = haar_basis(1)
    phi0, psi00, psi10 = basis.functions[:3]
    assert phi0(0.3) == 1.0
    assert psi00(0.75) == -1.0
    assert psi10(0.1) == pytest.approx(np.sqrt(2))
    assert psi10(0.6) == 0.0
    assert psi00.support_center() == Fraction(1, 2)
    assert psi10.support_center() == Fraction(1, 4)


def test_gram_matrix_is_exact_identity():
    assert gram_matrix(haar_basis(3)) == sympy.eye(16)


def test_lowest_level_entries():
    M = mt_matrix(haar_basis(0))
    assert M.entry(0, 0) == sympy.Rational(1, 2)
    assert M.entry(0, 1) == sympy.Rational(-1, 4)
    assert M.entry(1, 1) == sympy.Rational(1, 2)


def test_diagonal_is_support_center():
    M = mt_matrix(haar_basis(4))
    assert M.is_symmetric()
    centers = [u.support_center() for u in M.basis.functions]
    for value, center in zip(M.diagonal(), centers):
        assert value == sympy.Rational(center.numerator, center.denominator)


def test_mixed_parity_entries_carry_sqrt2():
    M = mt_matrix(haar_basis(1))
    # <phi0, t psi(1,0)> = -sqrt(2)/16
    assert sympy.simplify(M.entry(0, 2) + sympy.sqrt(2) / 16) == 0


def test_off_diagonal_structure():
    report = diagonal_plus_compact_report(mt_matrix(haar_basis(4)))
    assert report["max_off_diagonal"] <= 0.25 + 1e-12
    assert report["fitted_exponent"] < 0
    assert report["diagonal_range"][0] > 0
    assert report["diagonal_range"][1] < 1


def test_compressed_spectrum_is_cell_midpoints():
    basis = haar_basis(3)
    eigenvalues = np.linalg.eigvalsh(mt_matrix(basis).to_numpy())
    expected = [float(x) for x in mt_spectrum(basis)]
    np.testing.assert_allclose(eigenvalues, expected, atol=1e-12)
    mean, second = spectrum_moments(mt_matrix(basis))
    assert mean == pytest.approx(0.5)
    assert second == pytest.approx(np.mean(np.square(expected)))


def test_parseval_for_step_functions():
    basis = haar_basis(1)
    values = [1, Fraction(1, 2), 3, -2]
    coefficients = haar_coefficients(basis, values)
    assert coefficients[0] == sympy.Rational(5, 8)
    assert parseval_defect(basis, values) == 0
    with pytest.raises(DimMismatchError):
        haar_coefficients(basis, [1, 2, 3])
