"""
Тесты коммутанта
"""

import numpy as np
import pytest

from services.commutant import (
    amplify,
    commutant,
    double_commutant,
    generated_algebra_dimension,
    is_irreducible,
    matrix_units,
    multiplicity_of_identity_amplification,
    nontrivial_projection,
    with_adjoints,
)
from services.matrix_core import is_projection, max_norm
from utils.errors import DimMismatchError

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def test_block_diagonal_commutant():
    report = commutant([np.diag([1.0, 1.0, 2.0])])
    assert report.dimension == 5
    assert not report.is_abelian
    assert report.center_dimension == 2
    assert report.matrix_block_size is None


def test_pauli_pair_is_irreducible():
    report = commutant([PAULI_X, PAULI_Z])
    assert report.dimension == 1
    assert report.matrix_block_size == 1
    assert is_irreducible([PAULI_X, PAULI_Z])


def test_doubled_representation_has_multiplicity_two():
    report = commutant(amplify(matrix_units(2), 2))
    assert report.dimension == 4
    assert not report.is_abelian
    assert report.matrix_block_size == 2
    assert report.center_dimension == 1


def test_identity_amplification_dimension():
    assert multiplicity_of_identity_amplification(3, 2).dimension == 9


def test_commutant_basis_commutes():
    A = np.diag([1.0, 1.0, 2.0])
    for C in commutant([A]).basis:
        assert max_norm(C @ A - A @ C) < 1e-10


def test_reducing_projection():
    A = np.diag([1.0, 1.0, 2.0])
    report = commutant(with_adjoints([A]))
    P = nontrivial_projection(report)
    assert P is not None
    assert is_projection(P, None)
    assert max_norm(P @ A - A @ P) < 1e-8
    assert 0 < np.trace(P).real < 3
    assert nontrivial_projection(commutant([PAULI_X, PAULI_Z])) is None


def test_double_commutant_equals_generated_algebra():
    A = np.diag([1.0, 1.0, 2.0])
    assert generated_algebra_dimension([A]) == 2
    assert double_commutant([A]).dimension == 2
    assert generated_algebra_dimension(matrix_units(2)) == 4


def test_mixed_dimensions_rejected():
    with pytest.raises(DimMismatchError):
        commutant([np.eye(2), np.eye(3)])
