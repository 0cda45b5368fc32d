"""
Коммутант конечного набора матриц
Неприводимость (лемма Шура) и структура кратностей
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import block_diag, null_space

from config import settings
from services.matrix_core import (
    adjoint,
    as_matrix,
    max_norm,
    rank,
    require_square,
)
from services.spectral import spectral_decompose
from utils.errors import DimMismatchError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class CommutantReport:
    """Результат вычисления коммутанта"""

    dimension: int
    basis: Tuple[np.ndarray, ...]
    is_abelian: bool
    matrix_block_size: Optional[int]  # k, если коммутант изоморфен M_k
    center_dimension: int

    def to_payload(self) -> dict:
        """Представление для JSON-отчета (без базиса)"""
        return {
            "dimension": self.dimension,
            "is_abelian": self.is_abelian,
            "matrix_block_size": self.matrix_block_size,
            "center_dimension": self.center_dimension,
        }


def _check_generators(generators: Sequence[np.ndarray]) -> List[np.ndarray]:
    matrices = [require_square(g) for g in generators]
    if not matrices:
        raise DimMismatchError("Пустой набор образующих")
    dims = {m.shape[0] for m in matrices}
    if len(dims) != 1:
        raise DimMismatchError(f"Образующие разных размерностей: {sorted(dims)}")
    return matrices


def _sylvester_stack(generators: Sequence[np.ndarray]) -> np.ndarray:
    """Матрица линейного отображения vec(X) -> (XA_i - A_iX)_i в построчной векторизации"""
    n = generators[0].shape[0]
    identity = np.eye(n)
    return np.vstack([np.kron(identity, A.T) - np.kron(A, identity) for A in generators])


def _span_null_coefficients(elements: Sequence[np.ndarray], conditions) -> np.ndarray:
    """Коэффициенты линейных комбинаций elements, удовлетворяющих линейным условиям"""
    rows = []
    for condition in conditions:
        rows.append(np.column_stack([condition(X).reshape(-1) for X in elements]))
    system = np.vstack(rows)
    if max_norm(system) == 0:
        return np.eye(len(elements), dtype=complex)
    return null_space(system, rcond=settings.RANK_CUTOFF)


def _commutes_pairwise(basis: Sequence[np.ndarray], bound: float) -> bool:
    return all(
        max_norm(X @ Y - Y @ X) <= bound
        for i, X in enumerate(basis)
        for Y in basis[i + 1:]
    )


def center_dimension(basis: Sequence[np.ndarray]) -> int:
    """Размерность центра алгебры с базисом basis"""
    if len(basis) <= 1:
        return len(basis)
    conditions = [lambda X, Y=Y: X @ Y - Y @ X for Y in basis]
    return _span_null_coefficients(basis, conditions).shape[1]


def commutant(generators: Sequence[np.ndarray]) -> CommutantReport:
    """
    Коммутант {X : XA = AX для всех образующих A}

    Args:
        generators: Квадратные матрицы одной размерности

    Returns:
        CommutantReport с ортонормированным (по Гильберту-Шмидту) базисом
    """
    matrices = _check_generators(generators)
    n = matrices[0].shape[0]

    stack = _sylvester_stack(matrices)
    if max_norm(stack) == 0:
        vectors = np.eye(n * n, dtype=complex)
    else:
        vectors = null_space(stack, rcond=settings.RANK_CUTOFF)
    basis = tuple(vectors[:, k].reshape(n, n) for k in range(vectors.shape[1]))
    dimension = len(basis)

    bound = 1e3 * settings.ABS_TOL
    is_abelian = _commutes_pairwise(basis, bound)
    center = center_dimension(basis)

    block_size = None
    if dimension == 1:
        block_size = 1
    elif center == 1:
        k = int(round(np.sqrt(dimension)))
        if k * k == dimension:
            block_size = k

    logger.debug(f"Коммутант: размерность {dimension}, центр {center}, блок {block_size}")
    return CommutantReport(
        dimension=dimension,
        basis=basis,
        is_abelian=is_abelian,
        matrix_block_size=block_size,
        center_dimension=center,
    )


def with_adjoints(generators: Sequence[np.ndarray]) -> List[np.ndarray]:
    """Дополнение набора сопряженными матрицами"""
    matrices = [as_matrix(g) for g in generators]
    return matrices + [adjoint(g) for g in matrices]


def is_irreducible(generators: Sequence[np.ndarray]) -> bool:
    """Неприводимость *-замкнутого набора: коммутант одномерен"""
    return commutant(with_adjoints(generators)).dimension == 1


def nontrivial_projection(report: CommutantReport) -> Optional[np.ndarray]:
    """
    Проектор коммутанта, отличный от 0 и I (свидетель приводимости)

    Args:
        report: Коммутант *-замкнутого набора

    Returns:
        Проектор или None, если коммутант состоит из скаляров
    """
    if report.dimension <= 1:
        return None
    for X in report.basis:
        for hermitian in ((X + adjoint(X)) / 2, (X - adjoint(X)) / 2j):
            n = hermitian.shape[0]
            traceless = hermitian - np.trace(hermitian) / n * np.eye(n)
            if max_norm(traceless) <= 1e3 * settings.ABS_TOL:
                continue
            spectrum = spectral_decompose(traceless, group_tol=1e-6 * max(1.0, max_norm(traceless)))
            if len(spectrum.projections) > 1:
                return spectrum.projections[0]
    return None


def amplify(matrices: Sequence[np.ndarray], k: int) -> List[np.ndarray]:
    """A -> A ⊕ ... ⊕ A (k копий)"""
    return [block_diag(*([as_matrix(A)] * k)) for A in matrices]


def matrix_units(n: int) -> List[np.ndarray]:
    """Матричные единицы e_ij алгебры M_n"""
    units = []
    for i in range(n):
        for j in range(n):
            unit = np.zeros((n, n), dtype=complex)
            unit[i, j] = 1
            units.append(unit)
    return units


def multiplicity_of_identity_amplification(k: int, n: int) -> CommutantReport:
    """Коммутант k-кратного тождественного представления M_n (размерность k^2)"""
    return commutant(amplify(matrix_units(n), k))


def generated_algebra_dimension(generators: Sequence[np.ndarray]) -> int:
    """Размерность унитальной алгебры, порожденной набором (замыкание по произведениям)"""
    matrices = _check_generators(generators)
    n = matrices[0].shape[0]
    words = [np.eye(n, dtype=complex)] + matrices
    current = rank(np.column_stack([w.reshape(-1) for w in words]))
    while True:
        products = [w @ g for w in words for g in matrices]
        candidate = words + products
        span = np.column_stack([w.reshape(-1) for w in candidate])
        new_rank = rank(span)
        if new_rank == current:
            return current
        # Оставляем ортонормированный базис оболочки, чтобы слова не росли
        u, singular, _ = np.linalg.svd(span, full_matrices=False)
        keep = singular > settings.RANK_CUTOFF * singular[0]
        words = [u[:, i].reshape(n, n) for i in np.flatnonzero(keep)]
        current = new_rank


def double_commutant(generators: Sequence[np.ndarray]) -> CommutantReport:
    """Коммутант коммутанта"""
    first = commutant(_check_generators(generators))
    return commutant(list(first.basis))
