"""
Матричное ядро
Сопряжение, структурные предикаты, Грам-Шмидт, следы и решетка проекторов
"""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.linalg import null_space, orth
from scipy.stats import unitary_group

from config import settings
from utils.errors import (
    DependentInputError,
    DimMismatchError,
    NonSquareError,
    NotProjectionError,
)

logger = logging.getLogger(__name__)


class Tolerance(BaseModel):
    """Допуск сравнения в max-норме элементов матрицы"""

    model_config = ConfigDict(frozen=True)

    abs_tol: float = Field(default_factory=lambda: settings.ABS_TOL, ge=0)
    rel_tol: float = Field(default_factory=lambda: settings.REL_TOL, ge=0)

    def bound(self, scale: float = 0.0) -> float:
        """Допустимое отклонение для величин масштаба scale"""
        return self.abs_tol + self.rel_tol * scale

    def scaled(self, factor: float) -> "Tolerance":
        """Допуск, ослабленный в factor раз"""
        return Tolerance(abs_tol=self.abs_tol * factor, rel_tol=self.rel_tol * factor)

    def close(self, a: np.ndarray, b: np.ndarray) -> bool:
        """Проверка ||a - b||_max <= bound(||b||_max)"""
        a = np.asarray(a)
        b = np.asarray(b)
        scale = float(np.max(np.abs(b))) if b.size else 0.0
        return max_norm(a - b) <= self.bound(scale)


def as_matrix(data) -> np.ndarray:
    """Приведение к двумерному комплексному массиву"""
    matrix = np.array(data, dtype=complex)
    if matrix.ndim == 1:
        matrix = matrix.reshape(-1, 1)
    if matrix.ndim != 2:
        raise DimMismatchError(f"Ожидалась матрица, получен массив размерности {matrix.ndim}")
    return matrix


def max_norm(A: np.ndarray) -> float:
    """Максимум модулей элементов"""
    A = np.asarray(A)
    return float(np.max(np.abs(A))) if A.size else 0.0


def require_square(A: np.ndarray) -> np.ndarray:
    """Проверка квадратности"""
    A = as_matrix(A)
    if A.shape[0] != A.shape[1]:
        raise NonSquareError(f"Матрица {A.shape[0]}x{A.shape[1]} не квадратная")
    return A


def adjoint(A: np.ndarray) -> np.ndarray:
    """Эрмитово сопряжение (A*)_ij = conj(A_ji)"""
    return as_matrix(A).conj().T.copy()


def is_hermitian(A: np.ndarray, tol: Optional[Tolerance] = None) -> bool:
    """A* = A с точностью tol"""
    A = require_square(A)
    return (tol or Tolerance()).close(adjoint(A), A)


def is_unitary(A: np.ndarray, tol: Optional[Tolerance] = None) -> bool:
    """A*A = AA* = I с точностью tol"""
    A = require_square(A)
    tol = tol or Tolerance()
    identity = np.eye(A.shape[0])
    return tol.close(adjoint(A) @ A, identity) and tol.close(A @ adjoint(A), identity)


def is_projection(A: np.ndarray, tol: Optional[Tolerance] = None) -> bool:
    """A = A* = A^2 с точностью tol"""
    A = require_square(A)
    tol = tol or Tolerance()
    return is_hermitian(A, tol) and tol.close(A @ A, A)


def hermitian_parts(A: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Разложение A = R + iS на самосопряженные части

    Args:
        A: Квадратная матрица

    Returns:
        Кортеж (R, S)
    """
    A = require_square(A)
    real_part = (A + adjoint(A)) / 2
    imag_part = (A - adjoint(A)) / 2j
    return real_part, imag_part


def unitary_from_projection(P: np.ndarray, z: complex) -> np.ndarray:
    """Оператор U(z) = zP + (I - P); унитарен при |z| = 1"""
    P = require_square(P)
    return z * P + (np.eye(P.shape[0]) - P)


def inner(x: np.ndarray, y: np.ndarray, weights: Optional[np.ndarray] = None) -> complex:
    """Скалярное произведение <x, y> = sum w_k conj(x_k) y_k (линейно по второму аргументу)"""
    x = np.ravel(np.asarray(x, dtype=complex))
    y = np.ravel(np.asarray(y, dtype=complex))
    if x.shape != y.shape:
        raise DimMismatchError(f"Длины векторов {x.size} и {y.size} не совпадают")
    if weights is None:
        return complex(np.vdot(x, y))
    return complex(np.sum(np.asarray(weights) * x.conj() * y))


def norm(x: np.ndarray, weights: Optional[np.ndarray] = None) -> float:
    """Норма, согласованная с inner"""
    return float(np.sqrt(max(inner(x, x, weights).real, 0.0)))


def gram_matrix(vectors: Sequence[np.ndarray], weights: Optional[np.ndarray] = None) -> np.ndarray:
    """Матрица Грама G_ij = <v_i, v_j>"""
    V = np.column_stack([np.ravel(np.asarray(v, dtype=complex)) for v in vectors])
    if weights is None:
        return V.conj().T @ V
    return V.conj().T @ (np.asarray(weights)[:, None] * V)


def rank(A: np.ndarray, cutoff: Optional[float] = None) -> int:
    """Численный ранг с относительным порогом по сингулярным числам"""
    A = as_matrix(A)
    if A.size == 0:
        return 0
    cutoff = settings.RANK_CUTOFF if cutoff is None else cutoff
    singular = np.linalg.svd(A, compute_uv=False)
    if singular.size == 0 or singular[0] == 0:
        return 0
    return int(np.sum(singular > cutoff * singular[0]))


def gram_schmidt(
    vectors: Sequence[np.ndarray],
    weights: Optional[np.ndarray] = None,
    tol: Optional[Tolerance] = None,
) -> List[np.ndarray]:
    """
    Модифицированный процесс Грама-Шмидта с повторной ортогонализацией

    Args:
        vectors: Линейно независимые векторы
        weights: Веса скалярного произведения (None - евклидово)
        tol: Допуск

    Returns:
        Ортонормированный список; i-й вектор лежит в линейной оболочке первых i входов
    """
    tol = tol or Tolerance()
    if not vectors:
        return []

    gram = gram_matrix(vectors, weights)
    scale = float(np.max(np.abs(np.diag(gram)))) or 1.0
    eigenvalues = np.linalg.eigvalsh((gram + gram.conj().T) / 2)
    independent = int(np.sum(eigenvalues > settings.RANK_CUTOFF * scale))
    if independent < len(vectors):
        raise DependentInputError(
            f"Ранг матрицы Грама {independent} меньше числа векторов {len(vectors)}"
        )

    basis: List[np.ndarray] = []
    for vector in vectors:
        current = np.ravel(np.asarray(vector, dtype=complex)).copy()
        # Два прохода: второй убирает ошибки округления первого
        for _ in range(2):
            for q in basis:
                current = current - inner(q, current, weights) * q
        length = norm(current, weights)
        if length <= tol.bound(np.sqrt(scale)):
            raise DependentInputError("Вектор почти лежит в оболочке предыдущих")
        basis.append(current / length)

    logger.debug(f"Грам-Шмидт: ортонормировано {len(basis)} векторов")
    return basis


def trace(A: np.ndarray) -> complex:
    """След квадратной матрицы"""
    return complex(np.trace(require_square(A)))


def trace_pairing(A: np.ndarray, rho: np.ndarray) -> complex:
    """Спаривание tr(A rho) между B(H) и классом следа"""
    A = require_square(A)
    rho = require_square(rho)
    if A.shape != rho.shape:
        raise DimMismatchError(f"Размерности {A.shape} и {rho.shape} не совпадают")
    # tr(A rho) = sum_ij A_ij rho_ji без полного произведения
    return complex(np.sum(A * rho.T))


def ket_bra(xi: np.ndarray, eta: np.ndarray) -> np.ndarray:
    """Оператор ранга один |xi><eta|"""
    xi = np.ravel(np.asarray(xi, dtype=complex))
    eta = np.ravel(np.asarray(eta, dtype=complex))
    return np.outer(xi, eta.conj())


def range_projection(A: np.ndarray, cutoff: Optional[float] = None) -> np.ndarray:
    """Ортогональный проектор на образ A"""
    A = as_matrix(A)
    cutoff = settings.RANK_CUTOFF if cutoff is None else cutoff
    if max_norm(A) == 0:
        return np.zeros((A.shape[0], A.shape[0]), dtype=complex)
    basis = orth(A, rcond=cutoff)
    return basis @ basis.conj().T


def null_projection(A: np.ndarray, cutoff: Optional[float] = None) -> np.ndarray:
    """Ортогональный проектор на ядро A"""
    A = as_matrix(A)
    cutoff = settings.RANK_CUTOFF if cutoff is None else cutoff
    if max_norm(A) == 0:
        return np.eye(A.shape[1], dtype=complex)
    basis = null_space(A, rcond=cutoff)
    return basis @ basis.conj().T


def _require_projections(tol: Tolerance, *projections: np.ndarray) -> None:
    """Проверка, что все аргументы - проекторы одной размерности"""
    shapes = {require_square(P).shape for P in projections}
    if len(shapes) != 1:
        raise DimMismatchError(f"Проекторы разных размерностей: {sorted(shapes)}")
    for P in projections:
        if not is_projection(P, tol):
            raise NotProjectionError("Аргумент не является ортогональным проектором")


def meet(P: np.ndarray, Q: np.ndarray, tol: Optional[Tolerance] = None) -> np.ndarray:
    """P ∧ Q: проектор на пересечение образов, ядро (I - P) + (I - Q)"""
    tol = tol or Tolerance()
    _require_projections(tol, P, Q)
    identity = np.eye(P.shape[0])
    return null_projection((identity - P) + (identity - Q))


def join(P: np.ndarray, Q: np.ndarray, tol: Optional[Tolerance] = None) -> np.ndarray:
    """P ∨ Q: проектор на оболочку образов"""
    tol = tol or Tolerance()
    _require_projections(tol, P, Q)
    return range_projection(np.hstack([as_matrix(P), as_matrix(Q)]))


def leq(P: np.ndarray, Q: np.ndarray, tol: Optional[Tolerance] = None) -> bool:
    """P <= Q тогда и только тогда, когда PQ = P"""
    tol = tol or Tolerance()
    _require_projections(tol, P, Q)
    return tol.close(as_matrix(P) @ as_matrix(Q), as_matrix(P))


def sum_is_projection(P: np.ndarray, Q: np.ndarray, tol: Optional[Tolerance] = None) -> bool:
    """P + Q - проектор тогда и только тогда, когда PQ = 0"""
    tol = tol or Tolerance()
    _require_projections(tol, P, Q)
    return max_norm(as_matrix(P) @ as_matrix(Q)) <= tol.bound(1.0)


def solve_intertwiner(
    source: np.ndarray,
    target: np.ndarray,
) -> Tuple[np.ndarray, float]:
    """
    Решение W @ source = target методом наименьших квадратов

    Args:
        source: Матрица, столбцы которой порождают пространство
        target: Образы столбцов

    Returns:
        Кортеж (W, невязка в max-норме)
    """
    source = as_matrix(source)
    target = as_matrix(target)
    if source.shape[1] != target.shape[1]:
        raise DimMismatchError("Число векторов-образов не совпадает с числом прообразов")
    solution, *_ = np.linalg.lstsq(source.T, target.T, rcond=None)
    intertwiner = solution.T
    residual = max_norm(intertwiner @ source - target)
    return intertwiner, residual


def random_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Случайная эрмитова матрица с гауссовыми элементами"""
    raw = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (raw + raw.conj().T) / 2


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Случайная унитарная матрица по мере Хаара"""
    if dim == 1:
        return np.exp(2j * np.pi * rng.random()) * np.ones((1, 1))
    return unitary_group.rvs(dim, random_state=rng)


def random_density(dim: int, rng: np.random.Generator, rank_: Optional[int] = None) -> np.ndarray:
    """Случайная матрица плотности заданного ранга"""
    rank_ = dim if rank_ is None else rank_
    factor = rng.standard_normal((dim, rank_)) + 1j * rng.standard_normal((dim, rank_))
    rho = factor @ factor.conj().T
    return rho / np.trace(rho).real
