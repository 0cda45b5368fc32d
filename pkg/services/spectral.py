"""
Спектральное разложение
Конечные проекторнозначные меры, функциональное исчисление и ступенчатые приближения
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, Optional, Tuple, Union

import numpy as np

from config import settings
from services.matrix_core import (
    Tolerance,
    adjoint,
    inner,
    is_hermitian,
    max_norm,
    require_square,
)
from utils.errors import BadLevelError, NotHermitianError

logger = logging.getLogger(__name__)

RealSet = Union[Callable[[float], bool], Iterable[float]]


@dataclass(frozen=True, eq=False)
class SpectralData:
    """Кластеры собственных значений с ортогональными спектральными проекторами"""

    eigenvalues: np.ndarray  # строго убывают
    projections: Tuple[np.ndarray, ...]
    multiplicities: Tuple[int, ...]

    @property
    def dimension(self) -> int:
        return int(sum(self.multiplicities))

    def reconstruct(self) -> np.ndarray:
        """Сумма lambda_i P_i"""
        return sum(
            (value * projection for value, projection in zip(self.eigenvalues, self.projections)),
            np.zeros((self.dimension, self.dimension), dtype=complex),
        )


@dataclass(frozen=True, eq=False)
class StepFunction:
    """
    Неубывающая ступенчатая функция

    Ступени хранятся на [0, min(M, cap)]; правее последней точки излома лестница
    шага width продолжается формулой floor(x / width) * width до значения cap.
    """

    breakpoints: np.ndarray
    values: np.ndarray
    cap: float
    width: float

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        index = np.searchsorted(self.breakpoints, x, side="right") - 1
        stored = np.where(index >= 0, self.values[np.clip(index, 0, None)], 0.0)
        tail = np.minimum(np.floor(x / self.width) * self.width, self.cap)
        result = np.where(x >= self.breakpoints[-1], tail, stored)
        return result if result.ndim else float(result)


def jacobi_eigh(A: np.ndarray, tol: Optional[float] = None, max_sweeps: Optional[int] = None):
    """
    Циклический метод вращений Якоби для эрмитовой матрицы

    Args:
        A: Эрмитова матрица
        tol: Относительный порог внедиагональной нормы
        max_sweeps: Максимальное число циклов

    Returns:
        Кортеж (собственные значения, собственные векторы по столбцам)
    """
    work = require_square(A).copy()
    n = work.shape[0]
    vectors = np.eye(n, dtype=complex)
    tol = 1e-13 if tol is None else tol
    max_sweeps = max_sweeps or settings.JACOBI_MAX_SWEEPS
    scale = np.linalg.norm(work) or 1.0

    for sweep in range(max_sweeps):
        off_diagonal = np.linalg.norm(work - np.diag(np.diag(work)))
        if off_diagonal <= tol * scale:
            logger.debug(f"Якоби сошелся за {sweep} циклов")
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                element = work[p, q]
                radius = abs(element)
                if radius <= tol * scale * 1e-3:
                    continue
                phase = element / radius
                alpha = work[p, p].real
                beta = work[q, q].real
                zeta = (beta - alpha) / (2 * radius)
                t = (1.0 if zeta >= 0 else -1.0) / (abs(zeta) + np.sqrt(1 + zeta * zeta))
                c = 1 / np.sqrt(1 + t * t)
                s = t * c
                # Фазовый множитель делает блок вещественным, затем вещественный поворот
                rotation = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                columns = [p, q]
                work[:, columns] = work[:, columns] @ rotation
                work[columns, :] = rotation.conj().T @ work[columns, :]
                vectors[:, columns] = vectors[:, columns] @ rotation
    else:
        logger.warning(f"Якоби не сошелся за {max_sweeps} циклов")

    return np.real(np.diag(work)), vectors


def spectral_decompose(
    A: np.ndarray,
    group_tol: Optional[float] = None,
    tol: Optional[Tolerance] = None,
    method: str = "eigh",
) -> SpectralData:
    """
    Спектральное разложение A = sum lambda_i P_i

    Args:
        A: Эрмитова матрица
        group_tol: Порог склейки близких собственных значений
        tol: Допуск проверки эрмитовости
        method: "eigh" (LAPACK) или "jacobi"

    Returns:
        SpectralData с убывающими собственными значениями
    """
    A = require_square(A)
    tol = tol or Tolerance()
    if not is_hermitian(A, tol):
        raise NotHermitianError("Спектральное разложение определено только для эрмитовых матриц")

    hermitian = (A + adjoint(A)) / 2
    if group_tol is None:
        group_tol = settings.GROUP_TOL_FACTOR * max(1.0, max_norm(hermitian))

    if method == "jacobi":
        values, vectors = jacobi_eigh(hermitian)
    else:
        values, vectors = np.linalg.eigh(hermitian)

    order = np.argsort(values)[::-1]
    values = values[order]
    vectors = vectors[:, order]

    clusters = []
    start = 0
    for index in range(1, len(values) + 1):
        if index == len(values) or values[index - 1] - values[index] > group_tol:
            clusters.append((start, index))
            start = index

    eigenvalues = np.array([values[a:b].mean() for a, b in clusters])
    projections = tuple(vectors[:, a:b] @ vectors[:, a:b].conj().T for a, b in clusters)
    multiplicities = tuple(b - a for a, b in clusters)

    logger.debug(f"Спектр: {len(clusters)} кластеров, кратности {multiplicities}")
    return SpectralData(eigenvalues=eigenvalues, projections=projections, multiplicities=multiplicities)


def interval(lower: float = -np.inf, upper: float = np.inf, closed: bool = True) -> Callable[[float], bool]:
    """Предикат принадлежности промежутку [lower, upper] (или открытому)"""
    if closed:
        return lambda x: lower <= x <= upper
    return lambda x: lower < x < upper


def _membership(E: RealSet, group_tol: float) -> Callable[[float], bool]:
    if callable(E):
        return E
    points = np.array(list(E), dtype=float)
    return lambda x: bool(points.size) and bool(np.min(np.abs(points - x)) <= group_tol)


def pvm_evaluate(S: SpectralData, E: RealSet, group_tol: float = 1e-9) -> np.ndarray:
    """
    Значение проекторнозначной меры P(E) = sum_{lambda_i in E} P_i

    Args:
        S: Спектральные данные
        E: Предикат на вещественных числах или конечное множество точек

    Returns:
        Проектор P(E)
    """
    contains = _membership(E, group_tol)
    result = np.zeros((S.dimension, S.dimension), dtype=complex)
    for value, projection in zip(S.eigenvalues, S.projections):
        if contains(float(value)):
            result = result + projection
    return result


def functional_calculus(S: SpectralData, f: Callable[[float], complex]) -> np.ndarray:
    """f(A) = sum f(lambda_i) P_i"""
    result = np.zeros((S.dimension, S.dimension), dtype=complex)
    for value, projection in zip(S.eigenvalues, S.projections):
        result = result + complex(f(float(value))) * projection
    return result


def vector_measure(S: SpectralData, x: np.ndarray) -> Dict[float, float]:
    """Скалярная спектральная мера mu_x({lambda_i}) = <x, P_i x>"""
    x = np.ravel(np.asarray(x, dtype=complex))
    return {
        float(value): inner(x, projection @ x).real
        for value, projection in zip(S.eigenvalues, S.projections)
    }


def approximate_by_steps(M: float, n: int) -> StepFunction:
    """
    Ступенчатая функция s_n(x) = i 2^-n на [i 2^-n, (i+1) 2^-n), равная n при x >= n

    Args:
        M: Правый конец области, на которой хранятся ступени
        n: Уровень (n >= 1)

    Returns:
        StepFunction с неубывающими значениями; точки излома лежат в [0, min(M, n)]
    """
    if n < 1:
        raise BadLevelError(f"Уровень ступенчатой аппроксимации должен быть >= 1, получено {n}")
    width = 2.0 ** -n
    top = max(0.0, min(float(M), float(n)))
    # n кратно 2^-n, поэтому при M >= n последняя точка излома равна n
    breakpoints = np.arange(int(np.floor(top / width)) + 1) * width
    return StepFunction(breakpoints=breakpoints, values=breakpoints.copy(), cap=float(n), width=width)


def step_calculus(S: SpectralData, f: Callable[[float], float], n: int) -> np.ndarray:
    """
    Приближение f(A) оператором (s_n o f)(A) для неотрицательной f

    Args:
        S: Спектральные данные
        f: Неотрицательная функция на спектре
        n: Уровень ступенчатой аппроксимации

    Returns:
        Матрица (s_n o f)(A); отличается от f(A) не более чем на 2^-n при n > max f
    """
    values = [float(f(float(value))) for value in S.eigenvalues]
    steps = approximate_by_steps(max(values + [0.0]), n)
    return functional_calculus(S, lambda x: steps(float(f(x))))
