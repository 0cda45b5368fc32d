"""
Разложение Карунена-Лоэва броуновского движения
Ядро s∧t на сетке, выборка траекторий и обращение оператора -d^2/dt^2
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from config import settings
from utils.errors import BadModeCountError, GridTooSmallError

logger = logging.getLogger(__name__)

GridFunction = Union[Callable[[np.ndarray], np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class KernelDiscretization:
    """K_jk = min(t_j, t_k) / N на середине ячеек t_k = (k - 1/2)/N"""

    grid: np.ndarray
    matrix: np.ndarray

    @property
    def size(self) -> int:
        return self.grid.size

    @property
    def weight(self) -> float:
        return 1.0 / self.size

    def apply(self, values: np.ndarray) -> np.ndarray:
        return self.matrix @ values

    def evaluate(self, t: np.ndarray, values: np.ndarray) -> np.ndarray:
        """(Kf)(t) = integral min(t, s) f(s) ds квадратурой по узлам сетки"""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        return np.minimum(t[:, None], self.grid[None, :]) @ values * self.weight


def brownian_kernel(N: int) -> KernelDiscretization:
    if N < 2:
        raise GridTooSmallError(f"Сетка ядра должна содержать хотя бы 2 узла, получено {N}")
    grid = (np.arange(1, N + 1) - 0.5) / N
    matrix = np.minimum(grid[:, None], grid[None, :]) / N
    return KernelDiscretization(grid=grid, matrix=matrix)


@dataclass(frozen=True, eq=False)
class KLBasis:
    """Собственные пары ядра: eigenfunctions[:, n] нормированы в L^2[0, 1]"""

    kernel: KernelDiscretization
    eigenvalues: np.ndarray  # по убыванию
    eigenfunctions: np.ndarray

    @property
    def modes(self) -> int:
        return self.eigenvalues.size

    def evaluate(self, t) -> np.ndarray:
        """Продолжение Нистрема phi_n(t) = (1/lambda_n) integral min(t, s) phi_n(s) ds; равно 0 при t = 0"""
        return self.kernel.evaluate(t, self.eigenfunctions) / self.eigenvalues[None, :]

    def orthonormality_residual(self) -> float:
        gram = self.eigenfunctions.T @ self.eigenfunctions * self.kernel.weight
        return float(np.max(np.abs(gram - np.eye(self.modes))))


def analytic_eigenvalue(k: int) -> float:
    """1/((k - 1/2) pi)^2"""
    return 1.0 / ((k - 0.5) * np.pi) ** 2


def analytic_eigenfunction(k: int, t: np.ndarray) -> np.ndarray:
    """sqrt(2) sin((k - 1/2) pi t)"""
    return np.sqrt(2) * np.sin((k - 0.5) * np.pi * np.asarray(t))


def kl_decompose(N: int, m: int) -> KLBasis:
    """
    Старшие m собственных пар дискретизованного ядра s∧t

    Args:
        N: Число узлов сетки
        m: Число мод (m <= N)

    Returns:
        KLBasis; lambda_k приближает 1/((k - 1/2) pi)^2
    """
    if m < 1 or m > N:
        raise BadModeCountError(f"Число мод {m} должно лежать в [1, {N}]")
    kernel = brownian_kernel(N)
    values, vectors = np.linalg.eigh(kernel.matrix)
    order = np.argsort(values)[::-1][:m]
    values = values[order]
    functions = vectors[:, order] * np.sqrt(N)
    # первая точка сетки положительна
    signs = np.where(functions[0] < 0, -1.0, 1.0)
    functions = functions * signs[None, :]

    logger.info(f"КЛ-разложение: N={N}, m={m}, lambda_1={values[0]:.6f}")
    return KLBasis(kernel=kernel, eigenvalues=values, eigenfunctions=functions)


def truncation_error(basis: KLBasis) -> float:
    """sum_(n > m) lambda_n = tr K - sum_(n <= m) lambda_n"""
    return float(np.trace(basis.kernel.matrix) - np.sum(basis.eigenvalues))


@dataclass(frozen=True, eq=False)
class OdeReport:
    """Проверка того, что u = Kf решает -u'' = f, u(0) = 0, u'(1) = 0"""

    grid: np.ndarray
    solution: np.ndarray
    residual: float
    boundary_value: float
    terminal_slope: float


def _sample(f: GridFunction, grid: np.ndarray) -> np.ndarray:
    if callable(f):
        return np.asarray(f(grid), dtype=float) * np.ones_like(grid)
    values = np.asarray(f, dtype=float)
    if values.shape != grid.shape:
        raise GridTooSmallError(f"Функция задана в {values.size} точках, а сетка содержит {grid.size}")
    return values


def kernel_solves_ode(f: GridFunction, N: int) -> OdeReport:
    """
    u = Kf и невязка второй разности -D^2 u - f во внутренних узлах

    Args:
        f: Функция на [0, 1] или ее значения в узлах сетки
        N: Число узлов

    Returns:
        OdeReport; u(0) вычисляется продолжением Нистрема
    """
    kernel = brownian_kernel(N)
    values = _sample(f, kernel.grid)
    u = kernel.apply(values)
    h = 1.0 / N
    second = (u[2:] - 2 * u[1:-1] + u[:-2]) / h ** 2
    residual = float(np.max(np.abs(-second - values[1:-1]))) if N > 2 else 0.0
    boundary = float(kernel.evaluate(0.0, values)[0])
    # Kf постоянна правее последнего узла: u'(1) = 0
    end = kernel.evaluate(np.array([kernel.grid[-1], 1.0]), values)
    slope = float((end[1] - end[0]) / (1.0 - kernel.grid[-1]))
    logger.debug(f"Ядро как обратный оператор: невязка {residual:.2e}, u(0)={boundary:.2e}")
    return OdeReport(
        grid=kernel.grid,
        solution=u,
        residual=residual,
        boundary_value=boundary,
        terminal_slope=slope,
    )


def sample_paths(
    basis: KLBasis,
    count: int,
    seed: Optional[int] = None,
    coefficients: Optional[np.ndarray] = None,
) -> np.ndarray:
    """
    Траектории B(t_k) = sum_n sqrt(lambda_n) phi_n(t_k) Z_n

    Args:
        basis: Базис Карунена-Лоэва
        count: Число траекторий P
        seed: Зерно генератора numpy (PCG64)
        coefficients: Заданные коэффициенты Z размера P x m вместо случайных

    Returns:
        Матрица P x N
    """
    if coefficients is None:
        rng = np.random.default_rng(settings.DEFAULT_SEED if seed is None else seed)
        coefficients = rng.standard_normal((count, basis.modes))
    coefficients = np.asarray(coefficients, dtype=float)
    if coefficients.shape != (count, basis.modes):
        raise BadModeCountError(f"Ожидались коэффициенты {count}x{basis.modes}, получено {coefficients.shape}")
    scaled = basis.eigenfunctions * np.sqrt(basis.eigenvalues)[None, :]
    return coefficients @ scaled.T


@dataclass(frozen=True)
class CovarianceReport:
    max_deviation: float
    terminal_variance: float
    terminal_time: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance

    def to_payload(self) -> dict:
        payload = dict(self.__dict__)
        payload["passed"] = self.passed
        return payload


def covariance_check(paths: np.ndarray, grid: np.ndarray, tolerance: Optional[float] = None) -> CovarianceReport:
    """Эмпирическая ковариация E[B_s B_t] против min(s, t) (среднее известно и равно нулю)"""
    tolerance = settings.MC_TOLERANCE if tolerance is None else tolerance
    empirical = paths.T @ paths / paths.shape[0]
    exact = np.minimum(grid[:, None], grid[None, :])
    deviation = float(np.max(np.abs(empirical - exact)))
    logger.info(f"Ковариация {paths.shape[0]} траекторий: отклонение {deviation:.4f} (допуск {tolerance})")
    return CovarianceReport(
        max_deviation=deviation,
        terminal_variance=float(empirical[-1, -1]),
        terminal_time=float(grid[-1]),
        tolerance=tolerance,
    )


def increment_check(paths: np.ndarray, grid: np.ndarray, stride: int = 1) -> float:
    """max |Var(B_t - B_s) - (t - s)| по парам узлов с шагом stride"""
    index = np.arange(0, grid.size, stride)
    sub = paths[:, index]
    times = grid[index]
    worst = 0.0
    for i in range(index.size):
        increments = sub[:, i + 1:] - sub[:, i:i + 1]
        if increments.size == 0:
            continue
        variance = np.mean(increments ** 2, axis=0)
        worst = max(worst, float(np.max(np.abs(variance - (times[i + 1:] - times[i])))))
    return worst
