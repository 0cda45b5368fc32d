"""
Симметрические операторы на сетке
Дефектные подпространства, преобразование Кэли, самосопряженные расширения и матрицы Гейзенберга
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.linalg import null_space

from config import settings
from services.matrix_core import (
    Tolerance,
    adjoint,
    gram_schmidt,
    inner,
    is_hermitian,
    max_norm,
    norm,
    rank,
    require_square,
)
from utils.errors import GridTooSmallError, IndexMismatchError, OutsideDomainError, StencilError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class GridOperator:
    """
    Дискретизация симметрического оператора

    matrix действует как максимальный оператор на всей сетке; прямоугольная пара
    (maximal, weight) задает A* - lambda как maximal - lambda * weight на узлах,
    где уравнение имеет смысл (для оператора без границы это (H, I)).
    """

    grid_size: int
    step: float
    matrix: np.ndarray
    domain_projector: np.ndarray
    maximal: np.ndarray
    weight: np.ndarray
    name: str = "grid"

    @property
    def grid(self) -> np.ndarray:
        return np.arange(self.grid_size) * self.step

    def compressed(self) -> np.ndarray:
        """P A* P на минимальной области"""
        return self.domain_projector @ self.matrix @ self.domain_projector

    def in_domain(self, x: np.ndarray, tol: Optional[Tolerance] = None) -> bool:
        tol = tol or Tolerance()
        x = np.ravel(np.asarray(x, dtype=complex))
        return max_norm(x - self.domain_projector @ x) <= tol.bound(max_norm(x))


def _require_grid(N: int, minimum: int) -> None:
    if N < minimum:
        raise GridTooSmallError(f"Сетка из {N} узлов меньше минимальной ({minimum})")


def _boundary_projector(N: int, width: int) -> np.ndarray:
    diagonal = np.ones(N)
    diagonal[:width] = 0
    diagonal[N - width:] = 0
    return np.diag(diagonal).astype(complex)


def momentum_operator(N: int) -> GridOperator:
    """
    P = -i d/dx на [0, 1]: центральные разности внутри, односторонние второго порядка на концах

    Args:
        N: Число узлов (N >= MIN_GRID_SIZE)

    Returns:
        GridOperator; минимальная область - векторы, равные нулю на концах
    """
    _require_grid(N, settings.MIN_GRID_SIZE)
    h = 1.0 / (N - 1)
    D = np.zeros((N, N))
    for k in range(1, N - 1):
        D[k, k - 1] = -1 / (2 * h)
        D[k, k + 1] = 1 / (2 * h)
    D[0, :3] = np.array([-3, 4, -1]) / (2 * h)
    D[N - 1, N - 3:] = np.array([1, -4, 3]) / (2 * h)

    # Максимальная форма на полуцелых узлах: разность и среднее соседних значений
    difference = (np.eye(N - 1, N, 1) - np.eye(N - 1, N)) / h
    average = (np.eye(N - 1, N, 1) + np.eye(N - 1, N)) / 2

    return GridOperator(
        grid_size=N,
        step=h,
        matrix=-1j * D,
        domain_projector=_boundary_projector(N, 1),
        maximal=-1j * difference,
        weight=average.astype(complex),
        name="momentum",
    )


def laplacian_operator(N: int) -> GridOperator:
    """
    -d^2/dx^2 на [0, 1] с вещественными коэффициентами

    Минимальная область: значения и производные на концах равны нулю (по два узла с каждой стороны).
    """
    _require_grid(N, settings.MIN_GRID_SIZE)
    h = 1.0 / (N - 1)
    second = (np.eye(N - 2, N) - 2 * np.eye(N - 2, N, 1) + np.eye(N - 2, N, 2)) / h ** 2
    matrix = np.zeros((N, N))
    matrix[1:N - 1] = -second
    matrix[0] = matrix[1]
    matrix[N - 1] = matrix[N - 2]
    return GridOperator(
        grid_size=N,
        step=h,
        matrix=matrix.astype(complex),
        domain_projector=_boundary_projector(N, 2),
        maximal=(-second).astype(complex),
        weight=np.eye(N - 2, N, 1).astype(complex),
        name="laplacian",
    )


def hermitian_grid_operator(H: np.ndarray) -> GridOperator:
    """Эрмитова матрица как оператор без границы (минимальная область - все пространство)"""
    H = require_square(H)
    n = H.shape[0]
    return GridOperator(
        grid_size=n,
        step=1.0,
        matrix=H,
        domain_projector=np.eye(n, dtype=complex),
        maximal=H,
        weight=np.eye(n, dtype=complex),
        name="hermitian",
    )


@dataclass(frozen=True, eq=False)
class DeficiencyData:
    """Индексы дефекта и ортонормированные базисы D_+ = N(A* - i), D_- = N(A* + i)"""

    d_plus: int
    d_minus: int
    basis_plus: Tuple[np.ndarray, ...]
    basis_minus: Tuple[np.ndarray, ...]
    residual: float

    @property
    def indices(self) -> Tuple[int, int]:
        return self.d_plus, self.d_minus


def _kernel(op: GridOperator, shift: complex, threshold: float) -> Tuple[np.ndarray, ...]:
    system = op.maximal - shift * op.weight
    vectors = null_space(system, rcond=threshold)
    return tuple(vectors[:, k] for k in range(vectors.shape[1]))


def deficiency(op: GridOperator, threshold: Optional[float] = None) -> DeficiencyData:
    """
    Дефектные подпространства максимального оператора

    Args:
        op: Оператор на сетке
        threshold: Относительный порог сингулярных чисел (DEFICIENCY_THRESHOLD)

    Returns:
        DeficiencyData; для momentum_operator d_+ = d_- = 1, векторы приближают e^(-x) и e^(x)
    """
    threshold = settings.DEFICIENCY_THRESHOLD if threshold is None else threshold
    plus = _kernel(op, 1j, threshold)
    minus = _kernel(op, -1j, threshold)

    residual = 0.0
    for shift, basis in ((1j, plus), (-1j, minus)):
        for v in basis:
            residual = max(residual, max_norm((op.maximal - shift * op.weight) @ v))

    logger.info(f"Индексы дефекта {op.name}: ({len(plus)}, {len(minus)}), невязка {residual:.2e}")
    return DeficiencyData(
        d_plus=len(plus),
        d_minus=len(minus),
        basis_plus=plus,
        basis_minus=minus,
        residual=residual,
    )


def deficiency_oracle(op: GridOperator, sign: int) -> np.ndarray:
    """Нормированные отсчеты e^(-sign x) для сравнения с базисом D_sign"""
    v = np.exp(-sign * op.grid).astype(complex)
    return v / np.linalg.norm(v)


def align_phase(v: np.ndarray, reference: np.ndarray) -> np.ndarray:
    """Умножение v на фазу, совмещающую его с reference"""
    overlap = inner(v, reference)
    return v if overlap == 0 else v * (overlap / abs(overlap))


def von_neumann_dimensions(op: GridOperator, data: Optional[DeficiencyData] = None) -> dict:
    """
    Баланс размерностей D(A*) = D(A) + D_+ + D_- на сетке

    Returns:
        Словарь с размерностями минимальной и максимальной областей и флагом согласованности
    """
    data = data or deficiency(op)
    minimal = rank(op.domain_projector)
    maximal = op.maximal.shape[1]
    return {
        "minimal": minimal,
        "d_plus": data.d_plus,
        "d_minus": data.d_minus,
        "maximal": maximal,
        "consistent": minimal + data.d_plus + data.d_minus == maximal,
    }


def deficiency_angle(data: DeficiencyData) -> float:
    """Наименьший главный угол между D_+ и D_- (pi/2, если одно из них пусто)"""
    if not data.basis_plus or not data.basis_minus:
        return float(np.pi / 2)
    plus = np.column_stack(data.basis_plus)
    minus = np.column_stack(data.basis_minus)
    cosine = np.linalg.svd(adjoint(plus) @ minus, compute_uv=False)[0]
    return float(np.arccos(np.clip(cosine, 0.0, 1.0)))


def cayley(op: GridOperator, x: np.ndarray, tol: Optional[Tolerance] = None) -> np.ndarray:
    """
    Преобразование Кэли на образе (A + i): C_A (A + i)x = (A - i)x

    Args:
        op: Оператор на сетке
        x: Вектор минимальной области

    Returns:
        Вектор (A - i)x
    """
    x = np.ravel(np.asarray(x, dtype=complex))
    if x.size != op.grid_size:
        raise OutsideDomainError(f"Длина вектора {x.size} не совпадает с размером сетки {op.grid_size}")
    if not op.in_domain(x, tol):
        raise OutsideDomainError("Вектор не обращается в нуль на границе")
    return op.matrix @ x - 1j * x


def cayley_residuals(op: GridOperator, x: np.ndarray, tol: Optional[Tolerance] = None) -> dict:
    """Невязки тождеств ||(A+i)x||^2 = ||Ax||^2 + ||x||^2 и ||C_A (A+i)x|| = ||(A+i)x||"""
    x = np.ravel(np.asarray(x, dtype=complex))
    image = cayley(op, x, tol)
    Ax = op.matrix @ x
    source = Ax + 1j * x
    scale = max(1.0, norm(source) ** 2)
    return {
        "pythagoras": abs(norm(source) ** 2 - norm(Ax) ** 2 - norm(x) ** 2) / scale,
        "isometry": abs(norm(image) - norm(source)) / max(1.0, norm(source)),
    }


def cayley_matrix(H: np.ndarray) -> np.ndarray:
    """C = (H - i)(H + i)^-1 для эрмитовой H"""
    H = require_square(H)
    identity = np.eye(H.shape[0])
    return np.linalg.solve(H + 1j * identity, H - 1j * identity)


def inverse_cayley(U: np.ndarray) -> np.ndarray:
    """H = i(I + U)(I - U)^-1"""
    U = require_square(U)
    identity = np.eye(U.shape[0])
    return 1j * np.linalg.solve(identity - U, identity + U)


@dataclass(frozen=True)
class ExtensionParameter:
    """Фаза e^(i theta) граничного условия f(1) = e^(i theta) f(0)"""

    theta: float

    def __post_init__(self):
        object.__setattr__(self, "theta", float(np.mod(self.theta, 2 * np.pi)))

    @property
    def phase(self) -> complex:
        return complex(np.exp(1j * self.theta))


@dataclass(frozen=True, eq=False)
class ExtensionResult:
    """
    Самосопряженное расширение и его спектр

    matrix - замыкание шаблона op на периоде с фазой e^(i theta); eigenvalues - уточненные
    по Ричардсону собственные значения разрешенных мод по возрастанию (пилообразные моды
    центрального шаблона с частотой около pi/h отброшены, их число - spurious).
    """

    theta: float
    matrix: np.ndarray
    eigenvalues: np.ndarray
    max_imaginary: float
    extension_residual: float
    spurious: int
    deficiency: DeficiencyData

    def lowest(self, count: int = 7) -> np.ndarray:
        """count собственных значений наименьшего модуля"""
        order = np.argsort(np.abs(self.eigenvalues))[:count]
        return np.sort(self.eigenvalues[order])

    def nearest(self, value: float) -> float:
        return float(self.eigenvalues[np.argmin(np.abs(self.eigenvalues - value))])


def interior_stencil(op: GridOperator) -> Dict[int, complex]:
    """
    Разностный шаблон op во внутренних узлах

    Returns:
        Словарь смещение -> коэффициент; строки width..N-1-width обязаны его повторять
    """
    N = op.grid_size
    center = N // 2
    row = op.matrix[center]
    scale = max(1.0, max_norm(row))
    offsets = [j - center for j in np.flatnonzero(np.abs(row) > settings.ABS_TOL * scale)]
    if not offsets:
        raise StencilError(f"Оператор {op.name} обращается в нуль во внутренних узлах")
    width = max(abs(j) for j in offsets)
    stencil = {j: complex(row[center + j]) for j in offsets}

    for k in range(width, N - width):
        expected = np.zeros(N, dtype=complex)
        for j, c in stencil.items():
            expected[k + j] = c
        if max_norm(op.matrix[k] - expected) > settings.ABS_TOL * scale:
            raise StencilError(f"Строка {k} оператора {op.name} отличается от внутреннего шаблона")
    return stencil


def extension_matrix(op: GridOperator, theta: float, stride: int = 1) -> np.ndarray:
    """
    Замыкание внутреннего шаблона op условием f(1) = e^(i theta) f(0)

    Узел N - 1 отождествляется с узлом 0, поэтому матрица действует на M = N - 1 узлах;
    выход за край периода умножает коэффициент на e^(+-i theta). При stride > 1 шаблон
    растягивается на stride шагов с коэффициентами, деленными на stride.
    """
    stencil = interior_stencil(op)
    M = op.grid_size - 1
    phase = complex(np.exp(1j * theta))
    A = np.zeros((M, M), dtype=complex)
    for k in range(M):
        for j, c in stencil.items():
            wraps, node = divmod(k + stride * j, M)
            A[k, node] += c / stride * phase ** wraps
    return A


def extension_residual(op: GridOperator, A: np.ndarray) -> float:
    """Расхождение расширения A и op.matrix на векторах минимальной области во внутренних строках"""
    width = max(abs(j) for j in interior_stencil(op))
    M = A.shape[0]
    P = op.domain_projector[:M, :M]
    difference = (A - op.matrix[:M, :M]) @ P
    return max_norm(difference[width:M - width + 1])


def dominant_mode(v: np.ndarray, theta: float) -> int:
    """Номер n гармоники e^(i(theta + 2 pi n)x), несущей наибольшую долю вектора"""
    M = v.size
    x = np.arange(M) / M
    spectrum = np.abs(np.fft.fft(v * np.exp(-1j * theta * x)))
    return int(np.fft.fftfreq(M, d=1.0 / M)[np.argmax(spectrum)])


def self_adjoint_extension(
    op: GridOperator,
    theta: ExtensionParameter,
    extrapolate: bool = True,
) -> ExtensionResult:
    """
    Самосопряженное расширение, индексированное точкой единичной окружности

    Args:
        op: Оператор с индексами дефекта (1, 1), например momentum_operator
        theta: Параметр расширения
        extrapolate: Уточнять спектр комбинацией (4 A(h) - A(2h)) / 3

    Returns:
        ExtensionResult с вещественным спектром
    """
    data = deficiency(op)
    if data.d_plus != data.d_minus:
        raise IndexMismatchError(f"Индексы дефекта ({data.d_plus}, {data.d_minus}) не равны")
    if data.d_plus != 1:
        raise IndexMismatchError(f"Семейство U(1) требует индексы (1, 1), получено ({data.d_plus}, {data.d_minus})")

    A = extension_matrix(op, theta.theta)
    spectral = (4 * A - extension_matrix(op, theta.theta, stride=2)) / 3 if extrapolate else A
    if not is_hermitian(spectral, Tolerance(abs_tol=1e-9, rel_tol=1e-12)):
        logger.warning(f"Матрица расширения theta={theta.theta:.4f} заметно не эрмитова")
    general = np.linalg.eigvals(spectral)
    max_imaginary = float(np.max(np.abs(general.imag)) / max(1.0, np.max(np.abs(general))))

    values, vectors = np.linalg.eigh((spectral + adjoint(spectral)) / 2)
    M = A.shape[0]
    # разрешенные моды: |n| <= M/4, остальные - артефакт центрального шаблона
    resolved = np.array([abs(dominant_mode(vectors[:, k], theta.theta)) <= M // 4 for k in range(M)])
    residual = extension_residual(op, A)

    logger.info(
        f"Расширение theta={theta.theta:.4f}: {int(resolved.sum())} разрешенных мод из {M}, "
        f"невязка на минимальной области {residual:.2e}"
    )
    return ExtensionResult(
        theta=theta.theta,
        matrix=A,
        eigenvalues=values[resolved],
        max_imaginary=max_imaginary,
        extension_residual=residual,
        spurious=int(M - resolved.sum()),
        deficiency=data,
    )


def _annihilation(n: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, n)), 1).astype(complex)


def heisenberg_PQ(n: int, normalized: bool = True) -> Tuple[np.ndarray, np.ndarray]:
    """
    Усеченные матрицы Гейзенберга

    Args:
        n: Размер усечения (n >= 2)
        normalized: True - P = (a + a*)/sqrt(2), Q = (a* - a)/(i sqrt(2)), [P, Q] = (1/i)I на внутреннем блоке;
            False - P = a + a*, Q = (1/i)(a - a*) с элементами 1, sqrt(2), sqrt(3), ...

    Returns:
        Кортеж эрмитовых (P, Q)
    """
    if n < 2:
        raise GridTooSmallError(f"Размер усечения должен быть >= 2, получено {n}")
    a = _annihilation(n)
    if normalized:
        return (a + adjoint(a)) / np.sqrt(2), (adjoint(a) - a) / (1j * np.sqrt(2))
    return a + adjoint(a), (a - adjoint(a)) / 1j


def commutator_defect(n: int) -> np.ndarray:
    """[P, Q] - (1/i)I для нормированной пары: ненулевой только угловой элемент"""
    P, Q = heisenberg_PQ(n)
    return P @ Q - Q @ P - np.eye(n) / 1j


def oscillator_check(n: int) -> np.ndarray:
    """
    Спектр P^2 + Q^2, построенного по усечению n + 1 и сжатого до n x n

    Returns:
        Собственные значения по возрастанию: 1, 3, ..., 2n - 1
    """
    P, Q = heisenberg_PQ(n + 1)
    H = (P @ P + Q @ Q)[:n, :n]
    return np.linalg.eigvalsh((H + adjoint(H)) / 2)


# Функции Эрмита

def position_grid(points: int = 1601, half_width: float = 8.0) -> np.ndarray:
    return np.linspace(-half_width, half_width, points)


def _trapezoid_weights(x: np.ndarray) -> np.ndarray:
    h = x[1] - x[0]
    weights = np.full(x.size, h)
    weights[[0, -1]] = h / 2
    return weights


def hermite_functions(n: int, x: Optional[np.ndarray] = None) -> List[np.ndarray]:
    """
    Функции Эрмита h_k = p_k(x) e^(-x^2/2), k < n

    p_k - ортонормированные многочлены Грама-Шмидта с весом e^(-x^2).
    """
    x = position_grid() if x is None else np.asarray(x, dtype=float)
    weights = _trapezoid_weights(x) * np.exp(-x ** 2)
    monomials = [x ** k for k in range(n)]
    polynomials = gram_schmidt(monomials, weights=weights)
    envelope = np.exp(-x ** 2 / 2)
    functions = []
    for p in polynomials:
        h = np.real(p) * envelope
        # знак старшего коэффициента положителен
        functions.append(h if h[-1] >= 0 else -h)
    return functions


def position_oscillator(x: Optional[np.ndarray] = None) -> np.ndarray:
    """-D^2 + x^2 на сетке с нулевыми граничными условиями"""
    x = position_grid() if x is None else np.asarray(x, dtype=float)
    h = x[1] - x[0]
    M = x.size
    laplacian = (2 * np.eye(M) - np.eye(M, k=1) - np.eye(M, k=-1)) / h ** 2
    return laplacian + np.diag(x ** 2)


def hermite_diagonalization(n: int, x: Optional[np.ndarray] = None) -> Tuple[np.ndarray, float]:
    """
    Матрица <h_j, (-D^2 + x^2) h_k> в базисе функций Эрмита

    Returns:
        Кортеж (диагональ, максимальный внедиагональный элемент); диагональ близка к 2k + 1
    """
    x = position_grid() if x is None else np.asarray(x, dtype=float)
    functions = np.column_stack(hermite_functions(n, x))
    weights = _trapezoid_weights(x)
    H = position_oscillator(x)
    matrix = functions.T @ (weights[:, None] * (H @ functions))
    off_diagonal = matrix - np.diag(np.diag(matrix))
    return np.diag(matrix), max_norm(off_diagonal)
