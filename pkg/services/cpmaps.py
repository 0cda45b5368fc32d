"""
Вполне положительные отображения
Формы Крауса, Чои и супероператора, проверки CP и унитальности, минимальная дилатация Стайнспринга
"""

import logging
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.linalg import fractional_matrix_power

from config import MapForm, settings
from services.commutant import matrix_units
from services.gns import GnsTriple
from services.matrix_core import (
    Tolerance,
    adjoint,
    as_matrix,
    is_unitary,
    max_norm,
    rank,
    require_square,
    solve_intertwiner,
)
from utils.errors import DimMismatchError, NotCPError, NotMinimalError, NotSameMapError, NotUnitalError

logger = logging.getLogger(__name__)

MapData = Union[Tuple[np.ndarray, ...], np.ndarray]


def _fix_phase(V: np.ndarray) -> np.ndarray:
    """Элемент наибольшего модуля делается вещественным положительным"""
    flat = V.reshape(-1)
    pivot = flat[int(np.argmax(np.abs(flat)))]
    if pivot == 0:
        return V
    return V * (abs(pivot) / pivot)


def _choi_to_super(choi: np.ndarray, in_dim: int, out_dim: int) -> np.ndarray:
    # C[(a,i),(b,j)] = S[(a,b),(i,j)]
    return choi.reshape(out_dim, in_dim, out_dim, in_dim).transpose(0, 2, 1, 3).reshape(out_dim ** 2, in_dim ** 2)


def _super_to_choi(superop: np.ndarray, in_dim: int, out_dim: int) -> np.ndarray:
    return superop.reshape(out_dim, out_dim, in_dim, in_dim).transpose(0, 2, 1, 3).reshape(out_dim * in_dim, out_dim * in_dim)


@dataclass(frozen=True, eq=False)
class CPMap:
    """Линейное отображение M_n -> M_m в одной из трех форм"""

    in_dim: int
    out_dim: int
    form: MapForm
    data: MapData

    @classmethod
    def from_kraus(cls, operators: Sequence[np.ndarray]) -> "CPMap":
        """phi(A) = sum V_i A V_i*, V_i размера m x n"""
        kraus = tuple(as_matrix(V) for V in operators)
        if not kraus:
            raise DimMismatchError("Пустой набор операторов Крауса")
        shapes = {V.shape for V in kraus}
        if len(shapes) != 1:
            raise DimMismatchError(f"Операторы Крауса разных размеров: {sorted(shapes)}")
        out_dim, in_dim = kraus[0].shape
        return cls(in_dim=in_dim, out_dim=out_dim, form=MapForm.KRAUS, data=kraus)

    @classmethod
    def from_choi(cls, choi: np.ndarray, in_dim: int, out_dim: Optional[int] = None) -> "CPMap":
        """Матрица Чои C = sum phi(e_ij) ⊗ e_ij размера mn x mn"""
        choi = require_square(choi)
        if out_dim is None:
            out_dim = choi.shape[0] // in_dim
        if choi.shape[0] != in_dim * out_dim:
            raise DimMismatchError(f"Матрица Чои {choi.shape} не согласована с n={in_dim}, m={out_dim}")
        return cls(in_dim=in_dim, out_dim=out_dim, form=MapForm.CHOI, data=choi)

    @classmethod
    def from_superoperator(cls, superop: np.ndarray, in_dim: int, out_dim: int) -> "CPMap":
        """Матрица S размера m^2 x n^2: vec(phi(A)) = S vec(A) (построчная векторизация)"""
        superop = as_matrix(superop)
        if superop.shape != (out_dim ** 2, in_dim ** 2):
            raise DimMismatchError(f"Супероператор {superop.shape} не согласован с n={in_dim}, m={out_dim}")
        return cls(in_dim=in_dim, out_dim=out_dim, form=MapForm.SUPER, data=superop)

    @classmethod
    def from_function(cls, function: Callable[[np.ndarray], np.ndarray], in_dim: int) -> "CPMap":
        """Отображение, заданное функцией на матрицах (через значения на e_ij)"""
        units = matrix_units(in_dim)
        images = [as_matrix(function(unit)) for unit in units]
        out_dim = images[0].shape[0]
        choi = sum(
            (np.kron(image, unit) for image, unit in zip(images, units)),
            np.zeros((out_dim * in_dim, out_dim * in_dim), dtype=complex),
        )
        return cls.from_choi(choi, in_dim, out_dim)

    def __call__(self, A: np.ndarray) -> np.ndarray:
        A = require_square(A)
        if A.shape[0] != self.in_dim:
            raise DimMismatchError(f"Ожидалась матрица {self.in_dim}x{self.in_dim}")
        if self.form == MapForm.KRAUS:
            return sum((V @ A @ adjoint(V) for V in self.data), np.zeros((self.out_dim, self.out_dim), dtype=complex))
        return (self.superoperator() @ A.reshape(-1)).reshape(self.out_dim, self.out_dim)

    def choi(self) -> np.ndarray:
        if self.form == MapForm.CHOI:
            return self.data
        if self.form == MapForm.KRAUS:
            vectors = [V.reshape(-1) for V in self.data]
            return sum((np.outer(v, v.conj()) for v in vectors), np.zeros((len(vectors[0]),) * 2, dtype=complex))
        return _super_to_choi(self.data, self.in_dim, self.out_dim)

    def superoperator(self) -> np.ndarray:
        if self.form == MapForm.SUPER:
            return self.data
        if self.form == MapForm.KRAUS:
            return sum(np.kron(V, V.conj()) for V in self.data)
        return _choi_to_super(self.data, self.in_dim, self.out_dim)

    def kraus(self, tol: Optional[Tolerance] = None) -> List[np.ndarray]:
        if self.form == MapForm.KRAUS:
            return list(self.data)
        return kraus_from_choi(self.choi(), self.in_dim, self.out_dim, tol)


def choi_of(phi: CPMap) -> np.ndarray:
    """
    Матрица Чои C = sum_ij phi(e_ij) ⊗ e_ij

    Args:
        phi: Отображение в любой форме

    Returns:
        Матрица размера mn x mn
    """
    return phi.choi()


def _choi_spectrum(choi: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    hermitian = (choi + adjoint(choi)) / 2
    return np.linalg.eigh(hermitian)


def is_completely_positive(phi: CPMap, tol: Optional[Tolerance] = None) -> bool:
    """Критерий Чои: матрица Чои эрмитова и неотрицательно определена"""
    tol = tol or Tolerance()
    choi = phi.choi()
    scale = max(1.0, max_norm(choi))
    if not tol.close(adjoint(choi), choi):
        return False
    values, _ = _choi_spectrum(choi)
    return bool(values[0] >= -tol.bound(scale))


def kraus_from_choi(
    choi: np.ndarray,
    in_dim: int,
    out_dim: Optional[int] = None,
    tol: Optional[Tolerance] = None,
) -> List[np.ndarray]:
    """
    Канонический набор операторов Крауса по матрице Чои

    Args:
        choi: Матрица Чои
        in_dim: Размерность n области определения
        out_dim: Размерность m образа
        tol: Допуск проверки положительности

    Returns:
        Операторы sqrt(lambda_k) * reshape(u_k); их число равно рангу матрицы Чои
    """
    tol = tol or Tolerance()
    choi = require_square(choi)
    out_dim = choi.shape[0] // in_dim if out_dim is None else out_dim
    scale = max(1.0, max_norm(choi))
    if not tol.close(adjoint(choi), choi):
        raise NotCPError("Матрица Чои не эрмитова")
    values, vectors = _choi_spectrum(choi)
    if values[0] < -tol.bound(scale):
        raise NotCPError(f"Матрица Чои имеет отрицательное собственное значение {values[0]:.3e}")

    top = values[-1]
    if top <= 0:
        return [np.zeros((out_dim, in_dim), dtype=complex)]
    operators = []
    for index in range(len(values) - 1, -1, -1):
        if values[index] <= settings.RANK_CUTOFF * top:
            break
        operator = np.sqrt(values[index]) * vectors[:, index].reshape(out_dim, in_dim)
        operators.append(_fix_phase(operator))
    logger.debug(f"Краус: {len(operators)} операторов из матрицы Чои {choi.shape[0]}x{choi.shape[0]}")
    return operators


def is_unital(phi: CPMap, tol: Optional[Tolerance] = None) -> bool:
    """phi(I_n) = I_m"""
    tol = tol or Tolerance()
    return tol.close(phi(np.eye(phi.in_dim)), np.eye(phi.out_dim))


def is_trace_preserving(phi: CPMap, tol: Optional[Tolerance] = None) -> bool:
    """tr phi(A) = tr A; по матрице Чои: частичный след по выходу равен I_n"""
    tol = tol or Tolerance()
    choi = phi.choi().reshape(phi.out_dim, phi.in_dim, phi.out_dim, phi.in_dim)
    partial = np.einsum("aiaj->ij", choi)
    return tol.close(partial, np.eye(phi.in_dim))


def amplified_block(phi: CPMap, elements: Sequence[np.ndarray]) -> np.ndarray:
    """Блочная матрица [phi(A_i* A_j)]_ij; неотрицательна для CP-отображения"""
    matrices = [require_square(A) for A in elements]
    return np.block([[phi(adjoint(Ai) @ Aj) for Aj in matrices] for Ai in matrices])


@dataclass(frozen=True, eq=False)
class PositivityWitness:
    """Наборы {A_i}, {v_i} с sum <v_i, phi(A_i* A_j) v_j> < 0"""

    elements: Tuple[np.ndarray, ...]
    vectors: Tuple[np.ndarray, ...]
    value: float


def positivity_witness(phi: CPMap, tol: Optional[Tolerance] = None) -> Optional[PositivityWitness]:
    """
    Свидетель нарушения полной положительности

    A_i = e_0i, так что A_i* A_j = e_ij; v_i берутся из собственного вектора
    матрицы Чои с наименьшим собственным значением.

    Returns:
        PositivityWitness или None, если отображение вполне положительно
    """
    if is_completely_positive(phi, tol):
        return None
    values, vectors = _choi_spectrum(phi.choi())
    lowest = vectors[:, 0].reshape(phi.out_dim, phi.in_dim)
    n = phi.in_dim
    elements = []
    for i in range(n):
        unit = np.zeros((n, n), dtype=complex)
        unit[0, i] = 1
        elements.append(unit)
    witness_vectors = tuple(lowest[:, i].copy() for i in range(n))
    stacked = np.concatenate(witness_vectors)
    value = float(np.vdot(stacked, amplified_block(phi, elements) @ stacked).real)
    logger.info(f"Свидетель не-CP: значение {value:.3e} (собственное значение {values[0]:.3e})")
    return PositivityWitness(elements=tuple(elements), vectors=witness_vectors, value=value)


@dataclass(frozen=True, eq=False)
class StinespringDilation:
    """phi(A) = V* (A ⊗ I_r) V с изометрией V: C^m -> C^n ⊗ C^r"""

    rank: int
    V: np.ndarray
    in_dim: int
    out_dim: int

    @property
    def pi_spec(self) -> str:
        return "A ↦ A⊗I_r"

    def represent(self, A: np.ndarray) -> np.ndarray:
        return np.kron(require_square(A), np.eye(self.rank))

    def compress(self, A: np.ndarray) -> np.ndarray:
        return adjoint(self.V) @ self.represent(A) @ self.V

    def isometry_defect(self) -> float:
        return max_norm(adjoint(self.V) @ self.V - np.eye(self.out_dim))

    def spanning_vectors(self) -> np.ndarray:
        """Столбцы pi(e_ij) V, порождающие K_phi при минимальности"""
        return np.hstack([self.represent(unit) @ self.V for unit in matrix_units(self.in_dim)])

    def is_minimal(self) -> bool:
        return rank(self.spanning_vectors()) == self.in_dim * self.rank

    def residual(self, phi: CPMap) -> float:
        """Максимальная невязка phi(e_ij) - V* pi(e_ij) V"""
        return max(max_norm(self.compress(unit) - phi(unit)) for unit in matrix_units(self.in_dim))


def stinespring(phi: CPMap, tol: Optional[Tolerance] = None) -> StinespringDilation:
    """
    Минимальная дилатация Стайнспринга унитального CP-отображения

    Args:
        phi: Вполне положительное унитальное отображение
        tol: Допуск

    Returns:
        StinespringDilation ранга, равного рангу матрицы Чои
    """
    tol = tol or Tolerance()
    if not is_completely_positive(phi, tol):
        raise NotCPError("Дилатация существует только для вполне положительных отображений")
    if not is_unital(phi, tol):
        raise NotUnitalError("phi(I) != I: изометрическая дилатация невозможна")

    kraus = kraus_from_choi(phi.choi(), phi.in_dim, phi.out_dim, tol)
    # W_i = V_i*, V = sum W_i ⊗ e_i
    blocks = [adjoint(V) for V in kraus]
    r = len(blocks)
    isometry = np.stack(blocks, axis=1).reshape(phi.in_dim * r, phi.out_dim)

    dilation = StinespringDilation(rank=r, V=isometry, in_dim=phi.in_dim, out_dim=phi.out_dim)
    logger.info(f"Стайнспринг: ранг {r}, дефект изометрии {dilation.isometry_defect():.2e}")
    return dilation


def dilation_equivalence(
    d1: StinespringDilation,
    d2: StinespringDilation,
    tol: Optional[Tolerance] = None,
) -> np.ndarray:
    """
    Унитарный W с W pi_1(A) V_1 = pi_2(A) V_2

    Args:
        d1: Минимальная дилатация
        d2: Минимальная дилатация того же отображения

    Returns:
        Унитарная матрица W
    """
    tol = tol or Tolerance()
    if (d1.in_dim, d1.out_dim) != (d2.in_dim, d2.out_dim):
        raise NotSameMapError("Дилатации отображений разных размерностей")
    units = matrix_units(d1.in_dim)
    discrepancy = max(max_norm(d1.compress(unit) - d2.compress(unit)) for unit in units)
    if discrepancy > tol.scaled(10).bound(1.0):
        raise NotSameMapError(f"Дилатации реализуют разные отображения: расхождение {discrepancy:.3e}")
    for dilation in (d1, d2):
        if not dilation.is_minimal():
            raise NotMinimalError("Векторы pi(A)Vh не порождают пространство дилатации")

    W, residual = solve_intertwiner(d1.spanning_vectors(), d2.spanning_vectors())
    if residual > tol.scaled(10).bound(1.0) or not is_unitary(W, tol.scaled(100)):
        raise NotSameMapError(f"Унитарный сплетающий оператор не найден: невязка {residual:.3e}")
    logger.debug(f"Эквивалентность дилатаций: невязка {residual:.2e}")
    return W


# Стандартные отображения

def identity_map(n: int) -> CPMap:
    return CPMap.from_kraus([np.eye(n, dtype=complex)])


def transpose_map(n: int) -> CPMap:
    """A -> A^T: положительно, но не вполне положительно"""
    return CPMap.from_function(lambda A: A.T, n)


def dephasing_map(n: int) -> CPMap:
    """A -> diag(A)"""
    return CPMap.from_function(lambda A: np.diag(np.diag(A)), n)


def depolarizing_map(n: int) -> CPMap:
    """A -> tr(A) I / n"""
    return CPMap.from_function(lambda A: np.trace(A) * np.eye(n) / n, n)


def random_unital_cp_map(n: int, r: int, rng: np.random.Generator, out_dim: Optional[int] = None) -> CPMap:
    """
    Случайное унитальное CP-отображение с r операторами Крауса

    Набор K_i нормируется: V_i = S^(-1/2) K_i, S = sum K_i K_i*, так что sum V_i V_i* = I.
    """
    m = n if out_dim is None else out_dim
    raw = [rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n)) for _ in range(r)]
    total = sum(K @ adjoint(K) for K in raw)
    root = fractional_matrix_power(total, -0.5)
    return CPMap.from_kraus([root @ K for K in raw])


def state_as_cp_map(density: np.ndarray) -> CPMap:
    """Состояние s(A) = tr(A rho) как CP-отображение M_n -> B(C)"""
    density = require_square(density)
    values, vectors = np.linalg.eigh((density + adjoint(density)) / 2)
    top = max(values[-1], 0.0)
    operators = [
        np.sqrt(values[k]) * vectors[:, k].conj()[None, :]
        for k in range(len(values))
        if values[k] > settings.RANK_CUTOFF * top
    ]
    return CPMap.from_kraus(operators)


def gns_intertwiner(triple: GnsTriple, dilation: StinespringDilation) -> Tuple[np.ndarray, float]:
    """
    Сплетающий оператор между GNS-представлением и дилатацией того же состояния

    Returns:
        Кортеж (W, невязка), W pi(b) Omega = (b ⊗ I_r) V
    """
    basis = triple.algebra.basis
    source = np.column_stack([p @ triple.omega for p in triple.pi])
    target = np.column_stack([(dilation.represent(b) @ dilation.V)[:, 0] for b in basis])
    return solve_intertwiner(source, target)
