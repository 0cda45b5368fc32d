"""
Конструкция Гельфанда-Наймарка-Сигала
Тройка (pi, H, Omega) по состоянию на матричной *-алгебре, чистота и производная Сакаи
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from config import settings
from services.commutant import (
    CommutantReport,
    commutant,
    matrix_units,
    nontrivial_projection,
    with_adjoints,
)
from services.matrix_core import (
    Tolerance,
    adjoint,
    as_matrix,
    ket_bra,
    max_norm,
    rank,
    require_square,
    trace_pairing,
)
from utils.errors import DimMismatchError, InvalidAlgebraError, NotAStateError, NotDominatedError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class StarAlgebra:
    """Унитальная *-подалгебра M_n, заданная линейным базисом (первый элемент - I)"""

    ambient_dim: int
    basis: Tuple[np.ndarray, ...]
    _flat: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        basis = tuple(require_square(b) for b in self.basis)
        if not basis:
            raise InvalidAlgebraError("Пустой базис алгебры")
        if any(b.shape != (self.ambient_dim, self.ambient_dim) for b in basis):
            raise DimMismatchError(f"Элементы базиса должны быть {self.ambient_dim}x{self.ambient_dim}")
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "_flat", np.column_stack([b.reshape(-1) for b in basis]))

        if rank(self._flat) != len(basis):
            raise InvalidAlgebraError("Элементы базиса линейно зависимы")
        if max_norm(basis[0] - np.eye(self.ambient_dim)) > 1e3 * settings.ABS_TOL:
            raise InvalidAlgebraError("Первый элемент базиса должен быть единицей")
        if not self.is_closed():
            raise InvalidAlgebraError("Оболочка базиса не замкнута относительно умножения и сопряжения")

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coordinates(self, X: np.ndarray) -> np.ndarray:
        """Координаты X в базисе (наименьшие квадраты)"""
        coords, *_ = np.linalg.lstsq(self._flat, as_matrix(X).reshape(-1), rcond=None)
        return coords

    def element(self, coords: np.ndarray) -> np.ndarray:
        """Элемент алгебры по координатам"""
        return (self._flat @ np.asarray(coords, dtype=complex)).reshape(self.ambient_dim, self.ambient_dim)

    def in_span(self, X: np.ndarray, bound: Optional[float] = None) -> bool:
        bound = 1e3 * settings.ABS_TOL * max(1.0, max_norm(X)) if bound is None else bound
        return max_norm(self.element(self.coordinates(X)) - X) <= bound

    def is_closed(self) -> bool:
        """Замкнутость относительно произведения и сопряжения"""
        for a in self.basis:
            if not self.in_span(adjoint(a)):
                return False
            for b in self.basis:
                if not self.in_span(a @ b):
                    return False
        return True

    def left_multiplication(self, index: int) -> np.ndarray:
        """Матрица L_b оператора X -> bX в координатах базиса"""
        b = self.basis[index]
        return np.column_stack([self.coordinates(b @ c) for c in self.basis])

    @classmethod
    def from_generators(cls, generators: Sequence[np.ndarray]) -> "StarAlgebra":
        """Наименьшая унитальная *-алгебра, содержащая образующие"""
        matrices = with_adjoints([require_square(g) for g in generators])
        n = matrices[0].shape[0]
        identity = np.eye(n, dtype=complex)
        words = [identity] + matrices
        while True:
            span = np.column_stack([w.reshape(-1) for w in words + [w @ g for w in words for g in matrices]])
            # Ортонормированный базис дополнения к единице
            projected = span - np.outer(identity.reshape(-1), identity.reshape(-1).conj() @ span) / n
            u, singular, _ = np.linalg.svd(projected, full_matrices=False)
            keep = singular > settings.RANK_CUTOFF * max(singular[0], 1.0)
            new_words = [identity] + [u[:, i].reshape(n, n) for i in np.flatnonzero(keep)]
            if len(new_words) == rank(np.column_stack([w.reshape(-1) for w in words])):
                return cls(ambient_dim=n, basis=tuple(new_words))
            words = new_words


def full_matrix_algebra(n: int) -> StarAlgebra:
    """M_n с базисом {I} ∪ {e_ij, (i, j) != (0, 0)}"""
    units = matrix_units(n)
    return StarAlgebra(ambient_dim=n, basis=tuple([np.eye(n, dtype=complex)] + units[1:]))


def diagonal_algebra(n: int) -> StarAlgebra:
    """Диагональные матрицы с базисом {I, e_11, ..., e_(n-1)(n-1)}"""
    units = [np.diag(np.eye(n)[k]).astype(complex) for k in range(1, n)]
    return StarAlgebra(ambient_dim=n, basis=tuple([np.eye(n, dtype=complex)] + units))


@dataclass(frozen=True, eq=False)
class State:
    """Состояние s(A) = tr(A rho) на алгебре"""

    algebra: StarAlgebra
    density: np.ndarray

    def __post_init__(self):
        density = require_square(self.density)
        if density.shape[0] != self.algebra.ambient_dim:
            raise DimMismatchError("Размерность матрицы плотности не совпадает с алгеброй")
        object.__setattr__(self, "density", density)

    def __call__(self, X: np.ndarray) -> complex:
        return trace_pairing(X, self.density)

    def moment_matrix(self) -> np.ndarray:
        """Матрица моментов G_ij = s(b_i* b_j)"""
        basis = self.algebra.basis
        return np.array([[self(adjoint(bi) @ bj) for bj in basis] for bi in basis])

    def validate(self, tol: Optional[Tolerance] = None) -> None:
        """Проверка s(I) = 1, s(A*) = conj(s(A)) и положительности на алгебре"""
        tol = tol or Tolerance()
        if abs(self(np.eye(self.algebra.ambient_dim)) - 1) > tol.bound(1.0):
            raise NotAStateError("s(I) != 1")
        for b in self.algebra.basis:
            if abs(self(adjoint(b)) - np.conj(self(b))) > tol.bound(max_norm(b)):
                raise NotAStateError("Функционал не эрмитов: s(A*) != conj(s(A))")
        gram = self.moment_matrix()
        lowest = np.linalg.eigvalsh((gram + gram.conj().T) / 2)[0]
        if lowest < -tol.bound(1.0) * max(1.0, self.algebra.dim):
            raise NotAStateError(f"Положительность нарушена: минимальный момент {lowest:.3e}")

    @classmethod
    def vector_state(cls, algebra: StarAlgebra, xi: np.ndarray) -> "State":
        xi = np.ravel(np.asarray(xi, dtype=complex))
        xi = xi / np.linalg.norm(xi)
        return cls(algebra=algebra, density=ket_bra(xi, xi))

    @classmethod
    def tracial(cls, algebra: StarAlgebra) -> "State":
        n = algebra.ambient_dim
        return cls(algebra=algebra, density=np.eye(n, dtype=complex) / n)


@dataclass(frozen=True, eq=False)
class GnsTriple:
    """Циклическое представление (pi, C^d, Omega)"""

    rep_dim: int
    pi: Tuple[np.ndarray, ...]  # pi(b_i) по элементам базиса
    omega: np.ndarray
    gram: np.ndarray
    algebra: StarAlgebra

    def represent(self, X: np.ndarray) -> np.ndarray:
        """pi(X) для произвольного элемента алгебры"""
        coords = self.algebra.coordinates(X)
        return sum((c * p for c, p in zip(coords, self.pi)), np.zeros((self.rep_dim, self.rep_dim), dtype=complex))

    def expectation(self, X: np.ndarray) -> complex:
        """<Omega, pi(X) Omega>"""
        return complex(np.vdot(self.omega, self.represent(X) @ self.omega))

    def cyclic_rank(self) -> int:
        """Ранг матрицы со столбцами pi(b_i) Omega"""
        return rank(np.column_stack([p @ self.omega for p in self.pi]))


def gns_construct(s: State, tol: Optional[Tolerance] = None) -> GnsTriple:
    """
    GNS-тройка состояния

    Args:
        s: Состояние на матричной алгебре
        tol: Допуск проверки состояния

    Returns:
        GnsTriple; фактор по нулевому идеалу реализован проекцией на положительный спектр G
    """
    s.validate(tol)
    algebra = s.algebra
    gram = s.moment_matrix()
    gram = (gram + gram.conj().T) / 2

    values, vectors = np.linalg.eigh(gram)
    positive = values > settings.RANK_CUTOFF * values[-1]
    values = values[positive]
    vectors = vectors[:, positive]

    # W: координаты -> C^d, <Wc, Wc'> = c* G c'
    embed = np.sqrt(values)[:, None] * vectors.conj().T
    lift = vectors / np.sqrt(values)[None, :]

    pi = tuple(embed @ algebra.left_multiplication(i) @ lift for i in range(algebra.dim))
    unit = np.zeros(algebra.dim, dtype=complex)
    unit[0] = 1
    omega = embed @ unit

    logger.info(f"GNS: размерность представления {len(values)} из {algebra.dim}")
    return GnsTriple(rep_dim=len(values), pi=pi, omega=omega, gram=gram, algebra=algebra)


def is_pure(s: State, tol: Optional[Tolerance] = None) -> Tuple[bool, Optional[np.ndarray]]:
    """
    Чистота состояния: неприводимость GNS-представления

    Returns:
        Кортеж (чистое ли, нескалярный проектор коммутанта или None)
    """
    triple = gns_construct(s, tol)
    report = commutant(with_adjoints(list(triple.pi)))
    if report.dimension == 1:
        return True, None
    return False, nontrivial_projection(report)


@dataclass(frozen=True, eq=False)
class RadonNikodymDerivative:
    """Оператор A в коммутанте с t(b) = <Omega, pi(b) A Omega>"""

    operator: np.ndarray
    residual: float
    commutant_dimension: int


def radon_nikodym(
    s: State,
    t_density: np.ndarray,
    tol: Optional[Tolerance] = None,
) -> RadonNikodymDerivative:
    """
    Производная Радона-Никодима-Сакаи положительного функционала t <= s

    Args:
        s: Состояние
        t_density: Матрица, задающая t(X) = tr(X t_density)
        tol: Допуск

    Returns:
        RadonNikodymDerivative с оператором 0 <= A <= I
    """
    tol = tol or Tolerance()
    t_density = require_square(t_density)
    basis = s.algebra.basis

    gram_s = s.moment_matrix()
    gram_t = np.array([[trace_pairing(adjoint(bi) @ bj, t_density) for bj in basis] for bi in basis])
    bound = tol.bound(1.0) * max(1.0, len(basis))
    if np.linalg.eigvalsh((gram_t + gram_t.conj().T) / 2)[0] < -bound:
        raise NotDominatedError("Функционал t не положителен")
    difference = gram_s - gram_t
    if np.linalg.eigvalsh((difference + difference.conj().T) / 2)[0] < -bound:
        raise NotDominatedError("Неравенство t(A*A) <= s(A*A) нарушено")

    triple = gns_construct(s, tol)
    report: CommutantReport = commutant(with_adjoints(list(triple.pi)))

    # Линейная система <Omega, pi(b_i) C_k Omega> x_k = t(b_i)
    system = np.array(
        [[np.vdot(triple.omega, p @ C @ triple.omega) for C in report.basis] for p in triple.pi]
    )
    rhs = np.array([trace_pairing(b, t_density) for b in basis])
    coefficients, *_ = np.linalg.lstsq(system, rhs, rcond=None)
    operator = sum(
        (x * C for x, C in zip(coefficients, report.basis)),
        np.zeros((triple.rep_dim, triple.rep_dim), dtype=complex),
    )
    residual = float(np.max(np.abs(system @ coefficients - rhs)))

    logger.info(f"Сакаи: размерность коммутанта {report.dimension}, невязка {residual:.2e}")
    return RadonNikodymDerivative(operator=operator, residual=residual, commutant_dimension=report.dimension)


def algebra_basis_products(algebra: StarAlgebra) -> List[Tuple[int, int, np.ndarray]]:
    """Координаты произведений b_i b_j для проверки свойства представления"""
    return [
        (i, j, algebra.coordinates(bi @ bj))
        for i, bi in enumerate(algebra.basis)
        for j, bj in enumerate(algebra.basis)
    ]
