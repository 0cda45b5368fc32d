"""
Вейвлеты Хаара на [0, 1]
Точная (в Q(sqrt 2)) матрица оператора умножения на t и ее структура "диагональ плюс малое"
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy

from utils.errors import BadLevelError, DimMismatchError

logger = logging.getLogger(__name__)

SQRT2 = sympy.sqrt(2)


@dataclass(frozen=True, eq=False)
class HaarFunction:
    """
    Ступенчатая функция на 2^(J+1) равных ячейках

    level = -1 для phi_0, иначе psi_(k,l) = 2^(k/2)(chi_левая половина - chi_правая половина).
    """

    level: int
    translation: int
    signs: np.ndarray  # значения -1, 0, 1 на ячейках

    @property
    def name(self) -> str:
        return "phi0" if self.level < 0 else f"psi({self.level},{self.translation})"

    @property
    def amplitude_exponent(self) -> int:
        """Амплитуда равна sqrt(2)^amplitude_exponent"""
        return max(self.level, 0)

    def support_center(self) -> Fraction:
        if self.level < 0:
            return Fraction(1, 2)
        return Fraction(2 * self.translation + 1, 2 ** (self.level + 1))

    def __call__(self, x) -> np.ndarray:
        """Значения в точках x из [0, 1)"""
        x = np.asarray(x, dtype=float)
        cells = self.signs.size
        index = np.clip(np.floor(x * cells).astype(int), 0, cells - 1)
        inside = (x >= 0) & (x < 1)
        return np.where(inside, self.signs[index] * np.sqrt(2.0) ** self.amplitude_exponent, 0.0)


@dataclass(frozen=True, eq=False)
class HaarBasis:
    """phi_0, затем psi_(k,l) в лексикографическом порядке (k, l), 0 <= k <= J"""

    max_level: int
    functions: Tuple[HaarFunction, ...]

    @property
    def cells(self) -> int:
        return 2 ** (self.max_level + 1)

    @property
    def size(self) -> int:
        return len(self.functions)

    def sign_matrix(self) -> np.ndarray:
        return np.stack([u.signs for u in self.functions]).astype(np.int64)

    def exponents(self) -> np.ndarray:
        return np.array([u.amplitude_exponent for u in self.functions])

    def levels(self) -> np.ndarray:
        return np.array([u.level for u in self.functions])

    def names(self) -> List[str]:
        return [u.name for u in self.functions]


def haar_basis(J: int) -> HaarBasis:
    """
    Ортонормированная система Хаара уровня J

    Args:
        J: Максимальный уровень (J >= 0)

    Returns:
        HaarBasis из 2^(J+1) функций
    """
    if J < 0:
        raise BadLevelError(f"Уровень базиса Хаара должен быть >= 0, получено {J}")
    cells = 2 ** (J + 1)
    functions = [HaarFunction(level=-1, translation=0, signs=np.ones(cells, dtype=int))]
    for k in range(J + 1):
        width = cells // 2 ** k
        for l in range(2 ** k):
            signs = np.zeros(cells, dtype=int)
            start = l * width
            signs[start:start + width // 2] = 1
            signs[start + width // 2:start + width] = -1
            functions.append(HaarFunction(level=k, translation=l, signs=signs))
    return HaarBasis(max_level=J, functions=tuple(functions))


def _rational(value) -> sympy.Expr:
    if isinstance(value, Fraction):
        return sympy.Rational(value.numerator, value.denominator)
    return sympy.nsimplify(value)


def _exact(numerator: int, denominator: int, exponent: int) -> sympy.Expr:
    return sympy.Rational(int(numerator), int(denominator)) * SQRT2 ** int(exponent)


def _exact_matrix(basis: HaarBasis, integers: np.ndarray, denominator: int) -> sympy.Matrix:
    exponents = basis.exponents()
    n = basis.size
    return sympy.Matrix(n, n, lambda a, b: _exact(integers[a, b], denominator, exponents[a] + exponents[b]))


def gram_matrix(basis: HaarBasis) -> sympy.Matrix:
    """Точная матрица Грама <u_a, u_b>"""
    S = basis.sign_matrix()
    return _exact_matrix(basis, S @ S.T, basis.cells)


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """M_ab = <u_a, t u_b> в Q(sqrt 2)"""

    basis: HaarBasis
    entries: sympy.Matrix

    def to_numpy(self) -> np.ndarray:
        return np.array(self.entries.evalf().tolist(), dtype=float)

    def entry(self, a: int, b: int) -> sympy.Expr:
        return self.entries[a, b]

    def is_symmetric(self) -> bool:
        return self.entries == self.entries.T

    def diagonal(self) -> List[sympy.Expr]:
        return [self.entries[i, i] for i in range(self.basis.size)]


def mt_matrix(basis: HaarBasis) -> OperatorMatrix:
    """
    Матрица оператора умножения на t в базисе Хаара

    Интеграл t по ячейке c ширины w равен w^2 (2c + 1)/2, поэтому все элементы
    лежат в Q(sqrt 2) и рациональны при одинаковой четности уровней.
    """
    S = basis.sign_matrix()
    cells = basis.cells
    weights = 2 * np.arange(cells, dtype=np.int64) + 1
    integers = S @ (weights[:, None] * S.T)
    entries = _exact_matrix(basis, integers, 2 * cells * cells)
    logger.debug(f"Матрица M_t: {basis.size}x{basis.size}, уровень {basis.max_level}")
    return OperatorMatrix(basis=basis, entries=entries)


def mt_spectrum(basis: HaarBasis) -> List[Fraction]:
    """Спектр сжатия M_t на оболочку базиса: середины ячеек (2c + 1)/2^(J+2)"""
    cells = basis.cells
    return [Fraction(2 * c + 1, 2 * cells) for c in range(cells)]


def haar_coefficients(basis: HaarBasis, values: Sequence) -> List[sympy.Expr]:
    """
    Точные коэффициенты <u_a, f> ступенчатой функции f

    Args:
        basis: Базис Хаара
        values: Значения f на 2^(J+1) ячейках (целые, Fraction или рациональные sympy)

    Returns:
        Список коэффициентов в порядке базиса
    """
    values = [_rational(v) for v in values]
    if len(values) != basis.cells:
        raise DimMismatchError(f"Ожидалось {basis.cells} значений, получено {len(values)}")
    coefficients = []
    for u in basis.functions:
        total = sum((int(s) * v for s, v in zip(u.signs, values) if s), sympy.Integer(0))
        coefficients.append(sympy.nsimplify(total / basis.cells * SQRT2 ** u.amplitude_exponent))
    return coefficients


def parseval_defect(basis: HaarBasis, values: Sequence) -> sympy.Expr:
    """sum |<u_a, f>|^2 - ||f||^2 (точно ноль для функций уровня J + 1)"""
    coefficients = haar_coefficients(basis, values)
    norm_squared = sum((_rational(v) ** 2 for v in values), sympy.Integer(0)) / basis.cells
    return sympy.simplify(sum((c ** 2 for c in coefficients), sympy.Integer(0)) - norm_squared)


def _level_pairs(basis: HaarBasis, matrix: np.ndarray) -> Dict[Tuple[int, int], float]:
    levels = basis.levels()
    pairs: Dict[Tuple[int, int], float] = {}
    for a in range(basis.size):
        for b in range(basis.size):
            if a == b:
                continue
            key = (int(min(levels[a], levels[b])), int(max(levels[a], levels[b])))
            pairs[key] = max(pairs.get(key, 0.0), abs(float(matrix[a, b])))
    return pairs


def diagonal_plus_compact_report(M: OperatorMatrix) -> dict:
    """
    Разложение M = D + K и убывание внедиагональных элементов по парам уровней

    Returns:
        Словарь: диагональ, максимумы по парам уровней (phi_0 имеет уровень -1),
        показатель степени, подобранный по max(k, k') для пар разных уровней
    """
    matrix = M.to_numpy()
    diagonal = np.diag(matrix)
    off_diagonal = matrix - np.diag(diagonal)
    pairs = _level_pairs(M.basis, matrix)

    by_level: Dict[int, float] = {}
    for (low, high), value in pairs.items():
        if low != high and value > 0:
            by_level[high] = max(by_level.get(high, 0.0), value)
    exponent: Optional[float] = None
    if len(by_level) >= 2:
        levels = np.array(sorted(by_level), dtype=float)
        slope, _ = np.polyfit(levels, np.log2([by_level[int(k)] for k in levels]), 1)
        exponent = float(slope)

    report = {
        "diagonal": diagonal.tolist(),
        "diagonal_range": [float(diagonal.min()), float(diagonal.max())],
        "max_off_diagonal": float(np.max(np.abs(off_diagonal))) if M.basis.size > 1 else 0.0,
        "level_pairs": [
            {"levels": [low, high], "max_abs": value} for (low, high), value in sorted(pairs.items())
        ],
        "fitted_exponent": exponent,
    }
    logger.info(f"M_t: максимальный внедиагональный элемент {report['max_off_diagonal']:.4f}, показатель {exponent}")
    return report


def spectrum_moments(M: OperatorMatrix) -> Tuple[float, float]:
    """Первый и второй моменты собственных значений сжатой M_t"""
    eigenvalues = np.linalg.eigvalsh(M.to_numpy())
    return float(np.mean(eigenvalues)), float(np.mean(eigenvalues ** 2))
