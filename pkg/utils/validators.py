"""
Валидаторы входных данных
Проверка параметров командной строки и разобранных JSON-объектов
"""

from typing import Dict, Sequence

import numpy as np

from config import settings


class ValidationResult:
    """Результат валидации"""

    def __init__(self, is_valid: bool, error_message: str = None):
        self.is_valid = is_valid
        self.error_message = error_message


class DataValidators:
    """Класс для валидации различных типов входных данных"""

    @staticmethod
    def validate_square(matrix: np.ndarray) -> ValidationResult:
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            return ValidationResult(False, f"Матрица должна быть квадратной, получено {matrix.shape}")
        return ValidationResult(True)

    @staticmethod
    def validate_finite(matrix: np.ndarray) -> ValidationResult:
        if not np.all(np.isfinite(matrix)):
            return ValidationResult(False, "Матрица содержит NaN или бесконечные элементы")
        return ValidationResult(True)

    @staticmethod
    def validate_grid_size(N: int) -> ValidationResult:
        if N < settings.MIN_GRID_SIZE:
            return ValidationResult(False, f"Размер сетки должен быть не меньше {settings.MIN_GRID_SIZE}")
        if N > 1 << 14:
            return ValidationResult(False, "Размер сетки должен быть не больше 16384")
        return ValidationResult(True)

    @staticmethod
    def validate_level(J: int) -> ValidationResult:
        if J < 0:
            return ValidationResult(False, "Уровень базиса Хаара должен быть неотрицательным")
        if J > 10:
            return ValidationResult(False, "Точная арифметика поддерживается до уровня 10")
        return ValidationResult(True)

    @staticmethod
    def validate_mode_count(modes: int, grid: int) -> ValidationResult:
        if not 1 <= modes <= grid:
            return ValidationResult(False, f"Число мод должно лежать в [1, {grid}]")
        return ValidationResult(True)

    @staticmethod
    def validate_tolerance(tol: float) -> ValidationResult:
        if not np.isfinite(tol) or tol <= 0:
            return ValidationResult(False, "Допуск должен быть положительным числом")
        return ValidationResult(True)

    @staticmethod
    def validate_subset(subset: Sequence[int], order: int) -> ValidationResult:
        if not subset:
            return ValidationResult(False, "Подгруппа не может быть пустой")
        if len(set(subset)) != len(subset):
            return ValidationResult(False, "Элементы подгруппы повторяются")
        if any(not 0 <= g < order for g in subset):
            return ValidationResult(False, f"Индексы элементов должны лежать в [0, {order})")
        return ValidationResult(True)

    @staticmethod
    def validate_character(values: Sequence[complex], tol: float = None) -> ValidationResult:
        """Значения одномерного представления должны лежать на единичной окружности"""
        tol = settings.ABS_TOL if tol is None else tol
        if any(abs(abs(v) - 1) > tol for v in values):
            return ValidationResult(False, "Значения характера должны иметь модуль 1")
        return ValidationResult(True)

    @staticmethod
    def validate_all(results: Dict[str, ValidationResult]) -> ValidationResult:
        """
        Объединение нескольких проверок

        Args:
            results: Словарь {имя поля: результат}

        Returns:
            Первый неуспешный результат с именем поля или успешный результат
        """
        for field, result in results.items():
            if not result.is_valid:
                return ValidationResult(False, f"{field}: {result.error_message}")
        return ValidationResult(True)
