"""
Вспомогательные функции командной строки
Чтение JSON, приведение результатов к JSON и журналирование ошибок
"""

import hashlib
import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Sequence, Type, TypeVar

import numpy as np
import sympy
from pydantic import BaseModel, ValidationError

from utils.errors import InputValidationError
from utils.schemas import MatrixListPayload, MatrixPayload, Report
from utils.validators import DataValidators, ValidationResult

logger = logging.getLogger(__name__)

ModelT = TypeVar("ModelT", bound=BaseModel)


class PayloadLoader:
    """Класс для чтения входных JSON-файлов"""

    @staticmethod
    def load_json_file(path: str) -> Any:
        """
        Чтение JSON-файла

        Args:
            path: Путь к файлу

        Returns:
            Разобранный JSON
        """
        file_path = Path(path)
        if not file_path.is_file():
            raise InputValidationError(f"Файл {path} не найден")
        try:
            with file_path.open("r", encoding="utf-8") as f:
                return json.load(f)
        except json.JSONDecodeError as e:
            raise InputValidationError(f"Файл {path} не является корректным JSON: {e}") from e

    @staticmethod
    def parse(data: Any, model: Type[ModelT], source: str = "input") -> ModelT:
        """
        Разбор JSON в pydantic-модель

        Args:
            data: Разобранный JSON
            model: Класс модели
            source: Имя источника для диагностики

        Returns:
            Экземпляр модели
        """
        try:
            return model.model_validate(data)
        except ValidationError as e:
            first = e.errors()[0]
            location = ".".join(str(part) for part in first["loc"]) or "<root>"
            raise InputValidationError(f"{source}: поле {location}: {first['msg']}") from e

    @staticmethod
    def load(path: str, model: Type[ModelT]) -> ModelT:
        return PayloadLoader.parse(PayloadLoader.load_json_file(path), model, source=path)

    @staticmethod
    def load_matrix(path: str) -> np.ndarray:
        """Квадратная конечная матрица из файла"""
        matrix = PayloadLoader.load(path, MatrixPayload).to_array()
        require(DataValidators.validate_all({
            path: DataValidators.validate_finite(matrix),
            "matrix": DataValidators.validate_square(matrix),
        }))
        return matrix

    @staticmethod
    def load_matrices(path: str) -> List[np.ndarray]:
        """Список квадратных матриц одной размерности"""
        matrices = PayloadLoader.load(path, MatrixListPayload).matrices()
        if not matrices:
            raise InputValidationError(f"{path}: пустой список матриц")
        for matrix in matrices:
            require(DataValidators.validate_finite(matrix))
            require(DataValidators.validate_square(matrix))
        return matrices


class ReportFormatter:
    """Класс для приведения результатов к каноническому JSON"""

    @staticmethod
    def jsonable(value: Any) -> Any:
        """
        Приведение numpy, sympy и Fraction к типам JSON

        Комплексное число с нулевой мнимой частью становится вещественным,
        иначе парой [re, im]; точные числа записываются строкой.
        """
        if isinstance(value, dict):
            return {str(k): ReportFormatter.jsonable(v) for k, v in value.items()}
        if isinstance(value, (list, tuple)):
            return [ReportFormatter.jsonable(v) for v in value]
        if isinstance(value, np.ndarray):
            return ReportFormatter.jsonable(value.tolist())
        if isinstance(value, (bool, np.bool_)):
            return bool(value)
        if isinstance(value, (int, np.integer)):
            return int(value)
        if isinstance(value, (Fraction, sympy.Basic)):
            return str(value)
        if isinstance(value, (complex, np.complexfloating)):
            if value.imag == 0:
                return float(value.real)
            return [float(value.real), float(value.imag)]
        if isinstance(value, (float, np.floating)):
            return float(value)
        if hasattr(value, "value"):
            return value.value
        return value

    @staticmethod
    def canonical_json(value: Any) -> str:
        return json.dumps(ReportFormatter.jsonable(value), sort_keys=True, ensure_ascii=False)

    @staticmethod
    def inputs_digest(inputs: Dict[str, Any], argv: Sequence[str]) -> str:
        """sha256 канонического JSON входных данных и аргументов"""
        blob = ReportFormatter.canonical_json({"argv": list(argv), "inputs": inputs})
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()

    @staticmethod
    def format_report(payload: Dict[str, Any]) -> str:
        return json.dumps(ReportFormatter.jsonable(payload), sort_keys=True, ensure_ascii=False, indent=2)


def new_report(data: Dict[str, Any], inputs: Dict[str, Any]) -> Report:
    """
    Пустой отчет команды с отпечатком входных данных

    Args:
        data: Общие данные запуска (command, argv)
        inputs: Разобранные входные данные

    Returns:
        Report
    """
    digest = ReportFormatter.inputs_digest(inputs, data.get("argv", []))
    data["inputs_digest"] = digest
    return Report(command=data["command"], inputs_digest=digest)


def require(result: ValidationResult) -> None:
    """Исключение InputValidationError при неуспешной валидации"""
    if not result.is_valid:
        raise InputValidationError(result.error_message)


def log_error(error: Exception, context: str = None) -> None:
    """
    Логирование ошибки

    Args:
        error: Объект исключения
        context: Контекст ошибки
    """
    error_msg = "Ошибка"
    if context:
        error_msg += f" в {context}"
    error_msg += f": {str(error)}"

    logger.error(error_msg, exc_info=True)
