"""
Схемы JSON-форматов
Матрицы, алгебры, состояния, отображения, группы и отчет командной строки
"""

from datetime import datetime, timezone
from typing import Any, Dict, List, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, RootModel, field_validator, model_validator

from config import CheckStatus, settings

Entry = Union[float, List[float]]


class MatrixPayload(BaseModel):
    """{"rows": n, "cols": m, "data": [[re, im], ...]} по строкам; вещественный элемент можно дать числом"""

    rows: int = Field(ge=1)
    cols: int = Field(ge=1)
    data: List[Entry]

    @field_validator("data")
    @classmethod
    def check_entries(cls, value: List[Entry]) -> List[Entry]:
        for entry in value:
            if isinstance(entry, list) and len(entry) != 2:
                raise ValueError("Комплексный элемент задается парой [re, im]")
        return value

    @model_validator(mode="after")
    def check_size(self) -> "MatrixPayload":
        if len(self.data) != self.rows * self.cols:
            raise ValueError(f"Ожидалось {self.rows * self.cols} элементов, получено {len(self.data)}")
        return self

    def to_array(self) -> np.ndarray:
        values = [complex(e[0], e[1]) if isinstance(e, list) else complex(e) for e in self.data]
        return np.array(values, dtype=complex).reshape(self.rows, self.cols)

    @classmethod
    def from_array(cls, matrix: np.ndarray) -> "MatrixPayload":
        matrix = np.atleast_2d(np.asarray(matrix, dtype=complex))
        rows, cols = matrix.shape
        data = [[float(z.real), float(z.imag)] for z in matrix.reshape(-1)]
        return cls(rows=rows, cols=cols, data=data)


class MatrixListPayload(RootModel[List[MatrixPayload]]):
    """Список матриц: образующие коммутанта или представление группы по элементам"""

    def matrices(self) -> List[np.ndarray]:
        return [m.to_array() for m in self.root]


RepPayload = MatrixListPayload


class AlgebraPayload(BaseModel):
    ambient_dim: int = Field(ge=1)
    basis: List[MatrixPayload] = Field(min_length=1)

    def matrices(self) -> List[np.ndarray]:
        return [m.to_array() for m in self.basis]


class StatePayload(BaseModel):
    density: MatrixPayload


class CPMapPayload(BaseModel):
    """{"in_dim": n, "out_dim": m, "kraus": [...]} или {"choi": matrix}"""

    in_dim: Optional[int] = Field(default=None, ge=1)
    out_dim: Optional[int] = Field(default=None, ge=1)
    kraus: Optional[List[MatrixPayload]] = None
    choi: Optional[MatrixPayload] = None

    @model_validator(mode="after")
    def check_form(self) -> "CPMapPayload":
        if (self.kraus is None) == (self.choi is None):
            raise ValueError("Нужно задать ровно одно из полей kraus или choi")
        return self


class SpectralPayload(BaseModel):
    eigenvalues: List[float]
    multiplicities: List[int]
    projections: List[MatrixPayload]

    @classmethod
    def from_spectral(cls, data) -> "SpectralPayload":
        return cls(
            eigenvalues=[float(v) for v in data.eigenvalues],
            multiplicities=list(data.multiplicities),
            projections=[MatrixPayload.from_array(p) for p in data.projections],
        )


class GroupPayload(BaseModel):
    order: int = Field(ge=1)
    mult: List[List[int]]
    labels: Optional[List[str]] = None

    @model_validator(mode="after")
    def check_table(self) -> "GroupPayload":
        if len(self.mult) != self.order or any(len(row) != self.order for row in self.mult):
            raise ValueError(f"Таблица умножения должна иметь размер {self.order}x{self.order}")
        return self


class Report(BaseModel):
    """
    Отчет о проверке

    Инвариант: checks[name] истинно тогда и только тогда, когда residuals[name] <= tolerances[name].
    """

    model_config = ConfigDict(populate_by_name=True)

    schema_version: str = Field(default_factory=lambda: settings.SCHEMA_VERSION, alias="schema")
    command: str
    inputs_digest: str = ""
    results: Dict[str, Any] = Field(default_factory=dict)
    residuals: Dict[str, float] = Field(default_factory=dict)
    tolerances: Dict[str, float] = Field(default_factory=dict)
    checks: Dict[str, bool] = Field(default_factory=dict)
    error: Optional[str] = None
    timestamp: str = Field(default_factory=lambda: datetime.now(timezone.utc).isoformat())

    def add_check(self, name: str, residual: float, tolerance: float) -> bool:
        residual = float(residual)
        self.residuals[name] = residual
        self.tolerances[name] = float(tolerance)
        self.checks[name] = residual <= tolerance
        return self.checks[name]

    @property
    def passed(self) -> bool:
        return self.error is None and all(self.checks.values())

    @property
    def status(self) -> CheckStatus:
        return CheckStatus.PASSED if self.passed else CheckStatus.FAILED

    def dump(self) -> Dict[str, Any]:
        payload = self.model_dump(by_alias=True)
        payload["pass"] = self.passed
        return payload
