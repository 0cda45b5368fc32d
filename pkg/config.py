"""
Конфигурация Operator Lab
Настройки численных допусков, генератора случайных чисел и логирования
"""

from enum import Enum
from pathlib import Path

import structlog
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Настройки приложения (читаются из окружения и файла .env)"""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # Допуски линейной алгебры
    ABS_TOL: float = Field(default=1e-9, ge=0)
    REL_TOL: float = Field(default=1e-9, ge=0)
    RANK_CUTOFF: float = Field(default=1e-10, gt=0)  # относительный порог ранга
    GROUP_TOL_FACTOR: float = Field(default=1e-8, gt=0)  # склейка кратных собственных значений
    JACOBI_MAX_SWEEPS: int = Field(default=100, ge=1)

    # Неограниченные операторы
    DEFICIENCY_THRESHOLD: float = Field(default=1e-6, gt=0)
    MIN_GRID_SIZE: int = Field(default=16, ge=4)

    # Монте-Карло
    DEFAULT_SEED: int = 20240229
    MC_TOLERANCE: float = Field(default=0.02, gt=0)

    # Отчеты
    SCHEMA_VERSION: str = "1.0"

    # Логирование
    LOG_LEVEL: str = "INFO"
    LOG_DIR: Path = Path("logs")
    LOG_TO_FILE: bool = True


class MapForm(str, Enum):
    """Форма хранения линейного отображения матриц"""
    KRAUS = "kraus"
    CHOI = "choi"
    SUPER = "super"


class OrbitKind(str, Enum):
    """Тип коприсоединенной орбиты группы ax+b"""
    LINE = "line"
    POINT = "point"


class CheckStatus(str, Enum):
    """Итог проверки в отчете"""
    PASSED = "passed"
    FAILED = "failed"


settings = Settings()


# Общая цепочка процессоров structlog для записей стандартного logging
_PRE_CHAIN = [
    structlog.stdlib.add_log_level,
    structlog.stdlib.add_logger_name,
    structlog.processors.TimeStamper(fmt="iso"),
]


def build_logging_config(console_level: str = None) -> dict:
    """
    Построение словаря для logging.config.dictConfig

    Args:
        console_level: Уровень логирования консоли (по умолчанию из настроек)

    Returns:
        Словарь конфигурации логирования
    """
    handlers = {
        "console": {
            "class": "logging.StreamHandler",
            "stream": "ext://sys.stderr",
            "formatter": "console",
            "level": console_level or settings.LOG_LEVEL,
        },
    }
    if settings.LOG_TO_FILE:
        handlers["file"] = {
            "class": "logging.handlers.RotatingFileHandler",
            "filename": str(settings.LOG_DIR / "operator_lab.log"),
            "maxBytes": 5 * 1024 * 1024,
            "backupCount": 3,
            "encoding": "utf-8",
            "formatter": "json",
            "level": "DEBUG",
        }

    return {
        "version": 1,
        "disable_existing_loggers": False,
        "formatters": {
            "console": {
                "()": structlog.stdlib.ProcessorFormatter,
                "processor": structlog.dev.ConsoleRenderer(colors=False),
                "foreign_pre_chain": _PRE_CHAIN,
            },
            "json": {
                "()": structlog.stdlib.ProcessorFormatter,
                "processor": structlog.processors.JSONRenderer(ensure_ascii=False),
                "foreign_pre_chain": _PRE_CHAIN,
            },
        },
        "handlers": handlers,
        "root": {
            "handlers": list(handlers),
            "level": "DEBUG",
        },
    }


LOGGING_CONFIG = build_logging_config()
