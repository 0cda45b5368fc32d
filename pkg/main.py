"""
Главный файл запуска Operator Lab
Разбор командной строки, настройка логирования и запуск подкоманд
"""

import argparse
import logging.config
import sys
from typing import Any, Dict, List, Optional, Sequence

from config import build_logging_config, settings
from handlers import register_handlers
from services.matrix_core import Tolerance
from utils.errors import InputValidationError
from utils.helpers import ReportFormatter, log_error, require
from utils.middleware import (
    EXIT_INPUT_ERROR,
    ErrorHandlingMiddleware,
    LoggingMiddleware,
    apply_middlewares,
    exit_code_for,
)
from utils.schemas import Report
from utils.validators import DataValidators

logger = logging.getLogger(__name__)


class ToolkitArgumentParser(argparse.ArgumentParser):
    """ArgumentParser, сообщающий об ошибке исключением вместо выхода"""

    def error(self, message: str):
        raise InputValidationError(message)


def build_parser() -> ToolkitArgumentParser:
    parser = ToolkitArgumentParser(
        prog="operator-lab",
        description="Численная проверка конструкций теории операторов в конечной размерности",
    )
    parser.add_argument("--tol", type=float, default=None, help="Абсолютный и относительный допуск проверок")
    parser.add_argument("--seed", type=int, default=settings.DEFAULT_SEED, help="Зерно генератора случайных чисел")
    parser.add_argument("--quiet", action="store_true", help="Выводить в stderr только предупреждения")
    subparsers = parser.add_subparsers(dest="command", required=True)
    register_handlers(subparsers)
    return parser


def setup_logging(quiet: bool = False) -> None:
    """
    Настройка логирования

    Args:
        quiet: Поднять уровень консоли до WARNING
    """
    if settings.LOG_TO_FILE:
        # Создаем папку для логов
        settings.LOG_DIR.mkdir(parents=True, exist_ok=True)
    logging.config.dictConfig(build_logging_config("WARNING" if quiet else None))


def _emit(report: Report) -> None:
    print(ReportFormatter.format_report(report.dump()))


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Запуск одной подкоманды

    Args:
        argv: Аргументы командной строки (по умолчанию sys.argv[1:])

    Returns:
        Код выхода: 0 - все проверки пройдены, 1 - есть непройденные проверки,
        2 - ошибка разбора или входных данных
    """
    argv: List[str] = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        tol_value = settings.ABS_TOL if args.tol is None else args.tol
        require(DataValidators.validate_tolerance(tol_value))
    except InputValidationError as e:
        print(f"operator-lab: ошибка: {e}", file=sys.stderr)
        _emit(Report(command=argv[0] if argv else "", error=str(e)))
        return EXIT_INPUT_ERROR

    setup_logging(args.quiet)

    command = args.command
    if getattr(args, "action", None):
        command = f"{command} {args.action}"
    tol = Tolerance() if args.tol is None else Tolerance(abs_tol=tol_value, rel_tol=tol_value)
    data: Dict[str, Any] = {"command": command, "argv": argv, "tol": tol, "seed": args.seed}

    handler = apply_middlewares(args.handler, [ErrorHandlingMiddleware(), LoggingMiddleware()])
    report = handler(args, data)
    if "diagnostic" in data:
        print(f"operator-lab: ошибка: {data['diagnostic']}", file=sys.stderr)
    _emit(report)
    return exit_code_for(report, data)


if __name__ == "__main__":
    try:
        sys.exit(run())
    except KeyboardInterrupt:
        logger.info("Программа завершена пользователем")
        sys.exit(EXIT_INPUT_ERROR)
    except Exception as e:
        log_error(e, "main")
        sys.exit(EXIT_INPUT_ERROR)
