"""
Промежуточное ПО для команд
Обертки вокруг обработчиков подкоманд: журналирование и обработка ошибок
"""

import logging
import time
from argparse import Namespace
from typing import Any, Callable, Dict, Sequence

from utils.errors import ToolkitError
from utils.helpers import log_error
from utils.schemas import Report

logger = logging.getLogger(__name__)

Handler = Callable[[Namespace, Dict[str, Any]], Report]

EXIT_OK = 0
EXIT_FAILED_CHECKS = 1
EXIT_INPUT_ERROR = 2


class BaseMiddleware:
    """Базовый класс: получает следующий обработчик, аргументы и общие данные"""

    def __call__(self, handler: Handler, args: Namespace, data: Dict[str, Any]) -> Report:
        raise NotImplementedError


class LoggingMiddleware(BaseMiddleware):
    """
    Middleware для журналирования запуска команд
    """

    def __call__(self, handler: Handler, args: Namespace, data: Dict[str, Any]) -> Report:
        command = data.get("command", "?")
        logger.debug(f"Запуск команды {command}")
        started = time.perf_counter()

        report = handler(args, data)

        elapsed = time.perf_counter() - started
        failed = [name for name, ok in report.checks.items() if not ok]
        if failed:
            logger.warning(f"Команда {command}: не пройдены проверки {', '.join(failed)}")
        logger.info(f"Команда {command} завершена за {elapsed:.3f} с, статус {report.status.value}")
        return report


class ErrorHandlingMiddleware(BaseMiddleware):
    """
    Middleware для глобальной обработки ошибок

    Ошибки предметной области и неожиданные исключения превращаются
    в отчет с полем error и кодом выхода 2.
    """

    def __call__(self, handler: Handler, args: Namespace, data: Dict[str, Any]) -> Report:
        command = data.get("command", "?")
        try:
            return handler(args, data)

        except ToolkitError as e:
            logger.warning(f"Команда {command} отклонена: {type(e).__name__}: {e}")
            data["exit_code"] = EXIT_INPUT_ERROR
            data["diagnostic"] = f"{type(e).__name__}: {e}"

        except Exception as e:
            log_error(e, f"команде {command}")
            data["exit_code"] = EXIT_INPUT_ERROR
            data["diagnostic"] = f"Внутренняя ошибка: {type(e).__name__}: {e}"

        return Report(
            command=command,
            inputs_digest=data.get("inputs_digest", ""),
            error=data["diagnostic"],
        )


def apply_middlewares(handler: Handler, middlewares: Sequence[BaseMiddleware]) -> Handler:
    """
    Оборачивание обработчика цепочкой middleware

    Args:
        handler: Обработчик подкоманды
        middlewares: Middleware от внешнего к внутреннему

    Returns:
        Обернутый обработчик
    """
    wrapped = handler
    for middleware in reversed(middlewares):
        wrapped = _bind(middleware, wrapped)
    return wrapped


def _bind(middleware: BaseMiddleware, handler: Handler) -> Handler:
    def call(args: Namespace, data: Dict[str, Any]) -> Report:
        return middleware(handler, args, data)
    return call


def exit_code_for(report: Report, data: Dict[str, Any]) -> int:
    if "exit_code" in data:
        return data["exit_code"]
    return EXIT_OK if report.passed else EXIT_FAILED_CHECKS
