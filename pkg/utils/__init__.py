"""
Утилиты Operator Lab
"""

from .errors import ToolkitError, InputValidationError
from .validators import DataValidators, ValidationResult
from .helpers import (
    PayloadLoader,
    ReportFormatter,
    new_report,
    require,
    log_error
)

__all__ = [
    # Errors
    'ToolkitError',
    'InputValidationError',

    # Validators
    'DataValidators',
    'ValidationResult',

    # Helpers
    'PayloadLoader',
    'ReportFormatter',
    'new_report',
    'require',
    'log_error',
]
