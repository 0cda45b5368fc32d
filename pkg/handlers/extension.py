"""
Подкоманда extension
Индексы дефекта оператора импульса и его самосопряженные расширения
"""

import logging
from argparse import Namespace
from typing import Any, Dict

import numpy as np

from services.unbounded import (
    ExtensionParameter,
    align_phase,
    deficiency_oracle,
    momentum_operator,
    self_adjoint_extension,
    von_neumann_dimensions,
)
from utils.helpers import new_report, require
from utils.schemas import Report
from utils.validators import DataValidators

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("extension", help="Самосопряженные расширения -i d/dx на [0, 1]")
    parser.add_argument("--grid", type=int, default=512, help="Число узлов сетки N")
    parser.add_argument("--theta", type=float, default=0.0, help="Граничное условие f(1) = e^(i theta) f(0)")
    parser.add_argument("--modes", type=int, default=3, help="Проверяемые |n| <= modes в спектре theta + 2 pi n")
    parser.add_argument("--spectrum-tol", type=float, default=1e-3, help="Допуск сравнения спектра")
    parser.add_argument("--deficiency-tol", type=float, default=1e-3, help="Допуск сравнения с e^(-+x)")
    parser.set_defaults(handler=handle_extension)


def handle_extension(args: Namespace, data: Dict[str, Any]) -> Report:
    """
    Расширение оператора импульса, индексированное theta

    Args:
        args: Аргументы подкоманды
        data: Общие данные запуска

    Returns:
        Отчет {"d_plus", "d_minus", "eigenvalues"} и сравнение спектра с theta + 2 pi n
    """
    require(DataValidators.validate_all({
        "--grid": DataValidators.validate_grid_size(args.grid),
        "--spectrum-tol": DataValidators.validate_tolerance(args.spectrum_tol),
        "--deficiency-tol": DataValidators.validate_tolerance(args.deficiency_tol),
    }))
    report = new_report(data, {"grid": args.grid, "theta": args.theta, "modes": args.modes})
    tol = data["tol"]

    op = momentum_operator(args.grid)
    parameter = ExtensionParameter(args.theta)
    result = self_adjoint_extension(op, parameter)
    deficiency = result.deficiency

    expected = parameter.theta + 2 * np.pi * np.arange(-args.modes, args.modes + 1)
    spectral_error = max(abs(result.nearest(value) - value) for value in expected)
    oracle_error = max(
        float(np.max(np.abs(align_phase(basis[0], deficiency_oracle(op, sign)) - deficiency_oracle(op, sign))))
        for sign, basis in ((1, deficiency.basis_plus), (-1, deficiency.basis_minus))
    )

    report.results.update({
        "d_plus": deficiency.d_plus,
        "d_minus": deficiency.d_minus,
        "theta": parameter.theta,
        "eigenvalues": result.lowest(2 * args.modes + 1),
        "spurious_modes": result.spurious,
        "dimensions": von_neumann_dimensions(op, deficiency),
    })
    report.add_check("spectrum", spectral_error, args.spectrum_tol)
    report.add_check("extends_minimal", result.extension_residual, tol.bound(1.0) * args.grid)
    report.add_check("deficiency_vectors", oracle_error, args.deficiency_tol)
    report.add_check("deficiency_equations", deficiency.residual, tol.bound(1.0) * args.grid)
    report.add_check("real_spectrum", result.max_imaginary, tol.bound(1.0) * args.grid)

    logger.info(f"extension: N={args.grid}, theta={parameter.theta:.4f}, ошибка спектра {spectral_error:.2e}")
    return report
