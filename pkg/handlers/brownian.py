"""
Подкоманда brownian
Разложение Карунена-Лоэва и выборка броуновских траекторий
"""

import logging
from argparse import Namespace
from typing import Any, Dict

import numpy as np

from config import settings
from services.stochastic import (
    analytic_eigenvalue,
    covariance_check,
    kernel_solves_ode,
    kl_decompose,
    sample_paths,
    truncation_error,
)
from utils.helpers import new_report, require
from utils.schemas import Report
from utils.validators import DataValidators

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("brownian", help="Броуновское движение через разложение Карунена-Лоэва")
    parser.add_argument("--grid", type=int, default=256, help="Число узлов сетки N")
    parser.add_argument("--modes", type=int, default=None, help="Число мод m (по умолчанию N)")
    parser.add_argument("--paths", type=int, default=20000, help="Число траекторий P")
    parser.add_argument("--eig-tol", type=float, default=1e-2, help="Относительный допуск для lambda_1")
    parser.add_argument("--mc-tol", type=float, default=None, help="Допуск ковариации (MC_TOLERANCE)")
    parser.add_argument("--emit-paths", action="store_true", help="Добавить траектории в отчет")
    parser.set_defaults(handler=handle_brownian)


def handle_brownian(args: Namespace, data: Dict[str, Any]) -> Report:
    """
    Собственные пары ядра min(s, t), траектории и проверка ковариации

    Args:
        args: Аргументы подкоманды
        data: Общие данные запуска (seed)

    Returns:
        Отчет со спектром, оценкой ковариации и при --emit-paths самими траекториями
    """
    modes = args.grid if args.modes is None else args.modes
    mc_tol = settings.MC_TOLERANCE if args.mc_tol is None else args.mc_tol
    require(DataValidators.validate_all({
        "--grid": DataValidators.validate_grid_size(args.grid),
        "--modes": DataValidators.validate_mode_count(modes, args.grid),
        "--eig-tol": DataValidators.validate_tolerance(args.eig_tol),
        "--mc-tol": DataValidators.validate_tolerance(mc_tol),
    }))
    seed = data["seed"]
    report = new_report(data, {"grid": args.grid, "modes": modes, "paths": args.paths, "seed": seed})
    tol = data["tol"]

    basis = kl_decompose(args.grid, modes)
    paths = sample_paths(basis, args.paths, seed=seed)
    covariance = covariance_check(paths, basis.kernel.grid, mc_tol)
    ode = kernel_solves_ode(np.ones(args.grid), args.grid)

    leading = analytic_eigenvalue(1)
    report.results.update({
        "eigenvalues": basis.eigenvalues[: min(modes, 10)],
        "analytic_eigenvalues": [analytic_eigenvalue(k) for k in range(1, min(modes, 10) + 1)],
        "eigenvalue_sum": float(np.sum(basis.eigenvalues)),
        "truncation_error": truncation_error(basis),
        "covariance": covariance.to_payload(),
        "seed": seed,
    })
    if args.emit_paths:
        report.results["grid"] = basis.kernel.grid
        report.results["paths"] = paths

    report.add_check("covariance", covariance.max_deviation, mc_tol)
    report.add_check("leading_eigenvalue", abs(basis.eigenvalues[0] - leading) / leading, args.eig_tol)
    report.add_check("orthonormality", basis.orthonormality_residual(), tol.bound(1.0) * args.grid)
    report.add_check("inverse_of_second_derivative", ode.residual, tol.bound(1.0) * args.grid ** 2)
    report.add_check("starts_at_zero", abs(ode.boundary_value), tol.bound(1.0))
    report.add_check("flat_at_end", abs(ode.terminal_slope), tol.bound(1.0))

    logger.info(f"brownian: N={args.grid}, m={modes}, P={args.paths}, отклонение {covariance.max_deviation:.4f}")
    return report
