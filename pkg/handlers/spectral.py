"""
Подкоманда spectral
Спектральное разложение эрмитовой матрицы и проверка свойств проекторной меры
"""

import logging
from argparse import Namespace
from typing import Any, Dict

import numpy as np

from services.matrix_core import max_norm
from services.spectral import interval, pvm_evaluate, spectral_decompose
from utils.helpers import PayloadLoader, new_report
from utils.schemas import Report, SpectralPayload

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("spectral", help="Спектральное разложение")
    actions = parser.add_subparsers(dest="action", required=True)

    decompose = actions.add_parser("decompose", help="A = sum lambda_i P_i")
    decompose.add_argument("--matrix", required=True, help="JSON эрмитовой матрицы")
    decompose.add_argument("--method", choices=["eigh", "jacobi"], default="eigh", help="Собственный решатель")
    decompose.set_defaults(handler=handle_decompose)


def handle_decompose(args: Namespace, data: Dict[str, Any]) -> Report:
    """
    Разложение A = sum lambda_i P_i

    Args:
        args: Аргументы подкоманды
        data: Общие данные запуска

    Returns:
        Отчет с собственными значениями, кратностями и проекторами
    """
    A = PayloadLoader.load_matrix(args.matrix)
    report = new_report(data, {"matrix": A, "method": args.method})
    tol = data["tol"]

    spectrum = spectral_decompose(A, tol=tol, method=args.method)
    report.results.update(SpectralPayload.from_spectral(spectrum).model_dump())

    n = spectrum.dimension
    scale = max(1.0, max_norm(A))
    projections = spectrum.projections
    orthogonality = max(
        (max_norm(P @ Q) for i, P in enumerate(projections) for j, Q in enumerate(projections) if i != j),
        default=0.0,
    )
    idempotency = max(max_norm(P @ P - P) for P in projections)

    report.add_check("reconstruction", max_norm(A - spectrum.reconstruct()), tol.bound(scale) * n)
    report.add_check("resolution_of_identity", max_norm(sum(projections) - np.eye(n)), tol.bound(1.0) * n)
    report.add_check("orthogonality", orthogonality, tol.bound(1.0) * n)
    report.add_check("idempotency", idempotency, tol.bound(1.0) * n)

    # P(E ∩ F) = P(E) P(F) для E = (-inf, m], F = [m, inf), E ∩ F = {m}
    middle = float(spectrum.eigenvalues[len(projections) // 2])
    lower = pvm_evaluate(spectrum, interval(upper=middle))
    upper = pvm_evaluate(spectrum, interval(lower=middle))
    point = pvm_evaluate(spectrum, [middle])
    report.add_check("pvm_multiplicative", max_norm(lower @ upper - point), tol.bound(1.0) * n)

    logger.info(f"spectral decompose: {len(projections)} собственных значений, размерность {n}")
    return report
