"""
Подкоманда wavelet
Точная матрица оператора умножения на t в базисе Хаара
"""

import logging
from argparse import Namespace
from typing import Any, Dict

import numpy as np
import sympy

from services.wavelet import diagonal_plus_compact_report, gram_matrix, haar_basis, mt_matrix, mt_spectrum
from utils.helpers import new_report, require
from utils.schemas import Report
from utils.validators import DataValidators

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("wavelet", help="Базис Хаара на [0, 1]")
    actions = parser.add_subparsers(dest="action", required=True)

    matrix = actions.add_parser("mt-matrix", help="M_ab = <u_a, t u_b> в Q(sqrt 2)")
    matrix.add_argument("--level", type=int, default=3, help="Максимальный уровень J")
    matrix.add_argument("--off-diagonal-bound", type=float, default=0.25, help="Граница внедиагональных элементов")
    matrix.set_defaults(handler=handle_mt_matrix)


def handle_mt_matrix(args: Namespace, data: Dict[str, Any]) -> Report:
    """
    Матрица M_t, ее диагональ и убывание внедиагональных элементов

    Args:
        args: Аргументы подкоманды
        data: Общие данные запуска

    Returns:
        Отчет с точными элементами (строками), диагональю и спектром сжатия
    """
    require(DataValidators.validate_level(args.level))
    report = new_report(data, {"level": args.level})
    tol = data["tol"]

    basis = haar_basis(args.level)
    M = mt_matrix(basis)
    structure = diagonal_plus_compact_report(M)

    centers = [u.support_center() for u in basis.functions]
    diagonal_defect = max(
        abs(float(sympy.nsimplify(value - sympy.Rational(c.numerator, c.denominator))))
        for value, c in zip(M.diagonal(), centers)
    )
    gram_defect = float(max(abs(x) for x in (gram_matrix(basis) - sympy.eye(basis.size))))
    spectrum = mt_spectrum(basis)
    eigenvalues = np.linalg.eigvalsh(M.to_numpy())
    spectrum_defect = float(np.max(np.abs(eigenvalues - np.array([float(s) for s in spectrum]))))

    report.results.update({
        "size": basis.size,
        "names": basis.names(),
        "entries": [[str(M.entry(a, b)) for b in range(basis.size)] for a in range(basis.size)],
        "diagonal": [str(value) for value in M.diagonal()],
        "spectrum": spectrum,
        "structure": structure,
    })
    report.add_check("orthonormal_basis", gram_defect, 0.0)
    report.add_check("symmetric", 0.0 if M.is_symmetric() else 1.0, 0.0)
    report.add_check("diagonal_is_support_center", diagonal_defect, 0.0)
    report.add_check("off_diagonal_bound", structure["max_off_diagonal"], args.off_diagonal_bound)
    report.add_check("compressed_spectrum", spectrum_defect, tol.bound(1.0) * basis.size)

    logger.info(f"wavelet mt-matrix: J={args.level}, {basis.size} функций")
    return report
