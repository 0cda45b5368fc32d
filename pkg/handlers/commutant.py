"""
Подкоманда commutant
Коммутант набора матриц, неприводимость и двойной коммутант
"""

import logging
from argparse import Namespace
from typing import Any, Dict

from services.commutant import commutant, double_commutant, generated_algebra_dimension, nontrivial_projection, with_adjoints
from services.matrix_core import max_norm
from utils.helpers import PayloadLoader, new_report, require
from utils.schemas import MatrixPayload, Report
from utils.validators import ValidationResult

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("commutant", help="Коммутант набора матриц")
    actions = parser.add_subparsers(dest="action", required=True)

    compute = actions.add_parser("compute", help="Размерность и базис коммутанта")
    compute.add_argument("--generators", required=True, help="JSON-список матриц")
    compute.add_argument("--with-adjoints", action="store_true", help="Дополнить набор сопряженными")
    compute.set_defaults(handler=handle_compute)


def handle_compute(args: Namespace, data: Dict[str, Any]) -> Report:
    """
    Коммутант, центр и проверка теоремы о двойном коммутанте

    Args:
        args: Аргументы подкоманды
        data: Общие данные запуска

    Returns:
        Отчет с размерностью коммутанта, флагом коммутативности и размером матричного блока
    """
    generators = PayloadLoader.load_matrices(args.generators)
    shapes = {g.shape for g in generators}
    require(ValidationResult(len(shapes) == 1, f"Образующие разных размеров: {sorted(shapes)}"))
    report = new_report(data, {"generators": generators, "with_adjoints": args.with_adjoints})
    tol = data["tol"]

    matrices = with_adjoints(generators) if args.with_adjoints else generators
    result = commutant(matrices)
    scale = max(1.0, max(max_norm(g) for g in matrices))
    residual = max(max_norm(C @ X - X @ C) for C in result.basis for X in matrices)

    report.results.update(result.to_payload())
    report.results["irreducible"] = result.dimension == 1
    report.add_check("commutation", residual, tol.bound(scale) * len(matrices))

    if args.with_adjoints:
        witness = nontrivial_projection(result)
        report.results["reducing_projection"] = (
            None if witness is None else MatrixPayload.from_array(witness).model_dump()
        )
        # A'' = алгебра, порожденная *-замкнутым набором
        generated = generated_algebra_dimension(matrices)
        second = double_commutant(matrices).dimension
        report.results["generated_algebra_dimension"] = generated
        report.results["double_commutant_dimension"] = second
        report.add_check("double_commutant", float(abs(second - generated)), 0.0)

    logger.info(f"commutant: размерность {result.dimension}, неприводимость {result.dimension == 1}")
    return report
