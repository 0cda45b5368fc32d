"""
Подкоманда group
Индуцированные представления, ДПФ на Z_N и проверка мер Хаара группы ax+b
"""

import logging
from argparse import Namespace
from fractions import Fraction
from typing import Any, Dict, List

import numpy as np

from services.commutant import commutant, with_adjoints
from services.groups import (
    FiniteGroup,
    QuadratureGrid,
    Rep,
    axb_haar_check,
    character_inner,
    cyclic_characters,
    cyclic_group,
    dft_cyclic,
    heisenberg_group,
    induce,
    one_dimensional_rep,
    subgroup,
)
from services.matrix_core import adjoint, max_norm
from utils.errors import InputValidationError
from utils.helpers import PayloadLoader, new_report, require
from utils.schemas import GroupPayload, MatrixListPayload, MatrixPayload, Report
from utils.validators import DataValidators

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("group", help="Конечные группы и группа ax+b")
    actions = parser.add_subparsers(dest="action", required=True)

    induced = actions.add_parser("induce", help="Индуцированное представление Ind_Gamma^G L")
    induced.add_argument("--group", required=True, help="JSON группы или cyclic:N, heisenberg:p")
    induced.add_argument("--subgroup", required=True, help="Индексы элементов Gamma через запятую")
    source = induced.add_mutually_exclusive_group(required=True)
    source.add_argument("--phases", help="Характер Gamma: дроби q_i, L(gamma_i) = exp(2 pi i q_i)")
    source.add_argument("--rep", help="JSON-список матриц L(gamma) в порядке возрастания индексов")
    induced.set_defaults(handler=handle_induce)

    transform = actions.add_parser("dft", help="Унитарное ДПФ на Z_N")
    transform.add_argument("--vector", required=True, help="JSON матрицы-столбца N x 1")
    transform.set_defaults(handler=handle_dft)

    haar = actions.add_parser("haar-check", help="Инвариантность мер Хаара группы ax+b")
    haar.add_argument("--h", nargs=2, type=float, default=[2.0, 1.0], metavar=("A", "B"), help="Элемент (a, b), a > 0")
    haar.add_argument("--points", type=int, default=400, help="Число узлов квадратуры по каждой оси")
    haar.add_argument("--quad-tol", type=float, default=1e-6, help="Допуск квадратуры")
    haar.set_defaults(handler=handle_haar_check)


def load_group(spec: str) -> FiniteGroup:
    """
    Группа по описанию

    Args:
        spec: cyclic:N, heisenberg:p или путь к JSON-таблице умножения

    Returns:
        FiniteGroup
    """
    kind, _, parameter = spec.partition(":")
    if kind in ("cyclic", "heisenberg") and parameter:
        try:
            value = int(parameter)
        except ValueError as e:
            raise InputValidationError(f"Параметр группы должен быть целым: {spec}") from e
        return cyclic_group(value) if kind == "cyclic" else heisenberg_group(value)

    payload = PayloadLoader.load(spec, GroupPayload)
    labels = tuple(payload.labels) if payload.labels is not None else None
    return FiniteGroup(mult=np.array(payload.mult), labels=labels)


def _parse_indices(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise InputValidationError(f"Некорректный список индексов: {text}") from e


def _parse_phases(text: str) -> List[complex]:
    try:
        phases = [Fraction(part.strip()) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise InputValidationError(f"Некорректный список фаз: {text}") from e
    return [complex(np.exp(2j * np.pi * float(q))) for q in phases]


def handle_induce(args: Namespace, data: Dict[str, Any]) -> Report:
    """
    Индуцирование представления подгруппы

    Args:
        args: Аргументы подкоманды
        data: Общие данные запуска

    Returns:
        Отчет с матрицами U_g, классами смежности и характером
    """
    G = load_group(args.group)
    members = _parse_indices(args.subgroup)
    require(DataValidators.validate_subset(members, G.order))
    Gamma = subgroup(G, members)
    tol = data["tol"]

    if args.phases is not None:
        values = _parse_phases(args.phases)
        require(DataValidators.validate_character(values, tol.bound(1.0)))
        L = one_dimensional_rep(Gamma, values)
    else:
        L = Rep(group=Gamma, matrices=tuple(PayloadLoader.load(args.rep, MatrixListPayload).matrices()))
    report = new_report(data, {
        "mult": G.mult,
        "subgroup": sorted(members),
        "rep": list(L.matrices),
    })

    result = induce(G, members, L)
    U = result.rep
    character = U.character()
    unitarity = max(max_norm(m @ adjoint(m) - np.eye(U.dim)) for m in U.matrices)
    commutant_dim = commutant(with_adjoints(list(U.matrices))).dimension

    report.results.update({
        "dim": U.dim,
        "index": result.index,
        "cosets": [list(c) for c in result.cosets],
        "representatives": list(result.representatives),
        "character": character,
        "commutant_dimension": commutant_dim,
        "irreducible": commutant_dim == 1,
        "matrices": [MatrixPayload.from_array(m).model_dump() for m in U.matrices],
    })
    if args.group.startswith("cyclic:"):
        chars = cyclic_characters(G.order)
        # кратности вхождения характеров Z_N вещественны
        report.results["character_inner_products"] = [character_inner(chi, character).real for chi in chars]

    report.add_check("homomorphism", U.homomorphism_residual(), tol.bound(1.0) * U.dim)
    report.add_check("unitarity", unitarity, tol.bound(1.0) * U.dim)
    report.add_check("covariance", result.covariance_residual(), tol.bound(1.0) * U.dim)
    report.add_check("input_representation", L.homomorphism_residual(), tol.bound(1.0) * L.dim)

    logger.info(f"group induce: размерность {U.dim}, коммутант {commutant_dim}")
    return report


def handle_dft(args: Namespace, data: Dict[str, Any]) -> Report:
    """
    ДПФ вектора и тождество Парсеваля

    Args:
        args: Аргументы подкоманды
        data: Общие данные запуска

    Returns:
        Отчет с образом Uf
    """
    payload = PayloadLoader.load(args.vector, MatrixPayload)
    f = payload.to_array().reshape(-1)
    require(DataValidators.validate_finite(f))
    report = new_report(data, {"vector": f})
    tol = data["tol"]

    image = dft_cyclic(f)
    chars = cyclic_characters(f.size)
    direct = chars @ f / np.sqrt(f.size)
    scale = max(1.0, float(np.linalg.norm(f)))

    report.results["transform"] = MatrixPayload.from_array(image[:, None]).model_dump()
    report.add_check("parseval", abs(np.linalg.norm(image) - np.linalg.norm(f)), tol.bound(scale))
    report.add_check("character_sum", max_norm(image - direct), tol.bound(scale) * f.size)
    return report


def handle_haar_check(args: Namespace, data: Dict[str, Any]) -> Report:
    """
    Левая и правая меры Хаара группы ax+b и модулярная функция

    Args:
        args: Аргументы подкоманды
        data: Общие данные запуска

    Returns:
        Отчет с невязками квадратуры
    """
    require(DataValidators.validate_tolerance(args.quad_tol))
    h = (float(args.h[0]), float(args.h[1]))
    report = new_report(data, {"h": list(h), "points": args.points})

    result = axb_haar_check(h=h, grid=QuadratureGrid(points=args.points))
    report.results.update(result.to_payload())
    report.add_check("left_invariance", result.left_residual, args.quad_tol)
    report.add_check("right_invariance", result.right_residual, args.quad_tol)
    report.add_check("modular_function", abs(result.modular_ratio - result.modular_function), args.quad_tol)
    return report
