"""
Подкоманда cp
Проверка полной положительности и дилатация Стайнспринга
"""

import logging
from argparse import Namespace
from math import isqrt
from typing import Any, Dict, Tuple

import numpy as np

from services.cpmaps import (
    CPMap,
    is_completely_positive,
    is_trace_preserving,
    is_unital,
    kraus_from_choi,
    positivity_witness,
    stinespring,
)
from services.matrix_core import adjoint, max_norm, rank
from utils.errors import InputValidationError
from utils.helpers import PayloadLoader, new_report
from utils.schemas import CPMapPayload, MatrixPayload, Report

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("cp", help="Вполне положительные отображения")
    actions = parser.add_subparsers(dest="action", required=True)

    verify = actions.add_parser("verify", help="Критерий Чои и операторы Крауса")
    _add_map_arguments(verify)
    verify.set_defaults(handler=handle_verify)

    dilation = actions.add_parser("stinespring", help="Минимальная дилатация унитального CP-отображения")
    _add_map_arguments(dilation)
    dilation.set_defaults(handler=handle_stinespring)


def _add_map_arguments(parser) -> None:
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--choi", help="JSON матрицы Чои")
    source.add_argument("--map", help="JSON отображения {\"kraus\": [...]} или {\"choi\": ...}")
    parser.add_argument("--in-dim", type=int, help="Размерность области определения n")
    parser.add_argument("--out-dim", type=int, help="Размерность образа m")


def _square_dims(size: int, in_dim: int = None, out_dim: int = None) -> Tuple[int, int]:
    if in_dim is None and out_dim is None:
        root = isqrt(size)
        if root * root != size:
            raise InputValidationError(f"Размер матрицы Чои {size} не квадрат: укажите --in-dim")
        return root, root
    if in_dim is None:
        in_dim = size // out_dim
    if out_dim is None:
        out_dim = size // in_dim
    if in_dim * out_dim != size:
        raise InputValidationError(f"Размер матрицы Чои {size} не равен n*m = {in_dim * out_dim}")
    return in_dim, out_dim


def load_map(args: Namespace) -> CPMap:
    """
    Отображение из --choi или --map

    Args:
        args: Аргументы подкоманды

    Returns:
        CPMap
    """
    if args.choi:
        choi = PayloadLoader.load_matrix(args.choi)
        in_dim, out_dim = _square_dims(choi.shape[0], args.in_dim, args.out_dim)
        return CPMap.from_choi(choi, in_dim, out_dim)

    payload = PayloadLoader.load(args.map, CPMapPayload)
    if payload.kraus is not None:
        return CPMap.from_kraus([m.to_array() for m in payload.kraus])
    choi = payload.choi.to_array()
    in_dim, out_dim = _square_dims(
        choi.shape[0],
        payload.in_dim or args.in_dim,
        payload.out_dim or args.out_dim,
    )
    return CPMap.from_choi(choi, in_dim, out_dim)


def handle_verify(args: Namespace, data: Dict[str, Any]) -> Report:
    """
    Полная положительность по Чои

    Args:
        args: Аргументы подкоманды
        data: Общие данные запуска

    Returns:
        Отчет со спектром матрицы Чои; при нарушении CP добавляется свидетель
    """
    phi = load_map(args)
    choi = phi.choi()
    report = new_report(data, {"choi": choi, "in_dim": phi.in_dim, "out_dim": phi.out_dim})
    tol = data["tol"]

    scale = max(1.0, max_norm(choi))
    eigenvalues = np.linalg.eigvalsh((choi + adjoint(choi)) / 2)
    cp = is_completely_positive(phi, tol)

    report.results.update({
        "in_dim": phi.in_dim,
        "out_dim": phi.out_dim,
        "choi_eigenvalues": eigenvalues,
        "min_choi_eigenvalue": float(eigenvalues[0]),
        "choi_rank": rank(choi),
        "completely_positive": cp,
        "unital": is_unital(phi, tol),
        "trace_preserving": is_trace_preserving(phi, tol),
    })
    report.add_check("hermitian_choi", max_norm(choi - adjoint(choi)), tol.bound(scale))
    report.add_check("completely_positive", max(0.0, -float(eigenvalues[0])), tol.bound(scale))

    if cp:
        kraus = kraus_from_choi(choi, phi.in_dim, phi.out_dim, tol)
        rebuilt = CPMap.from_kraus(kraus).choi()
        report.results["kraus"] = [MatrixPayload.from_array(V).model_dump() for V in kraus]
        report.add_check("kraus_roundtrip", max_norm(rebuilt - choi), tol.bound(scale) * choi.shape[0])
    else:
        witness = positivity_witness(phi, tol)
        report.results["witness"] = {
            "value": witness.value,
            "elements": [MatrixPayload.from_array(A).model_dump() for A in witness.elements],
            "vectors": [MatrixPayload.from_array(v[:, None]).model_dump() for v in witness.vectors],
        }

    logger.info(f"cp verify: минимальное собственное значение Чои {eigenvalues[0]:.3e}")
    return report


def handle_stinespring(args: Namespace, data: Dict[str, Any]) -> Report:
    """
    Дилатация phi(A) = V* (A ⊗ I_r) V

    Args:
        args: Аргументы подкоманды
        data: Общие данные запуска

    Returns:
        Отчет с изометрией V, рангом r и флагом минимальности
    """
    phi = load_map(args)
    report = new_report(data, {"choi": phi.choi(), "in_dim": phi.in_dim, "out_dim": phi.out_dim})
    tol = data["tol"]

    dilation = stinespring(phi, tol)
    minimal = dilation.is_minimal()

    report.results.update({
        "rank": dilation.rank,
        "pi": dilation.pi_spec,
        "V": MatrixPayload.from_array(dilation.V).model_dump(),
        "minimal": minimal,
    })
    report.add_check("isometry", dilation.isometry_defect(), tol.bound(1.0))
    report.add_check("compression", dilation.residual(phi), tol.bound(1.0) * phi.in_dim)
    report.add_check("minimality", 0.0 if minimal else 1.0, 0.0)
    return report
