"""
Подкоманда gns
GNS-конструкция состояния и производная Радона-Никодима-Сакаи
"""

import logging
from argparse import Namespace
from typing import Any, Dict, Optional

import numpy as np

from services.gns import State, StarAlgebra, full_matrix_algebra, gns_construct, is_pure, radon_nikodym
from services.matrix_core import adjoint, max_norm, trace_pairing
from utils.helpers import PayloadLoader, new_report, require
from utils.schemas import AlgebraPayload, MatrixPayload, Report, StatePayload
from utils.validators import DataValidators

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("gns", help="GNS-конструкция")
    actions = parser.add_subparsers(dest="action", required=True)

    construct = actions.add_parser("construct", help="Циклическое представление состояния")
    construct.add_argument("--state", required=True, help="JSON состояния {\"density\": ...}")
    construct.add_argument("--algebra", help="JSON алгебры (по умолчанию вся M_n)")
    construct.set_defaults(handler=handle_construct)

    derivative = actions.add_parser("radon-nikodym", help="Оператор A с t(b) = <Omega, pi(b) A Omega>")
    derivative.add_argument("--state", required=True, help="JSON состояния s")
    derivative.add_argument("--functional", required=True, help="JSON функционала t <= s {\"density\": ...}")
    derivative.add_argument("--algebra", help="JSON алгебры (по умолчанию вся M_n)")
    derivative.set_defaults(handler=handle_radon_nikodym)


def _load_algebra(path: Optional[str], dim: int) -> StarAlgebra:
    if path is None:
        return full_matrix_algebra(dim)
    payload = PayloadLoader.load(path, AlgebraPayload)
    return StarAlgebra(ambient_dim=payload.ambient_dim, basis=tuple(payload.matrices()))


def _load_density(path: str) -> np.ndarray:
    density = PayloadLoader.load(path, StatePayload).density.to_array()
    require(DataValidators.validate_all({
        "density_square": DataValidators.validate_square(density),
        "density_finite": DataValidators.validate_finite(density),
    }))
    return density


def handle_construct(args: Namespace, data: Dict[str, Any]) -> Report:
    """
    GNS-тройка состояния и проверки представления

    Args:
        args: Аргументы подкоманды
        data: Общие данные запуска

    Returns:
        Отчет с размерностью представления, вектором Omega и флагом чистоты
    """
    density = _load_density(args.state)
    algebra = _load_algebra(args.algebra, density.shape[0])
    report = new_report(data, {"density": density, "algebra": [b for b in algebra.basis]})
    tol = data["tol"]

    state = State(algebra=algebra, density=density)
    triple = gns_construct(state, tol)
    pure, witness = is_pure(state, tol)

    basis = algebra.basis
    expectation = max(abs(state(b) - triple.expectation(b)) for b in basis)
    homomorphism = max(
        max_norm(triple.represent(bi @ bj) - triple.pi[i] @ triple.pi[j])
        for i, bi in enumerate(basis)
        for j, bj in enumerate(basis)
    )
    star = max(max_norm(triple.represent(adjoint(b)) - adjoint(p)) for b, p in zip(basis, triple.pi))
    scale = max(1.0, max(max_norm(b) for b in basis))

    report.results.update({
        "rep_dim": triple.rep_dim,
        "algebra_dim": algebra.dim,
        "omega": MatrixPayload.from_array(triple.omega[:, None]).model_dump(),
        "is_pure": pure,
        "commutant_projection": None if witness is None else MatrixPayload.from_array(witness).model_dump(),
    })
    report.add_check("expectation", expectation, tol.bound(scale))
    report.add_check("homomorphism", homomorphism, tol.bound(scale ** 2) * algebra.dim)
    report.add_check("adjoint", star, tol.bound(scale) * algebra.dim)
    report.add_check("cyclicity", float(triple.rep_dim - triple.cyclic_rank()), 0.0)
    report.add_check("unit_vector", abs(np.linalg.norm(triple.omega) - 1), tol.bound(1.0))
    return report


def handle_radon_nikodym(args: Namespace, data: Dict[str, Any]) -> Report:
    """
    Производная Сакаи функционала t <= s

    Args:
        args: Аргументы подкоманды
        data: Общие данные запуска

    Returns:
        Отчет с оператором A из коммутанта и его спектром
    """
    density = _load_density(args.state)
    t_density = _load_density(args.functional)
    algebra = _load_algebra(args.algebra, density.shape[0])
    report = new_report(data, {"s": density, "t": t_density, "algebra": [b for b in algebra.basis]})
    tol = data["tol"]

    state = State(algebra=algebra, density=density)
    derivative = radon_nikodym(state, t_density, tol)
    triple = gns_construct(state, tol)

    operator = derivative.operator
    spectrum = np.linalg.eigvalsh((operator + adjoint(operator)) / 2)
    outside = max(0.0, -float(spectrum[0]), float(spectrum[-1]) - 1.0)
    functional = max(
        abs(trace_pairing(b, t_density) - np.vdot(triple.omega, p @ operator @ triple.omega))
        for b, p in zip(algebra.basis, triple.pi)
    )

    report.results.update({
        "operator": MatrixPayload.from_array(operator).model_dump(),
        "spectrum": spectrum,
        "commutant_dimension": derivative.commutant_dimension,
    })
    report.add_check("functional", functional, tol.bound(1.0) * algebra.dim)
    report.add_check("spectrum_in_unit_interval", outside, tol.bound(1.0) * algebra.dim)
    report.add_check("self_adjoint", max_norm(operator - adjoint(operator)), tol.bound(1.0) * algebra.dim)
    return report
