"""
Конечные группы и их унитарные представления
Полупрямые произведения, групповая алгебра, ДПФ, индуцированные представления и группа ax+b
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Hashable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.integrate import trapezoid
from scipy.linalg import block_diag, dft

from config import OrbitKind
from services.matrix_core import Tolerance, adjoint, is_unitary, max_norm
from utils.errors import (
    GroupMismatchError,
    InvalidGroupError,
    NotAnActionError,
    NotSubgroupError,
    OffCircleError,
    SupportOutOfDomainError,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """Группа как таблица умножения на индексах 0..N-1"""

    mult: np.ndarray
    labels: Optional[Tuple[str, ...]] = None
    identity: int = field(init=False)
    inv: Tuple[int, ...] = field(init=False)

    def __post_init__(self):
        table = np.asarray(self.mult)
        if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
            raise InvalidGroupError(f"Таблица умножения должна быть квадратной, получено {table.shape}")
        table = table.astype(int)
        N = table.shape[0]
        if table.min() < 0 or table.max() >= N:
            raise InvalidGroupError("Элементы таблицы вне диапазона индексов")
        if self.labels is not None and len(self.labels) != N:
            raise InvalidGroupError("Число меток не совпадает с порядком группы")
        object.__setattr__(self, "mult", table)

        # (ab)c = a(bc) на всех тройках
        if not np.array_equal(table[table], table[:, table]):
            raise InvalidGroupError("Умножение не ассоциативно")

        arange = np.arange(N)
        units = [e for e in range(N) if np.array_equal(table[e], arange) and np.array_equal(table[:, e], arange)]
        if not units:
            raise InvalidGroupError("Нейтральный элемент отсутствует")
        identity = units[0]

        inverses = []
        for g in range(N):
            candidates = np.flatnonzero(table[g] == identity)
            if len(candidates) != 1 or table[candidates[0], g] != identity:
                raise InvalidGroupError(f"Элемент {g} не обратим")
            inverses.append(int(candidates[0]))

        object.__setattr__(self, "identity", identity)
        object.__setattr__(self, "inv", tuple(inverses))

    @property
    def order(self) -> int:
        return self.mult.shape[0]

    @classmethod
    def from_elements(cls, elements: Sequence[Hashable], operation: Callable) -> "FiniteGroup":
        """Группа по списку элементов и бинарной операции"""
        position: Dict[Hashable, int] = {e: i for i, e in enumerate(elements)}
        try:
            table = np.array([[position[operation(x, y)] for y in elements] for x in elements])
        except KeyError as e:
            raise InvalidGroupError(f"Произведение {e} не принадлежит множеству") from e
        return cls(mult=table, labels=tuple(str(e) for e in elements))

    def multiply(self, g: int, h: int) -> int:
        return int(self.mult[g, h])

    def inverse(self, g: int) -> int:
        return self.inv[g]

    def conjugate(self, g: int, x: int) -> int:
        """g x g^-1"""
        return self.multiply(self.multiply(g, x), self.inverse(g))

    def label(self, g: int) -> str:
        return self.labels[g] if self.labels else str(g)

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mult, self.mult.T))

    def same_as(self, other: "FiniteGroup") -> bool:
        return self is other or np.array_equal(self.mult, other.mult)

    def center(self) -> List[int]:
        return [z for z in range(self.order) if np.array_equal(self.mult[z], self.mult[:, z])]

    def is_subgroup(self, subset: Sequence[int]) -> bool:
        members = set(subset)
        if self.identity not in members:
            return False
        return all(self.multiply(a, self.inverse(b)) in members for a in members for b in members)

    def is_normal(self, subset: Sequence[int]) -> bool:
        members = set(subset)
        return self.is_subgroup(subset) and all(
            self.conjugate(g, x) in members for g in range(self.order) for x in members
        )

    def right_cosets(self, subset: Sequence[int]) -> List[List[int]]:
        """
        Правые смежные классы Gamma x

        Returns:
            Классы, упорядоченные по минимальному элементу (он же представитель)
        """
        if not self.is_subgroup(subset):
            raise NotSubgroupError("Подмножество не является подгруппой")
        seen = set()
        cosets = []
        for x in range(self.order):
            if x in seen:
                continue
            coset = sorted({self.multiply(gamma, x) for gamma in subset})
            seen.update(coset)
            cosets.append(coset)
        return cosets


def cyclic_group(n: int) -> FiniteGroup:
    """Z_n"""
    if n < 1:
        raise InvalidGroupError(f"Порядок циклической группы должен быть >= 1, получено {n}")
    arange = np.arange(n)
    return FiniteGroup(mult=(arange[:, None] + arange[None, :]) % n)


def direct_product(H: FiniteGroup, K: FiniteGroup) -> FiniteGroup:
    """H x K с индексом (h, k) -> h|K| + k"""
    return semidirect_product(H, K, lambda k: list(range(H.order)))


def subgroup(G: FiniteGroup, subset: Sequence[int]) -> FiniteGroup:
    """Подгруппа как самостоятельная группа; i-й элемент соответствует sorted(subset)[i]"""
    members = sorted(set(subset))
    if not G.is_subgroup(members):
        raise NotSubgroupError("Подмножество не является подгруппой")
    position = {g: i for i, g in enumerate(members)}
    table = np.array([[position[G.multiply(a, b)] for b in members] for a in members])
    return FiniteGroup(mult=table, labels=tuple(G.label(g) for g in members))


def _check_action(H: FiniteGroup, K: FiniteGroup, automorphisms: List[np.ndarray]) -> None:
    arange = np.arange(H.order)
    for k, phi in enumerate(automorphisms):
        if sorted(phi.tolist()) != arange.tolist():
            raise NotAnActionError(f"phi_{k} не является биекцией")
        # phi(h1 h2) = phi(h1) phi(h2)
        if not np.array_equal(phi[H.mult], H.mult[phi[:, None], phi[None, :]]):
            raise NotAnActionError(f"phi_{k} не является автоморфизмом")
    for k1 in range(K.order):
        for k2 in range(K.order):
            if not np.array_equal(automorphisms[K.multiply(k1, k2)], automorphisms[k1][automorphisms[k2]]):
                raise NotAnActionError(f"phi_({k1}{k2}) != phi_{k1} o phi_{k2}")


def semidirect_product(
    H: FiniteGroup,
    K: FiniteGroup,
    action: Union[Callable[[int], Sequence[int]], Mapping[int, Sequence[int]]],
) -> FiniteGroup:
    """
    Полупрямое произведение H x| K: (h1, k1)(h2, k2) = (h1 phi_k1(h2), k1 k2)

    Args:
        H: Нормальный множитель
        K: Действующая группа
        action: k -> перестановка индексов H (образ phi_k(h) на позиции h)

    Returns:
        FiniteGroup порядка |H||K| с индексом (h, k) -> h|K| + k
    """
    lookup = action.__getitem__ if isinstance(action, Mapping) else action
    automorphisms = [np.asarray(lookup(k), dtype=int) for k in range(K.order)]
    _check_action(H, K, automorphisms)

    nh, nk = H.order, K.order
    h_index = np.repeat(np.arange(nh), nk)
    k_index = np.tile(np.arange(nk), nh)
    phi = np.stack(automorphisms)  # phi[k, h]

    h_part = H.mult[h_index[:, None], phi[k_index[:, None], h_index[None, :]]]
    k_part = K.mult[k_index[:, None], k_index[None, :]]
    table = h_part * nk + k_part

    labels = tuple(f"({H.label(h)},{K.label(k)})" for h, k in zip(h_index, k_index))
    logger.debug(f"Полупрямое произведение порядка {nh * nk}")
    return FiniteGroup(mult=table, labels=labels)


def heisenberg_group(p: int) -> FiniteGroup:
    """
    Конечная группа Гейзенберга над Z_p

    (a, b, c)(a', b', c') = (a + a', b + b', c + c' + ab'); индекс a p^2 + b p + c.
    """
    if p < 2:
        raise InvalidGroupError(f"p должно быть >= 2, получено {p}")
    a, b, c = np.meshgrid(np.arange(p), np.arange(p), np.arange(p), indexing="ij")
    a, b, c = a.ravel(), b.ravel(), c.ravel()
    na = (a[:, None] + a[None, :]) % p
    nb = (b[:, None] + b[None, :]) % p
    nc = (c[:, None] + c[None, :] + a[:, None] * b[None, :]) % p
    labels = tuple(f"({x},{y},{z})" for x, y, z in zip(a, b, c))
    return FiniteGroup(mult=na * p * p + nb * p + nc, labels=labels)


def heisenberg_index(p: int, a: int, b: int, c: int) -> int:
    return (a % p) * p * p + (b % p) * p + (c % p)


def heisenberg_as_semidirect(p: int) -> FiniteGroup:
    """Z_p^2 x| Z_p с phi_a(c, b) = (c + ab, b); элемент ((c, b), a)"""
    Zp = cyclic_group(p)
    H = direct_product(Zp, Zp)  # индекс c p + b

    def shear(a: int) -> List[int]:
        return [((c + a * b) % p) * p + b for c in range(p) for b in range(p)]

    return semidirect_product(H, Zp, shear)


# Групповая алгебра

@dataclass(frozen=True, eq=False)
class GroupAlgebraElement:
    """Функция на конечной группе с коэффициентами в C"""

    group: FiniteGroup
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=complex).ravel()
        if coeffs.size != self.group.order:
            raise GroupMismatchError(f"Ожидалось {self.group.order} коэффициентов, получено {coeffs.size}")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def delta(cls, group: FiniteGroup, g: int) -> "GroupAlgebraElement":
        coeffs = np.zeros(group.order, dtype=complex)
        coeffs[g] = 1
        return cls(group=group, coeffs=coeffs)

    def __mul__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        return convolve(self, other)


def convolve(a: GroupAlgebraElement, b: GroupAlgebraElement) -> GroupAlgebraElement:
    """(ab)(g) = sum_h a(g h^-1) b(h)"""
    if not a.group.same_as(b.group):
        raise GroupMismatchError("Свертка элементов разных групп")
    result = np.zeros(a.group.order, dtype=complex)
    np.add.at(result, a.group.mult.ravel(), np.outer(a.coeffs, b.coeffs).ravel())
    return GroupAlgebraElement(group=a.group, coeffs=result)


def involution(a: GroupAlgebraElement) -> GroupAlgebraElement:
    """a*(g) = conj(a(g^-1))"""
    return GroupAlgebraElement(group=a.group, coeffs=a.coeffs[list(a.group.inv)].conj())


# Представления

@dataclass(frozen=True, eq=False)
class Rep:
    """Унитарное представление: матрица для каждого элемента группы"""

    group: FiniteGroup
    matrices: Tuple[np.ndarray, ...]

    def __post_init__(self):
        matrices = tuple(np.atleast_2d(np.asarray(m, dtype=complex)) for m in self.matrices)
        if len(matrices) != self.group.order:
            raise GroupMismatchError(f"Ожидалось {self.group.order} матриц, получено {len(matrices)}")
        object.__setattr__(self, "matrices", matrices)

    @property
    def dim(self) -> int:
        return self.matrices[0].shape[0]

    def homomorphism_residual(self) -> float:
        """max ||pi(gh) - pi(g)pi(h)|| по всем парам"""
        G = self.group
        return max(
            max_norm(self.matrices[G.multiply(g, h)] - self.matrices[g] @ self.matrices[h])
            for g in range(G.order)
            for h in range(G.order)
        )

    def is_valid(self, tol: Optional[Tolerance] = None) -> bool:
        tol = tol or Tolerance()
        G = self.group
        return (
            self.homomorphism_residual() <= tol.bound(1.0)
            and tol.close(self.matrices[G.identity], np.eye(self.dim))
            and all(tol.close(self.matrices[G.inverse(g)], adjoint(self.matrices[g])) for g in range(G.order))
        )

    def is_unitary(self, tol: Optional[Tolerance] = None) -> bool:
        return all(is_unitary(m, tol) for m in self.matrices)

    def character(self) -> np.ndarray:
        return np.array([np.trace(m) for m in self.matrices])

    def integrate(self, a: GroupAlgebraElement) -> np.ndarray:
        """pi(a) = sum a(g) pi(g)"""
        return sum(c * m for c, m in zip(a.coeffs, self.matrices))


def character_inner(chi: np.ndarray, psi: np.ndarray) -> complex:
    """<chi, psi> = (1/|G|) sum conj(chi(g)) psi(g)"""
    chi = np.asarray(chi, dtype=complex)
    return complex(np.vdot(chi, np.asarray(psi, dtype=complex)) / chi.size)


def one_dimensional_rep(group: FiniteGroup, values: Sequence[complex]) -> Rep:
    return Rep(group=group, matrices=tuple(np.array([[v]], dtype=complex) for v in values))


def regular_representation(G: FiniteGroup) -> Rep:
    """Правое регулярное представление (R_g f)(x) = f(xg)"""
    matrices = []
    for g in range(G.order):
        R = np.zeros((G.order, G.order), dtype=complex)
        R[np.arange(G.order), G.mult[:, g]] = 1
        matrices.append(R)
    return Rep(group=G, matrices=tuple(matrices))


def cyclic_characters(N: int) -> np.ndarray:
    """chi_l(k) = exp(2 pi i k l / N); строка l"""
    k = np.arange(N)
    return np.exp(2j * np.pi * np.outer(k, k) / N)


def dft_cyclic(f: Sequence[complex]) -> np.ndarray:
    """
    Унитарное ДПФ на Z_N: (Uf)(l) = N^(-1/2) sum_k exp(2 pi i k l / N) f(k)

    Args:
        f: Вектор длины N >= 1

    Returns:
        Вектор Uf той же длины
    """
    f = np.ravel(np.asarray(f, dtype=complex))
    if f.size == 0:
        raise GroupMismatchError("ДПФ пустого вектора")
    return np.fft.ifft(f, norm="ortho")


def dft_matrix(N: int) -> np.ndarray:
    """Унитарная матрица U того же ДПФ"""
    return dft(N, scale="sqrtn").conj()


def cyclic_convolution(a: Sequence[complex], b: Sequence[complex]) -> np.ndarray:
    """(a * b)_n = sum_k a_k b_(n-k) на Z_N"""
    a = np.asarray(a, dtype=complex)
    return convolve(
        GroupAlgebraElement(cyclic_group(a.size), a),
        GroupAlgebraElement(cyclic_group(a.size), np.asarray(b, dtype=complex)),
    ).coeffs


# Последовательности из l^1(Z)

@dataclass(frozen=True, eq=False)
class FiniteSequence:
    """Финитная двусторонняя последовательность: coeffs[k] = a_(offset + k)"""

    coeffs: np.ndarray
    offset: int = 0

    def __post_init__(self):
        object.__setattr__(self, "coeffs", np.ravel(np.asarray(self.coeffs, dtype=complex)))

    @classmethod
    def delta(cls, n: int) -> "FiniteSequence":
        return cls(coeffs=np.ones(1), offset=n)

    def l1_norm(self) -> float:
        return float(np.sum(np.abs(self.coeffs)))

    def convolve(self, other: "FiniteSequence") -> "FiniteSequence":
        return FiniteSequence(coeffs=np.convolve(self.coeffs, other.coeffs), offset=self.offset + other.offset)

    def involution(self) -> "FiniteSequence":
        """(a*)_n = conj(a_(-n))"""
        return FiniteSequence(coeffs=self.coeffs[::-1].conj(), offset=-(self.offset + self.coeffs.size - 1))


def gelfand_l1(a: FiniteSequence, z: complex, tol: Optional[Tolerance] = None) -> complex:
    """
    Характер phi_z(a) = sum a_n z^n алгебры l^1(Z)

    Args:
        a: Финитная последовательность
        z: Точка единичной окружности

    Returns:
        Значение преобразования Гельфанда в z
    """
    tol = tol or Tolerance()
    if abs(abs(z) - 1) > tol.bound(1.0):
        raise OffCircleError(f"|z| = {abs(z):.12g} != 1")
    powers = np.arange(a.offset, a.offset + a.coeffs.size)
    return complex(np.sum(a.coeffs * np.power(complex(z), powers)))


# Индуцированные представления

@dataclass(frozen=True, eq=False)
class InducedRep:
    """U_g f(x) = f(xg) на функциях с f(xi g) = L_xi f(g), заданных на представителях"""

    rep: Rep
    cosets: Tuple[Tuple[int, ...], ...]
    representatives: Tuple[int, ...]
    inducing_dim: int
    subgroup_elements: Tuple[int, ...]

    @property
    def index(self) -> int:
        return len(self.cosets)

    def coset_of(self, x: int) -> int:
        for j, coset in enumerate(self.cosets):
            if x in coset:
                return j
        raise NotSubgroupError(f"Элемент {x} не попал ни в один класс")

    def coset_action(self, g: int) -> List[int]:
        """sigma_g(j): класс, содержащий r_j g"""
        G = self.rep.group
        return [self.coset_of(G.multiply(r, g)) for r in self.representatives]

    def multiplication(self, psi: Sequence[complex]) -> np.ndarray:
        """P(psi) = diag(psi(Gamma r_j) I_d)"""
        psi = np.asarray(psi, dtype=complex)
        if psi.size != self.index:
            raise GroupMismatchError(f"Функция на классах должна иметь {self.index} значений")
        return np.kron(np.diag(psi), np.eye(self.inducing_dim))

    def translate(self, psi: Sequence[complex], g: int) -> np.ndarray:
        """psi(. g) на классах"""
        psi = np.asarray(psi, dtype=complex)
        return psi[self.coset_action(g)]

    def covariance_residual(self) -> float:
        """max ||U_g P(psi) U_g^-1 - P(psi(.g))|| по g и базису функций на классах"""
        G = self.rep.group
        worst = 0.0
        for j in range(self.index):
            psi = np.zeros(self.index)
            psi[j] = 1
            for g in range(G.order):
                U = self.rep.matrices[g]
                lhs = U @ self.multiplication(psi) @ self.rep.matrices[G.inverse(g)]
                worst = max(worst, max_norm(lhs - self.multiplication(self.translate(psi, g))))
        return worst


def induce(G: FiniteGroup, subset: Sequence[int], L: Rep) -> InducedRep:
    """
    Индуцированное представление Ind_Gamma^G L

    Args:
        G: Конечная группа
        subset: Элементы подгруппы Gamma (индексы G)
        L: Представление Gamma; его i-й элемент - sorted(subset)[i]

    Returns:
        InducedRep размерности [G:Gamma] dim(L)
    """
    members = tuple(sorted(set(subset)))
    cosets = G.right_cosets(members)
    if L.group.order != len(members):
        raise GroupMismatchError(f"Представление задано на группе порядка {L.group.order}, а |Gamma| = {len(members)}")
    position = {gamma: i for i, gamma in enumerate(members)}
    representatives = tuple(coset[0] for coset in cosets)
    coset_index = {x: j for j, coset in enumerate(cosets) for x in coset}

    d = L.dim
    k = len(cosets)
    matrices = []
    for g in range(G.order):
        U = np.zeros((k * d, k * d), dtype=complex)
        for j, r in enumerate(representatives):
            target = coset_index[G.multiply(r, g)]
            # r_j g = xi r_sigma(j)
            xi = G.multiply(G.multiply(r, g), G.inverse(representatives[target]))
            U[j * d:(j + 1) * d, target * d:(target + 1) * d] = L.matrices[position[xi]]
        matrices.append(U)

    logger.info(f"Индуцированное представление: индекс {k}, размерность {k * d}")
    return InducedRep(
        rep=Rep(group=G, matrices=tuple(matrices)),
        cosets=tuple(tuple(c) for c in cosets),
        representatives=representatives,
        inducing_dim=d,
        subgroup_elements=members,
    )


def direct_sum(*reps: Rep) -> Rep:
    group = reps[0].group
    if any(not rep.group.same_as(group) for rep in reps):
        raise GroupMismatchError("Прямая сумма представлений разных групп")
    return Rep(group=group, matrices=tuple(block_diag(*ms) for ms in zip(*(rep.matrices for rep in reps))))


# Группа ax+b

@dataclass(frozen=True)
class CoadjointPoint:
    """Точка [xi, eta] двойственного пространства алгебры Ли ax+b"""

    xi: float
    eta: float


@dataclass(frozen=True, eq=False)
class CoadjointOrbit:
    kind: OrbitKind
    point: CoadjointPoint
    samples: np.ndarray  # строки (xi, eta) точек Ad*_g(p)
    verified: bool

    def describe(self) -> str:
        if self.kind == OrbitKind.LINE:
            return f"line x={self.point.xi:g}"
        return f"fixed point ({self.point.xi:g}, {self.point.eta:g})"


def coadjoint_action(a: float, p: CoadjointPoint) -> CoadjointPoint:
    """Ad*_g с матрицей [[1, 0], [a, 1]]"""
    return CoadjointPoint(xi=p.xi, eta=a * p.xi + p.eta)


def coadjoint_orbit(
    p: CoadjointPoint,
    a_values: Optional[Sequence[float]] = None,
    tol: Optional[Tolerance] = None,
) -> CoadjointOrbit:
    """
    Классификация коприсоединенной орбиты

    Returns:
        Вертикальная прямая x = xi при xi != 0, иначе неподвижная точка
    """
    tol = tol or Tolerance()
    a_values = np.linspace(-5.0, 5.0, 21) if a_values is None else np.asarray(a_values, dtype=float)
    samples = np.array([[q.xi, q.eta] for q in (coadjoint_action(a, p) for a in a_values)])

    if abs(p.xi) > tol.bound(1.0):
        kind = OrbitKind.LINE
        verified = bool(np.all(np.abs(samples[:, 0] - p.xi) <= tol.bound(abs(p.xi))))
    else:
        kind = OrbitKind.POINT
        verified = bool(np.all(np.abs(samples - [p.xi, p.eta]) <= tol.bound(1.0 + abs(p.eta))))
    return CoadjointOrbit(kind=kind, point=p, samples=samples, verified=verified)


def modular_function(a: float, b: float = 0.0) -> float:
    """Delta(a, b) = d lambda_L / d lambda_R = 1/a"""
    return 1.0 / a


@dataclass(frozen=True)
class BumpFunction:
    """Гладкая финитная функция exp(-1/(1 - r^2)) на эллипсе вокруг center"""

    center_a: float = 1.0
    center_b: float = 0.0
    radius_a: float = 0.3
    radius_b: float = 0.3

    def __call__(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        r2 = ((np.asarray(a) - self.center_a) / self.radius_a) ** 2 + ((np.asarray(b) - self.center_b) / self.radius_b) ** 2
        inside = r2 < 1
        safe = np.where(inside, 1 - r2, 1.0)
        return np.where(inside, np.exp(-1.0 / safe), 0.0)

    def support_box(self) -> Tuple[float, float, float, float]:
        return (
            self.center_a - self.radius_a,
            self.center_a + self.radius_a,
            self.center_b - self.radius_b,
            self.center_b + self.radius_b,
        )


@dataclass(frozen=True)
class QuadratureGrid:
    """Прямоугольник [a_min, a_max] x [b_min, b_max] в полуплоскости a > 0"""

    a_min: float = 0.5
    a_max: float = 3.0
    b_min: float = -1.0
    b_max: float = 2.0
    points: int = 400

    def contains(self, box: Tuple[float, float, float, float]) -> bool:
        a_lo, a_hi, b_lo, b_hi = box
        return self.a_min <= a_lo and a_hi <= self.a_max and self.b_min <= b_lo and b_hi <= self.b_max

    def mesh(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        a = np.linspace(self.a_min, self.a_max, self.points)
        b = np.linspace(self.b_min, self.b_max, self.points)
        A, B = np.meshgrid(a, b, indexing="ij")
        return a, b, A, B


@dataclass(frozen=True)
class HaarCheckReport:
    left_residual: float
    right_residual: float
    left_integral: float
    right_integral: float
    modular_function: float
    modular_ratio: float
    error_bound: float

    def to_payload(self) -> dict:
        return dict(self.__dict__)


def axb_multiply(g: Tuple[float, float], h: Tuple[float, float]) -> Tuple[float, float]:
    """(a, b)(a', b') = (aa', ab' + b)"""
    return g[0] * h[0], g[0] * h[1] + g[1]


def axb_inverse(g: Tuple[float, float]) -> Tuple[float, float]:
    return 1.0 / g[0], -g[1] / g[0]


def _integrate(values: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    return float(trapezoid(trapezoid(values, b, axis=1), a))


def _error_estimate(values: np.ndarray, grid: QuadratureGrid) -> float:
    area = (grid.a_max - grid.a_min) * (grid.b_max - grid.b_min)
    second = max(np.max(np.abs(np.diff(values, 2, axis=0))), np.max(np.abs(np.diff(values, 2, axis=1))))
    return float(area * second / 12)


def axb_haar_check(
    f: Optional[BumpFunction] = None,
    h: Tuple[float, float] = (1.0, 0.0),
    grid: Optional[QuadratureGrid] = None,
) -> HaarCheckReport:
    """
    Численная проверка левой и правой инвариантности мер Хаара группы ax+b

    d lambda_L = da db / a^2, d lambda_R = da db / a, модулярная функция 1/a.

    Args:
        f: Пробная функция
        h: Элемент (a', b'), a' > 0
        grid: Область квадратуры

    Returns:
        HaarCheckReport с невязками левой и правой инвариантности
    """
    f = f or BumpFunction()
    grid = grid or QuadratureGrid()
    ah, bh = float(h[0]), float(h[1])
    if ah <= 0 or grid.a_min <= 0:
        raise SupportOutOfDomainError("Группа ax+b определена при a > 0")

    a_lo, a_hi, b_lo, b_hi = f.support_box()
    left_box = (ah * a_lo, ah * a_hi, ah * b_lo + bh, ah * b_hi + bh)
    shifts = (a_lo * bh, a_hi * bh)
    right_box = (a_lo * ah, a_hi * ah, b_lo + min(shifts), b_hi + max(shifts))
    for name, box in (("носитель f", f.support_box()), ("левый сдвиг", left_box), ("правый сдвиг", right_box)):
        if not grid.contains(box):
            raise SupportOutOfDomainError(f"{name} {tuple(round(x, 6) for x in box)} выходит за область квадратуры")

    a, b, A, B = grid.mesh()
    base = f(A, B)
    # h^-1 g = (a/a', (b - b')/a'), g h^-1 = (a/a', b - a b'/a')
    left_shifted = f(A / ah, (B - bh) / ah)
    right_shifted = f(A / ah, B - A * bh / ah)

    left_base = _integrate(base / A ** 2, a, b)
    right_base = _integrate(base / A, a, b)
    left_translated = _integrate(left_shifted / A ** 2, a, b)
    right_translated = _integrate(right_shifted / A, a, b)
    ratio = _integrate(right_shifted / A ** 2, a, b) / left_base

    error_bound = max(_error_estimate(base / A ** 2, grid), _error_estimate(left_shifted / A ** 2, grid))
    report = HaarCheckReport(
        left_residual=abs(left_translated - left_base),
        right_residual=abs(right_translated - right_base),
        left_integral=left_base,
        right_integral=right_base,
        modular_function=modular_function(ah, bh),
        modular_ratio=ratio,
        error_bound=error_bound,
    )
    logger.info(
        f"Хаар ax+b: левая невязка {report.left_residual:.2e}, правая {report.right_residual:.2e}, "
        f"модулярное отношение {ratio:.6f}"
    )
    return report
