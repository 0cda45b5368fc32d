"""
Тесты конечных групп, ДПФ, индуцированных представлений и группы ax+b
"""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from config import OrbitKind
from services.commutant import commutant
from services.groups import (
    CoadjointPoint,
    FiniteGroup,
    FiniteSequence,
    GroupAlgebraElement,
    QuadratureGrid,
    axb_haar_check,
    axb_inverse,
    axb_multiply,
    character_inner,
    coadjoint_orbit,
    cyclic_characters,
    cyclic_convolution,
    cyclic_group,
    dft_cyclic,
    dft_matrix,
    direct_product,
    gelfand_l1,
    heisenberg_as_semidirect,
    heisenberg_group,
    heisenberg_index,
    induce,
    involution,
    modular_function,
    one_dimensional_rep,
    regular_representation,
    semidirect_product,
    subgroup,
)
from utils.errors import (
    InvalidGroupError,
    NotAnActionError,
    NotSubgroupError,
    OffCircleError,
    SupportOutOfDomainError,
)


def test_non_invertible_table_rejected():
    with pytest.raises(InvalidGroupError):
        FiniteGroup(mult=np.array([[0, 1], [1, 1]]))


def test_cyclic_group_basics():
    Z5 = cyclic_group(5)
    assert Z5.order == 5
    assert Z5.identity == 0
    assert Z5.inverse(2) == 3
    assert Z5.is_abelian()


def test_symmetric_group_as_semidirect_product():
    S3 = semidirect_product(cyclic_group(3), cyclic_group(2), {0: [0, 1, 2], 1: [0, 2, 1]})
    assert S3.order == 6
    assert not S3.is_abelian()
    assert S3.center() == [S3.identity]


def test_invalid_action_rejected():
    with pytest.raises(NotAnActionError):
        semidirect_product(cyclic_group(3), cyclic_group(2), {0: [0, 1, 2], 1: [1, 0, 2]})


def test_direct_product_is_abelian():
    G = direct_product(cyclic_group(2), cyclic_group(3))
    assert G.order == 6
    assert G.is_abelian()


def test_heisenberg_group_law():
    p = 3
    H = heisenberg_group(p)
    assert H.order == 27
    assert not H.is_abelian()
    g = heisenberg_index(p, 1, 0, 0)
    h = heisenberg_index(p, 0, 1, 0)
    assert H.multiply(g, h) == heisenberg_index(p, 1, 1, 1)
    assert H.multiply(h, g) == heisenberg_index(p, 1, 1, 0)
    assert sorted(H.center()) == [heisenberg_index(p, 0, 0, c) for c in range(p)]


def test_heisenberg_as_semidirect_product():
    G = heisenberg_as_semidirect(3)
    assert G.order == 27
    assert not G.is_abelian()
    assert len(G.center()) == 3


def test_group_algebra_delta_and_involution():
    G = heisenberg_group(3)
    g, h = 5, 11
    product = GroupAlgebraElement.delta(G, g) * GroupAlgebraElement.delta(G, h)
    assert_allclose(product.coeffs, GroupAlgebraElement.delta(G, G.multiply(g, h)).coeffs)
    assert_allclose(involution(GroupAlgebraElement.delta(G, g)).coeffs, GroupAlgebraElement.delta(G, G.inverse(g)).coeffs)


def test_regular_representation_integrates_convolution(rng):
    G = heisenberg_group(2)
    R = regular_representation(G)
    assert R.is_valid()
    a = GroupAlgebraElement(G, rng.standard_normal(G.order))
    b = GroupAlgebraElement(G, rng.standard_normal(G.order))
    assert_allclose(R.integrate(a * b), R.integrate(a) @ R.integrate(b), atol=1e-10)
    assert_allclose(R.integrate(involution(a)), R.integrate(a).conj().T, atol=1e-10)


def test_dft_is_unitary_and_parseval(rng):
    N = 8
    U = dft_matrix(N)
    assert_allclose(U @ U.conj().T, np.eye(N), atol=1e-12)
    f = rng.standard_normal(N) + 1j * rng.standard_normal(N)
    assert_allclose(dft_cyclic(f), U @ f, atol=1e-12)
    assert np.linalg.norm(dft_cyclic(f)) == pytest.approx(np.linalg.norm(f))


def test_dft_diagonalizes_convolution(rng):
    N = 6
    a = rng.standard_normal(N)
    b = rng.standard_normal(N)
    lhs = dft_cyclic(cyclic_convolution(a, b))
    assert_allclose(lhs, np.sqrt(N) * dft_cyclic(a) * dft_cyclic(b), atol=1e-10)


def test_cyclic_characters_orthonormal():
    chi = cyclic_characters(5)
    for k in range(5):
        for l in range(5):
            assert character_inner(chi[k], chi[l]) == pytest.approx(1.0 if k == l else 0.0, abs=1e-12)


def test_gelfand_transform_is_character():
    a = FiniteSequence(coeffs=np.array([1.0, -2.0, 0.5]), offset=-1)
    b = FiniteSequence(coeffs=np.array([0.3, 1j]), offset=2)
    for z in np.exp(2j * np.pi * np.arange(16) / 16):
        assert gelfand_l1(a.convolve(b), z) == pytest.approx(gelfand_l1(a, z) * gelfand_l1(b, z))
        assert gelfand_l1(a.involution(), z) == pytest.approx(np.conj(gelfand_l1(a, z)))
        assert abs(gelfand_l1(a, z)) <= a.l1_norm() + 1e-12
    with pytest.raises(OffCircleError):
        gelfand_l1(a, 2.0)


def test_induced_from_index_two_subgroup_of_z4():
    G = cyclic_group(4)
    L = one_dimensional_rep(subgroup(G, [0, 2]), [1.0, -1.0])
    induced = induce(G, [0, 2], L)
    assert induced.index == 2
    assert induced.rep.dim == 2
    assert induced.rep.is_valid()
    assert induced.covariance_residual() < 1e-12
    character = induced.rep.character()
    assert_allclose(character, [2, 0, -2, 0], atol=1e-12)
    chi = cyclic_characters(4)
    products = [character_inner(chi[l], character) for l in range(4)]
    assert_allclose(products, [0, 1, 0, 1], atol=1e-12)


def test_induced_heisenberg_representation_is_irreducible():
    p = 3
    G = heisenberg_group(p)
    members = list(range(p * p))
    omega = np.exp(2j * np.pi / p)
    L = one_dimensional_rep(subgroup(G, members), [omega ** (idx % p) for idx in members])
    induced = induce(G, members, L)
    assert induced.rep.dim == p
    assert induced.rep.is_valid()
    assert induced.rep.is_unitary()
    assert induced.covariance_residual() < 1e-10
    character = induced.rep.character()
    assert character_inner(character, character) == pytest.approx(1.0)
    assert commutant(list(induced.rep.matrices)).dimension == 1


def test_induce_requires_subgroup():
    G = cyclic_group(4)
    L = one_dimensional_rep(cyclic_group(2), [1.0, 1.0])
    with pytest.raises(NotSubgroupError):
        induce(G, [0, 1], L)


def test_coadjoint_orbits():
    line = coadjoint_orbit(CoadjointPoint(xi=1.0, eta=0.0))
    assert line.kind == OrbitKind.LINE
    assert line.verified
    assert line.describe() == "line x=1"
    point = coadjoint_orbit(CoadjointPoint(xi=0.0, eta=2.0))
    assert point.kind == OrbitKind.POINT
    assert point.verified


def test_axb_group_operations():
    g = (2.0, 1.0)
    assert axb_multiply(g, axb_inverse(g)) == pytest.approx((1.0, 0.0))
    assert axb_multiply((2.0, 1.0), (3.0, 4.0)) == pytest.approx((6.0, 9.0))
    assert modular_function(4.0) == pytest.approx(0.25)


def test_axb_haar_measures():
    report = axb_haar_check(h=(2.0, 1.0))
    assert report.left_residual <= 1e-4 * report.left_integral
    assert report.right_residual <= 1e-4 * report.right_integral
    assert report.modular_ratio == pytest.approx(0.5, rel=1e-4)
    assert report.modular_function == pytest.approx(0.5)


def test_axb_support_outside_grid():
    with pytest.raises(SupportOutOfDomainError):
        axb_haar_check(h=(10.0, 0.0), grid=QuadratureGrid(points=50))
