import random
from fractions import Fraction

import pytest
from hypothesis import given, seed, settings, strategies as st

from k3mirror import linalg
from k3mirror.discform import (
    FiniteQuadraticForm,
    are_isomorphic,
    discriminant_form,
    fqf_direct_sum,
    fqf_negate,
    isotropic_elements,
    length,
    normalize,
    p_primary,
    quotient_form,
    verify_isometry,
)
from k3mirror.errors import DomainError
from k3mirror.zlattice import Lattice, direct_sum, make_standard, tree_lattice


def test_scaled_hyperbolic_plane():
    A = discriminant_form(make_standard("U(2)"))
    assert A.orders == (2, 2)
    assert A.order == 4
    # q vanishes on the generators, b pairs them to 1/2
    values = sorted(A.q_value(x) for x in A.elements())
    assert values == [0, 0, 0, 1]


def test_cyclic_form_values():
    A = discriminant_form(make_standard("<-6>"))
    assert A.order == 6
    assert A.q_value((1,)) == Fraction(-1, 6) % 2


def test_unimodular_is_trivial():
    assert discriminant_form(make_standard("E8+U")).order == 1


def test_odd_or_degenerate_rejected():
    with pytest.raises(DomainError):
        discriminant_form(Lattice(((1,),)))
    with pytest.raises(DomainError):
        discriminant_form(Lattice(((0, 0), (0, -2))))


def test_iso_e7_is_opposite_of_a1():
    # E7 and A1 are orthogonal complements in E8
    assert are_isomorphic(discriminant_form(make_standard("E7")), discriminant_form(make_standard("<2>"))) is not None
    assert are_isomorphic(discriminant_form(make_standard("E7")), discriminant_form(make_standard("<-2>"))) is None


def test_k3_dual_pair_has_opposite_forms():
    A = discriminant_form(tree_lattice(3, 3, 4))
    B = discriminant_form(tree_lattice(2, 3, 9))
    assert are_isomorphic(A, fqf_negate(B)) is not None


def test_witness_verifies():
    A = discriminant_form(make_standard("U+E8+E8+<-4>"))
    B = discriminant_form(make_standard("U+E8+D9"))
    w = are_isomorphic(A, B)
    assert w is not None and verify_isometry(A, B, w)


def test_p_primary_and_length():
    A = discriminant_form(make_standard("<-6>+U(2)"))
    assert p_primary(A, 2).order == 8
    assert p_primary(A, 3).order == 3
    assert length(A) == 3


def test_quotient_requires_isotropic():
    A = discriminant_form(make_standard("<-6>"))
    with pytest.raises(DomainError):
        quotient_form(A, [(1,)])


def test_overlattice_quotient():
    A = discriminant_form(make_standard("<-4>+<4>"))
    iso = [x for x in isotropic_elements(A) if A.element_order(x) == 4]
    assert iso
    Q = quotient_form(A, [iso[0]])
    assert Q.order == 1


def test_json_roundtrip():
    A = discriminant_form(make_standard("A_2+U(3)"))
    B = FiniteQuadraticForm.from_json(A.to_json())
    assert are_isomorphic(A, B) is not None


def _random_even(rng, n):
    while True:
        G = [[0] * n for _ in range(n)]
        for i in range(n):
            G[i][i] = 2 * rng.randint(-3, 3)
            for j in range(i + 1, n):
                G[i][j] = G[j][i] = rng.randint(-2, 2)
        if linalg.det(G) != 0:
            return Lattice(tuple(map(tuple, G)))


@seed(301)
@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 4))
def test_order_is_abs_det(s, n):
    L = _random_even(random.Random(s), n)
    A = discriminant_form(L)
    assert A.order == abs(L.det)
    A.check_consistency()


@seed(302)
@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_sum_of_forms_matches_lattice_sum(s):
    rng = random.Random(s)
    L, M = _random_even(rng, 2), _random_even(rng, 2)
    lhs = fqf_direct_sum(discriminant_form(L), discriminant_form(M))
    rhs = discriminant_form(direct_sum(L, M))
    assert are_isomorphic(normalize(lhs), normalize(rhs)) is not None


@seed(303)
@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_change_of_basis_gives_isomorphic_form(s):
    rng = random.Random(s)
    L = _random_even(rng, 3)
    U = linalg.identity(3)
    for _ in range(4):
        i, j = rng.sample(range(3), 2)
        c = rng.randint(-2, 2)
        U[i] = [a + c * b for a, b in zip(U[i], U[j])]
    G2 = linalg.matmul(linalg.matmul(U, L.matrix()), linalg.transpose(U))
    L2 = Lattice(tuple(map(tuple, G2)))
    assert are_isomorphic(discriminant_form(L), discriminant_form(L2)) is not None
