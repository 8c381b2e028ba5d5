import random

import pytest
from hypothesis import given, seed, settings, strategies as st

from k3mirror.errors import ParameterError
from k3mirror.fricke import (
    BinaryForm,
    SqrtInt,
    class_number,
    class_number_bruteforce,
    cusp_count,
    embed_A,
    embed_Aprime,
    excluded_count,
    fricke_counts,
    fricke_matrix,
    gram_fe_minus_g,
    gram_fg,
    is_integral,
    preserves,
    random_gamma0,
    random_star,
    reduced_forms,
    sqrt_matmul,
    wall_fixed_point,
    wall_identity_symbolic,
)

KNOWN_H = [1, 1, 1, 1, 2, 2, 1, 2, 2, 2, 3, 2, 2, 4, 2, 2, 4, 2, 3, 4]


def test_fricke_counts_level_four():
    assert fricke_counts(4) == {"orbit_count": 2, "cusp_count": 2, "excluded_count": 1, "class_number": 1}


def test_cusp_and_excluded_tables():
    assert [cusp_count(n) for n in range(1, 11)] == [1, 1, 1, 2, 1, 2, 1, 2, 2, 2]
    assert [excluded_count(n) for n in range(1, 11)] == [1, 1, 1, 1, 2, 2, 2, 2, 2, 2]


def test_class_numbers_known_values():
    assert [class_number(-4 * n) for n in range(1, 21)] == KNOWN_H
    assert class_number(-23) == 3
    assert class_number(-163) == 1


def test_reduced_forms_of_minus_twenty():
    forms = reduced_forms(-20)
    assert {(f.a, f.b, f.c) for f in forms} == {(1, 0, 5), (2, 2, 3)}


def test_binary_form_reduce():
    f = BinaryForm(7, 12, 6)
    r = f.reduce()
    assert r.is_reduced and r.discriminant == f.discriminant


def test_bad_discriminant():
    with pytest.raises((ParameterError, ValueError)):
        class_number(-5)


@seed(601)
@settings(max_examples=40, deadline=None)
@given(st.integers(3, 400))
def test_class_number_oracles_agree(k):
    D = -k
    if D % 4 not in (0, 1):
        return
    assert class_number(D) == class_number_bruteforce(D)


def test_sqrtint_arithmetic():
    r = SqrtInt(0, 1, 3)
    assert r * r == SqrtInt(3, 0, 3)
    assert SqrtInt(0, 1, 4) == SqrtInt(2, 0, 4)
    assert (r + 1) * (r - 1) == SqrtInt(2, 0, 3)


def test_fricke_images():
    for n in (1, 2, 3, 7):
        assert embed_Aprime(fricke_matrix(n), n) == [[0, 0, 1], [0, -1, 0], [1, 0, 0]]
        assert preserves(embed_A(fricke_matrix(n), n), gram_fg(n))


def test_translation_image():
    n = 5
    assert embed_Aprime([[1, 1], [0, 1]], n) == [[1, -2 * n, n], [0, 1, -1], [0, 0, 1]]


def test_a_of_rotation_is_integral():
    for n in (1, 2, 3, 6):
        assert is_integral(embed_A([[0, -1], [1, 0]], n))


@seed(602)
@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([1, 2, 3, 5, 6, 10]))
def test_homomorphism_and_isometry(s, n):
    rng = random.Random(s)
    g1, g2 = random_star(n, rng), random_star(n, rng)
    assert embed_A(sqrt_matmul(g1, g2), n) == sqrt_matmul(embed_A(g1, n), embed_A(g2, n))
    h = random_gamma0(n, rng)
    M = embed_Aprime(h, n)
    assert is_integral(M) and preserves(M, gram_fe_minus_g(n))


def test_walls():
    assert wall_fixed_point(1, (-1, 1, 0)).holds
    assert wall_fixed_point(5, (-6, 1, 1)).holds
    assert wall_identity_symbolic()
