import json

import pytest
from hypothesis import given, seed, settings, strategies as st

from k3mirror.errors import DomainError, ParameterError
from k3mirror.zlattice import (
    Lattice,
    direct_sum,
    div,
    inner,
    is_definite,
    is_even,
    k3_lattice,
    make_standard,
    rescale,
    root_count,
    signature,
    tree_lattice,
)


@pytest.mark.parametrize(
    "name, rank, det, sig",
    [
        ("U", 2, -1, (1, 1)),
        ("U(2)", 2, -4, (1, 1)),
        ("E8", 8, 1, (0, 8)),
        ("E8(2)", 8, 256, (0, 8)),
        ("<-4>", 1, -4, (0, 1)),
        ("A_2", 2, 3, (0, 2)),
        ("D4", 4, 4, (0, 4)),
        ("E7", 7, -2, (0, 7)),
        ("L_K3", 22, -1, (3, 19)),
        ("U+E8+E8+<-6>", 19, 6, (1, 18)),
    ],
)
def test_standard_lattices(name, rank, det, sig):
    L = make_standard(name)
    assert L.rank == rank
    assert L.det == det
    assert tuple(signature(L)) == sig
    assert is_even(L)


def test_tree_lattices():
    assert tree_lattice(2, 3, 7).rank == 10
    assert tree_lattice(2, 3, 7).det == -1
    assert tree_lattice(3, 3, 4).det == -3
    assert tree_lattice(2, 3, 5).det == 1  # E8


@pytest.mark.parametrize("name, roots", [("E8", 240), ("E7", 126), ("E6", 72), ("D4", 24), ("A_2", 6), ("E8(2)", 0)])
def test_root_counts(name, roots):
    rc = root_count(make_standard(name))
    assert rc.count == roots and not rc.truncated


def test_root_count_indefinite_is_flagged():
    rc = root_count(make_standard("U+<-2>"))
    assert rc.truncated


def test_div_and_inner():
    L = make_standard("U(3)+<-4>")
    assert div(L, [1, 0, 0]) == 3
    assert div(L, [0, 0, 1]) == 4
    assert inner(L, [1, 0, 0], [0, 1, 0]) == 3


def test_invalid_inputs():
    with pytest.raises(ParameterError):
        Lattice(((0, 1), (2, 0)))
    with pytest.raises((ParameterError, DomainError)):
        make_standard("Q17")
    with pytest.raises((ParameterError, DomainError)):
        rescale(make_standard("U"), 0)


def test_json_roundtrip():
    L = make_standard("U+A_2")
    assert Lattice.from_json(json.loads(json.dumps(L.to_json()))) == L


def test_k3_lattice_is_unimodular_even():
    K = k3_lattice()
    assert abs(K.det) == 1 and is_even(K) and not is_definite(K)


names = st.sampled_from(["U", "U(2)", "E8", "A_2", "D4", "<-2>", "<4>", "<-6>", "E6", "A_3"])


@seed(201)
@settings(max_examples=50, deadline=None)
@given(names, names, st.sampled_from([-3, -2, -1, 2, 3]))
def test_signature_laws(a, b, k):
    A, B = make_standard(a), make_standard(b)
    sA, sB = signature(A), signature(B)
    s = signature(direct_sum(A, B))
    assert (s.pos, s.neg) == (sA.pos + sB.pos, sA.neg + sB.neg)
    sR = signature(rescale(A, k))
    assert (sR.pos, sR.neg) == ((sA.pos, sA.neg) if k > 0 else (sA.neg, sA.pos))
    assert direct_sum(A, B).det == A.det * B.det
    assert rescale(A, k).det == k ** A.rank * A.det
