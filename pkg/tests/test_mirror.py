
import pytest
from hypothesis import given, seed, settings, strategies as st

from k3mirror.embed import Embedding, genus_equal
from k3mirror.errors import DomainError
from k3mirror.mirror import (
    double_mirror,
    k3_dual,
    kummer_wedge_identity,
    mirror_lattice,
    mirror_of_polarization,
    rank_relation,
    tube_alpha,
    wedge_in_basis,
    zmf_components,
    zmf_isometry,
    zmf_lattice,
)
from k3mirror.polys import Poly, QComplex
from k3mirror.zlattice import k3_lattice, make_standard, tree_lattice


def _k3(**coords):
    v = [0] * 22
    for k, x in coords.items():
        v[int(k[1:])] = x
    return v


@pytest.mark.parametrize("n", [1, 2, 5])
def test_polarization_mirror(n):
    E = Embedding.from_vectors(k3_lattice(), [_k3(i0=1, i1=n)])
    res = mirror_of_polarization(E, _k3(i2=1))
    assert res.m == 1
    assert res.check_lattice.rank == 19
    assert genus_equal(res.check_lattice, make_standard(f"U+E8+E8+<{-2 * n}>")).equal
    assert rank_relation(E.sub, res.check_lattice)


def test_double_mirror_returns_polarization():
    E = Embedding.from_vectors(k3_lattice(), [_k3(i0=1, i1=3)])
    dm = double_mirror(E, _k3(i2=1))
    assert dm.second.check_lattice.gram == ((6,),)


def test_mirror_requires_isotropic():
    with pytest.raises(DomainError):
        mirror_lattice(make_standard("U+<6>"), [1, 1, 0])


def test_rank_19_closure():
    assert mirror_lattice(make_standard("U+<6>"), [1, 0, 0]).check_lattice.gram == ((6,),)


def test_k3_dual_self():
    assert k3_dual(tree_lattice(2, 3, 7), tree_lattice(2, 3, 7))
    assert not k3_dual(tree_lattice(2, 3, 7), tree_lattice(2, 3, 8))


def test_zmf_identity_and_components():
    M = make_standard("<4>")
    iso = zmf_isometry(2, M, [[1]], [2])
    assert iso.preserves_gram()
    s, v = zmf_components(iso, 2)
    assert s == [[1]] and list(v) == [2]
    assert zmf_lattice(2, M).rank == 3


def test_zmf_rejects_bad_translation():
    with pytest.raises(DomainError):
        zmf_isometry(3, make_standard("<4>"), [[1]], [1])


def test_wedge_numeric_and_symbolic():
    assert all(kummer_wedge_identity(n) for n in range(1, 8))
    assert kummer_wedge_identity(None)
    w = wedge_in_basis([1, 0, 0, 0], [0, 1, 0, 0])
    assert w["f1"] == 1 and sum(abs(x) for x in w.values()) == 1


def test_poly_reduction():
    s, i = Poly.ring("s", "i")
    expr = ((s * i) ** 2).reduce_square("s", 3).reduce_square("i", -1)
    assert expr == Poly.const(s.vars, -3)


@seed(501)
@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), min_size=3, max_size=3))
def test_tube_image_isotropic(entries):
    N = make_standard("U+U+<-4>")
    z = [QComplex(0), QComplex(0)] + [QComplex(a, b) for a, b in entries]
    img = tube_alpha(N, [1, 0, 0, 0, 0], [0, 1, 0, 0, 0], z)
    assert img.mu_mu == QComplex(0)
    assert img.mu_mubar == 2 * img.y_norm


def test_tube_rejects_non_orthogonal():
    N = make_standard("U+<-4>")
    with pytest.raises(DomainError):
        tube_alpha(N, [1, 0, 0], [0, 1, 0], [QComplex(1), 0, 0])
