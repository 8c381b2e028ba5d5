"""End-to-end acceptance checks, one test per criterion.

Each test prints a single ``PASS``/``FAIL criterion N`` line with the
wall time, then asserts both correctness and the time limit.  Run with
``pytest tests/test_acceptance.py -v`` or directly as a script.
"""

import random
import time

from k3mirror import linalg
from k3mirror.catalog import (
    _degree_embedding,
    _enriques_embedding,
    _k3_vector,
    arnold_table,
    catalog_weight_systems,
    find_base_change,
    random_orthogonal_star,
)
from k3mirror.discform import (
    acts_trivially_on_discriminant,
    are_isomorphic,
    discriminant_form,
    fqf_negate,
    isotropic_elements,
    quotient_form,
)
from k3mirror.embed import Embedding, complement_of_vectors, genus_equal, orthogonal_complement
from k3mirror.fricke import (
    class_number,
    class_number_bruteforce,
    cusp_count,
    embed_A,
    embed_Aprime,
    excluded_count,
    fricke_matrix,
    gram_fe_minus_g,
    gram_fg,
    is_integral,
    preserves,
    random_gamma0,
    random_star,
    sqrt_matmul,
)
from k3mirror.mirror import (
    double_mirror,
    k3_dual,
    kummer_wedge_identity,
    mirror_of_polarization,
    tube_alpha,
    zmf_isometry,
    zmf_lattice,
)
from k3mirror.polys import QComplex
from k3mirror.toric import (
    WeightSystem,
    delta_of_weights,
    is_reflexive,
    pi_group_order,
    pi_group_structure,
    polar_dual,
)
from k3mirror.zlattice import (
    Lattice,
    direct_sum,
    inner,
    k3_lattice,
    make_standard,
    rescale,
    root_count,
    signature,
    tree_lattice,
)


def _report(capsys, number, ok, elapsed, limit, detail=""):
    timed_ok = limit is None or elapsed < limit
    verdict = "PASS" if ok and timed_ok else "FAIL"
    budget = f" (limit {limit:g} s)" if limit is not None else ""
    line = f"{verdict} criterion {number}: {elapsed:.2f} s{budget} {detail}".rstrip()
    if capsys is not None:
        with capsys.disabled():
            print("\n" + line)
    else:
        print(line)
    assert ok, line
    assert timed_ok, line


def test_criterion_01_strange_duality(capsys):
    start = time.perf_counter()
    rows = arnold_table()
    by_triple = {r.triple: r for r in rows}
    passed = 0
    for row in rows:
        partner = by_triple.get(row.dual_triple)
        involution = partner is not None and partner.dual_triple == row.triple
        S, S2 = tree_lattice(*row.triple), tree_lattice(*row.dual_triple)
        opposite = are_isomorphic(discriminant_form(S), fqf_negate(discriminant_form(S2))) is not None
        if involution and S.rank + S2.rank == 20 and opposite and k3_dual(S, S2):
            passed += 1
    elapsed = time.perf_counter() - start
    _report(capsys, 1, len(rows) == 14 and passed == 14, elapsed, 5, f"{passed}/{len(rows)}")


def test_criterion_02_mirror_chain(capsys):
    start = time.perf_counter()
    passed = 0
    for n in range(1, 11):
        E = _degree_embedding(n)
        f = _k3_vector(i2=1)
        res = mirror_of_polarization(E, f)
        if genus_equal(res.check_lattice, make_standard(f"U+E8+E8+<{-2 * n}>")).equal:
            passed += 1
        dm = double_mirror(E, f)
        if genus_equal(dm.second.check_lattice, make_standard(f"<{2 * n}>")).equal:
            passed += 1
    elapsed = time.perf_counter() - start
    _report(capsys, 2, passed == 20, elapsed, 10, f"{passed}/20")


def test_criterion_03_lattice_identities(capsys):
    start = time.perf_counter()
    d9 = genus_equal(make_standard("U+E8+E8+<-4>"), make_standard("U+E8+D9"))
    e7a2 = genus_equal(make_standard("U+E8+E8+<-6>"), make_standard("U+E8+E7+A2"))
    A = discriminant_form(make_standard("E6+E6+A5+U"))
    target = discriminant_form(make_standard("U+E8+E8+<-6>"))
    overlattice = False
    for x in isotropic_elements(A):
        if A.element_order(x) == 3 and are_isomorphic(quotient_form(A, [x]), target) is not None:
            overlattice = True
            break
    elapsed = time.perf_counter() - start
    ok = d9.equal and d9.promoted and e7a2.equal and e7a2.promoted and overlattice
    _report(capsys, 3, ok, elapsed, 2)


def test_criterion_04_fricke_numerics(capsys):
    start = time.perf_counter()
    ok = all(excluded_count(n) == 1 for n in range(1, 5))
    ok &= cusp_count(4) == 2
    primes = [p for p in range(2, 32) if all(p % q for q in range(2, p))]
    ok &= all(cusp_count(p) == 1 for p in primes)
    ok &= all(class_number(-4 * n) == class_number_bruteforce(-4 * n) for n in range(1, 21))
    elapsed = time.perf_counter() - start
    _report(capsys, 4, ok, elapsed, 5)


def test_criterion_05_matrix_embeddings(capsys):
    start = time.perf_counter()
    rng = random.Random(20240501)
    ok = True
    for _ in range(100):
        n = rng.choice([1, 2, 3, 5, 6])
        g = random_gamma0(n, rng)
        M = embed_Aprime(g, n)
        G = gram_fe_minus_g(n)
        ok &= is_integral(M) and preserves(M, G)
        ok &= acts_trivially_on_discriminant(Lattice(tuple(map(tuple, G))), M)
    for n in (1, 2, 3, 5, 6):
        ok &= embed_Aprime(fricke_matrix(n), n) == [[0, 0, 1], [0, -1, 0], [1, 0, 0]]
    for _ in range(100):
        n = rng.choice([1, 2, 3, 5, 6, 7])
        g1, g2 = random_star(n, rng), random_star(n, rng)
        ok &= embed_A(sqrt_matmul(g1, g2), n) == sqrt_matmul(embed_A(g1, n), embed_A(g2, n))
        ok &= preserves(embed_A(g1, n), gram_fg(n))
    elapsed = time.perf_counter() - start
    _report(capsys, 5, ok, elapsed, None)


def test_criterion_06_kummer_wedge(capsys):
    start = time.perf_counter()
    ok = kummer_wedge_identity(None)
    elapsed = time.perf_counter() - start
    _report(capsys, 6, ok, elapsed, 1)


def test_criterion_07_group_law(capsys):
    start = time.perf_counter()
    rng = random.Random(77)
    ok = True
    for _ in range(100):
        name = rng.choice(["<2>", "<4>", "<6>", "<10>", "E8(2)+U(2)"])
        m = rng.choice([1, 2])
        M, s1 = random_orthogonal_star(name, rng)
        _, s2 = random_orthogonal_star(name, rng)
        v1 = [m * rng.randint(-3, 3) for _ in range(M.rank)]
        v2 = [m * rng.randint(-3, 3) for _ in range(M.rank)]
        A1 = zmf_isometry(m, M, s1, v1)
        A2 = zmf_isometry(m, M, s2, v2)
        big = zmf_lattice(m, M)
        f = [1] + [0] * (M.rank + 1)
        ok &= A1.preserves_gram() and A1.apply(f) == f
        ok &= acts_trivially_on_discriminant(big, A1.rows())
        composite = zmf_isometry(m, M, linalg.matmul(s2, s1), [a + b for a, b in zip(linalg.matvec(s2, v1), v2)])
        ok &= (A2 @ A1).matrix == composite.matrix
    elapsed = time.perf_counter() - start
    _report(capsys, 7, ok, elapsed, None)


def test_criterion_08_toric(capsys):
    start = time.perf_counter()
    ok = True
    for w, order in (((1, 1, 1, 1), 16), ((1, 3, 8, 12), 2), ((1, 6, 14, 21), 1)):
        ws = WeightSystem(w)
        structure = pi_group_structure(ws)
        prod = 1
        for s in structure:
            prod *= s
        ok &= pi_group_order(ws) == order == prod
    systems = catalog_weight_systems()
    ok &= len(systems) == 12
    for ws in systems:
        D = delta_of_weights(ws)
        ok &= is_reflexive(D) and polar_dual(polar_dual(D)) == D
    elapsed = time.perf_counter() - start
    _report(capsys, 8, ok, elapsed, 2)


def test_criterion_09_enriques_kummer(capsys):
    start = time.perf_counter()
    E = _enriques_embedding()
    complement = complement_of_vectors(E.ambient, E.columns())[0]
    ok = genus_equal(complement, make_standard("E8(2)+U(2)+U")).equal
    self_mirror = mirror_of_polarization(E, _k3_vector(i4=1))
    ok &= genus_equal(self_mirror.check_lattice, make_standard("E8(2)+U(2)")).equal
    u2 = mirror_of_polarization(E, _k3_vector(i0=1, i2=-1))
    ok &= u2.m == 2 and genus_equal(u2.check_lattice, make_standard("U+E8(2)")).equal
    G = make_standard("U(2)+<-4>").matrix()
    T = [[0, 2, 2], [2, 0, 2], [2, 2, 0]]
    P = find_base_change(G, T, 3)
    ok &= P is not None and linalg.matmul(linalg.matmul(linalg.transpose(P), G), P) == T
    elapsed = time.perf_counter() - start
    _report(capsys, 9, ok, elapsed, 30)


def _random_even_lattice(rng, rank):
    while True:
        G = [[0] * rank for _ in range(rank)]
        for i in range(rank):
            G[i][i] = 2 * rng.randint(-3, 3)
            for j in range(i + 1, rank):
                G[i][j] = G[j][i] = rng.randint(-2, 2)
        if linalg.det(G) != 0:
            return Lattice(tuple(map(tuple, G)))


def test_criterion_10_properties(capsys):
    start = time.perf_counter()
    rng = random.Random(1010)
    ok = True
    for _ in range(60):
        L = _random_even_lattice(rng, rng.randint(1, 4))
        ok &= discriminant_form(L).order == abs(L.det)
        K = _random_even_lattice(rng, rng.randint(1, 3))
        sL, sK = signature(L), signature(K)
        sS = signature(direct_sum(L, K))
        ok &= (sS.pos, sS.neg) == (sL.pos + sK.pos, sL.neg + sK.neg)
        k = rng.choice([-3, -2, -1, 2, 3])
        sR = signature(rescale(L, k))
        ok &= (sR.pos, sR.neg) == ((sL.pos, sL.neg) if k > 0 else (sL.neg, sL.pos))

    amb = make_standard("U+U+E8")
    for _ in range(40):
        v = [rng.randint(-3, 3) for _ in range(amb.rank)]
        if inner(amb, v, v) == 0 or linalg.gcd_list(v) != 1:
            continue
        E = Embedding.from_vectors(amb, [v])
        C, _ = orthogonal_complement(E)
        s_sub, s_c, s_a = signature(E.sub), signature(C), signature(amb)
        ok &= C.rank + 1 == amb.rank
        ok &= (s_sub.pos + s_c.pos, s_sub.neg + s_c.neg) == (s_a.pos, s_a.neg)

    N = make_standard("U+U+<-4>")
    for _ in range(40):
        z = [QComplex(0), QComplex(0)] + [
            QComplex(rng.randint(-5, 5), rng.randint(-5, 5)) for _ in range(3)
        ]
        img = tube_alpha(N, [1, 0, 0, 0, 0], [0, 1, 0, 0, 0], z)
        ok &= img.mu_mu == QComplex(0)

    ok &= root_count(make_standard("E8")).count == 240
    ok &= signature(k3_lattice()) == (3, 19)
    elapsed = time.perf_counter() - start
    _report(capsys, 10, ok, elapsed, 30)


if __name__ == "__main__":
    import sys

    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion")]
    failed = 0
    for t in tests:
        try:
            t(None)
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
