"""Embedded example data and the batch verifier that re-derives every claim."""

from __future__ import annotations

import itertools
import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Callable, Optional

from . import linalg
from .discform import (
    acts_trivially_on_discriminant,
    are_isomorphic,
    discriminant_form,
    isotropic_elements,
    quotient_form,
)
from .embed import Embedding, complement_of_vectors, genus_equal, nikulin_unique, Verdict
from .errors import K3MirrorError
from .fricke import (
    class_number,
    class_number_bruteforce,
    cusp_count,
    embed_A,
    embed_Aprime,
    fricke_counts,
    fricke_matrix,
    gram_fe_minus_g,
    gram_fg,
    is_integral,
    preserves,
    random_gamma0,
    random_star,
    sqrt_matmul,
    wall_fixed_point,
    wall_identity_symbolic,
)
from .mirror import (
    double_mirror,
    k3_dual,
    kummer_wedge_identity,
    mirror_lattice,
    mirror_of_polarization,
    rank_relation,
    zmf_isometry,
    zmf_lattice,
)
from .toric import (
    WeightSystem,
    delta_of_weights,
    is_reflexive,
    pi_group_order,
    pi_group_structure,
    polar_dual,
    strange_duality_weights,
)
from .zlattice import Lattice, k3_lattice, make_standard, root_count, signature, tree_lattice


@dataclass(frozen=True)
class ArnoldRow:
    name: str
    triple: tuple
    weights: tuple
    degree: int
    dual_triple: tuple
    d0: Optional[int]
    polynomial: str

    def to_json(self):
        return {
            "name": self.name,
            "triple": list(self.triple),
            "weights": list(self.weights),
            "degree": self.degree,
            "dual_triple": list(self.dual_triple),
            "d0": self.d0,
            "polynomial": self.polynomial,
        }


@lru_cache(maxsize=1)
def _data():
    text = resources.files("k3mirror").joinpath("data/arnold.json").read_text()
    return json.loads(text)


def arnold_table():
    return [
        ArnoldRow(r["name"], tuple(r["triple"]), tuple(r["weights"]), r["degree"],
                  tuple(r["dual_triple"]), r["d0"], r["polynomial"])
        for r in _data()["arnold"]
    ]


def catalog_weight_systems():
    """Weights from every row with a d0 entry, plus the three extra systems."""
    out = [WeightSystem(tuple(w)) for w in _data()["extra_weight_systems"]]
    for row in arnold_table():
        if row.d0 is not None:
            out.append(strange_duality_weights(row.triple, row.d0))
    return out


# ------------------------------------------------------------ claims

PASS, FAIL, UNKNOWN = "pass", "fail", "unknown"


@dataclass(frozen=True)
class Claim:
    id: str
    ref: str
    fn: Callable
    args: tuple = ()


def _status(ok):
    return PASS if ok else FAIL


def check_strange_duality(name):
    rows = {r.name: r for r in arnold_table()}
    row = rows[name]
    partner = next((r for r in rows.values() if r.triple == row.dual_triple), None)
    involution = partner is not None and partner.dual_triple == row.triple
    S, S2 = tree_lattice(*row.triple), tree_lattice(*row.dual_triple)
    rank_sum = S.rank + S2.rank
    dual = k3_dual(S, S2)
    ev = {
        "triple": list(row.triple),
        "dual_triple": list(row.dual_triple),
        "involution": involution,
        "rank_sum": rank_sum,
        "det": S.det,
        "det_dual": S2.det,
        "discriminant_group": discriminant_form(S).describe(),
        "k3_dual": dual,
    }
    return _status(involution and rank_sum == 20 and dual), ev


def _k3_vector(**coords):
    v = [0] * 22
    for k, x in coords.items():
        v[int(k[1:])] = x
    return v


def _degree_embedding(n):
    return Embedding.from_vectors(k3_lattice(), [_k3_vector(i0=1, i1=n)])


def check_mirror(n):
    res = mirror_of_polarization(_degree_embedding(n), _k3_vector(i2=1))
    target = make_standard(f"U+E8+E8+<{-2 * n}>")
    ge = genus_equal(res.check_lattice, target)
    ev = {"m": res.m, "rank": res.check_lattice.rank, "det": res.check_lattice.det,
          "target": str(target), "genus_equal": ge.equal, "promoted": ge.promoted,
          "rank_relation": rank_relation(make_standard(f"<{2 * n}>"), res.check_lattice)}
    return _status(ge.equal and res.m == 1 and ev["rank_relation"]), ev


def check_double_mirror(n):
    dm = double_mirror(_degree_embedding(n), _k3_vector(i2=1))
    back = dm.second.check_lattice
    ge = genus_equal(back, make_standard(f"<{2 * n}>"))
    ev = {"gram": [list(r) for r in back.gram], "genus_equal": ge.equal}
    return _status(ge.equal), ev


def check_genus(a, b):
    A, B = make_standard(a), make_standard(b)
    ge = genus_equal(A, B)
    return _status(ge.equal and ge.promoted), {"lhs": a, "rhs": b, **ge.to_json()}


def check_overlattice():
    A = discriminant_form(make_standard("E6+E6+A5+U"))
    target = discriminant_form(make_standard("U+E8+E8+<-6>"))
    hits = []
    for x in isotropic_elements(A):
        if A.element_order(x) != 3:
            continue
        Q = quotient_form(A, [x])
        if Q.order == 6 and are_isomorphic(Q, target) is not None:
            hits.append(list(x))
    ev = {"group_order": A.order, "matching_subgroups": len(hits), "example_generator": hits[0] if hits else None}
    return _status(bool(hits)), ev


def check_rank20(name, expected_det):
    L = make_standard(name)
    sig = signature(L)
    ok = tuple(sig) == (1, 19) and L.det == expected_det
    return _status(ok), {"lattice": name, "signature": list(sig), "det": L.det}


def _enriques_embedding():
    K = k3_lattice()
    # U1 = 0,1  U2 = 2,3  U3 = 4,5  E8 copies 6..13 and 14..21
    vecs = []
    for k in range(8):
        vecs.append(_k3_vector(**{f"i{6 + k}": 1, f"i{14 + k}": 1}))
    vecs.append(_k3_vector(i0=1, i2=1))
    vecs.append(_k3_vector(i1=1, i3=1))
    return Embedding.from_vectors(K, vecs, label="E8(2)+U(2)")


def check_enriques_complement():
    E = _enriques_embedding()
    M = E.sub
    N = complement_of_vectors(E.ambient, E.columns())[0]
    ge_m = genus_equal(M, make_standard("E8(2)+U(2)"))
    ge_n = genus_equal(N, make_standard("E8(2)+U(2)+U"))
    uniq = nikulin_unique(make_standard("E8(2)+U(2)"))
    ev = {"sub_genus": ge_m.equal, "complement_genus": ge_n.equal, "roots_in_sub": root_count(make_standard("E8(2)")).count,
          "unique_embedding": uniq.value}
    return _status(ge_m.equal and ge_n.equal and uniq is Verdict.GUARANTEED), ev


def check_enriques_self_mirror():
    E = _enriques_embedding()
    res = mirror_of_polarization(E, _k3_vector(i4=1))
    ge = genus_equal(res.check_lattice, make_standard("E8(2)+U(2)"))
    return _status(ge.equal and res.m == 1 and rank_relation(E.sub, res.check_lattice)), {"m": res.m, "genus_equal": ge.equal}


def check_enriques_u2_mirror():
    E = _enriques_embedding()
    res = mirror_of_polarization(E, _k3_vector(i0=1, i2=-1))
    ge = genus_equal(res.check_lattice, make_standard("U+E8(2)"))
    ev = {"m": res.m, "genus_equal": ge.equal, "witness": res.splitting_witness is not None}
    return _status(ge.equal and res.m == 2), ev


def find_base_change(G, T, bound=3):
    """P with P^T G P = T and det P = +-1, entries in [-bound, bound]."""
    n = len(G)
    vecs = list(itertools.product(range(-bound, bound + 1), repeat=n))
    L = Lattice(tuple(map(tuple, G)))

    def ip(u, v):
        return sum(u[i] * L.gram[i][j] * v[j] for i in range(n) for j in range(n))

    by_norm = {}
    for v in vecs:
        by_norm.setdefault(ip(v, v), []).append(v)

    def rec(cols):
        k = len(cols)
        if k == n:
            P = linalg.from_columns([list(c) for c in cols], n)
            return P if abs(linalg.det(P)) == 1 else None
        for v in by_norm.get(T[k][k], []):
            if all(ip(cols[j], v) == T[j][k] for j in range(k)):
                found = rec(cols + [v])
                if found:
                    return found
        return None

    return rec([])


def check_kummer_base_change():
    G = make_standard("U(2)+<-4>").matrix()
    T = [[0, 2, 2], [2, 0, 2], [2, 2, 0]]
    P = find_base_change(G, T, 3)
    if P is None:
        return UNKNOWN, {"bound": 3, "found": False}
    ok = linalg.matmul(linalg.matmul(linalg.transpose(P), G), P) == T
    return _status(ok), {"bound": 3, "matrix": P}


def check_wedge():
    ok = all(kummer_wedge_identity(n) for n in range(1, 11))
    return _status(ok), {"n_range": [1, 10]}


def check_wedge_symbolic():
    return _status(kummer_wedge_identity(None)), {"indeterminates": ["t", "n"]}


def check_fricke_table():
    table = {n: fricke_counts(n) for n in range(1, 11)}
    ok = all(table[n]["excluded_count"] == 1 for n in range(1, 5)) and table[4]["cusp_count"] == 2
    return _status(ok), {str(n): v for n, v in table.items()}


def check_cusps_primes():
    primes = [p for p in range(2, 32) if all(p % q for q in range(2, p))]
    vals = {p: cusp_count(p) for p in primes}
    return _status(all(v == 1 for v in vals.values()) and cusp_count(4) == 2), {"primes": vals, "n=4": cusp_count(4)}


def check_class_numbers():
    vals = {}
    ok = True
    for n in range(1, 21):
        a, b = class_number(-4 * n), class_number_bruteforce(-4 * n)
        vals[-4 * n] = a
        ok &= a == b
    return _status(ok), {"h": {str(k): v for k, v in vals.items()}}


def check_walls():
    cases = [(1, (-1, 1, 0)), (2, (-3, 1, 1)), (3, (-1, 1, 0)), (5, (-6, 1, 1))]
    results = [wall_fixed_point(n, v) for n, v in cases]
    ok = all(r.holds for r in results) and wall_identity_symbolic()
    return _status(ok), {"points": [r.t for r in results]}


def check_aprime(samples=100, seed=7):
    rng = random.Random(seed)
    ok = True
    for _ in range(samples):
        n = rng.choice([1, 2, 3, 5, 6])
        g = random_gamma0(n, rng)
        M = embed_Aprime(g, n)
        L = Lattice(tuple(map(tuple, gram_fe_minus_g(n))))
        ok &= is_integral(M) and preserves(M, gram_fe_minus_g(n))
        ok &= acts_trivially_on_discriminant(L, M)
    fr = embed_Aprime(fricke_matrix(7), 7)
    ok &= fr == [[0, 0, 1], [0, -1, 0], [1, 0, 0]]
    return _status(ok), {"samples": samples, "fricke_image": [[int(x) for x in r] for r in fr]}


def check_A_multiplicative(samples=100, seed=11):
    rng = random.Random(seed)
    ok = True
    for _ in range(samples):
        n = rng.choice([1, 2, 3, 5, 6, 7])
        g1, g2 = random_star(n, rng), random_star(n, rng)
        ok &= embed_A(sqrt_matmul(g1, g2), n) == sqrt_matmul(embed_A(g1, n), embed_A(g2, n))
        A1 = embed_A(g1, n)
        ok &= is_integral(A1) and preserves(A1, gram_fg(n))
    return _status(ok), {"samples": samples}


def random_orthogonal_star(Mcheck_name, rng):
    """A random element of O(M)* for the two test lattices."""
    M = make_standard(Mcheck_name)
    r = M.rank
    ident = linalg.identity(r)
    if Mcheck_name.startswith("<"):
        n2 = M.gram[0][0]
        return M, ([[-1]] if n2 == 2 and rng.random() < 0.5 else ident)
    # E8(2)+U(2): Eichler transvections of E8+U with a in 2 E8 act trivially mod 2
    base = make_standard("E8+U")
    S = ident
    e = [0] * 8 + [1, 0]
    for _ in range(rng.randint(0, 3)):
        a = [2 * rng.randint(-1, 1) for _ in range(8)] + [0, 0]
        aa = sum(a[i] * base.gram[i][j] * a[j] for i in range(r) for j in range(r))
        T = []
        for k in range(r):
            x = ident[k]
            xe = sum(x[i] * base.gram[i][j] * e[j] for i in range(r) for j in range(r))
            xa = sum(x[i] * base.gram[i][j] * a[j] for i in range(r) for j in range(r))
            T.append([x[i] + xe * a[i] - xa * e[i] - (aa // 2) * xe * e[i] for i in range(r)])
        S = linalg.matmul(linalg.transpose(T), S)
    if rng.random() < 0.5:
        S = [[-x for x in row] for row in S]
    return M, S


def check_zmf_group_law(samples=100, seed=3):
    rng = random.Random(seed)
    ok = True
    for _ in range(samples):
        name = rng.choice(["<2>", "<4>", "<6>", "E8(2)+U(2)"])
        m = rng.choice([1, 2])
        M, s1 = random_orthogonal_star(name, rng)
        _, s2 = random_orthogonal_star(name, rng)
        v1 = [m * rng.randint(-2, 2) for _ in range(M.rank)]
        v2 = [m * rng.randint(-2, 2) for _ in range(M.rank)]
        A1 = zmf_isometry(m, M, s1, v1)
        A2 = zmf_isometry(m, M, s2, v2)
        big = zmf_lattice(m, M)
        ok &= A1.preserves_gram() and A1.apply([1] + [0] * (M.rank + 1)) == [1] + [0] * (M.rank + 1)
        ok &= acts_trivially_on_discriminant(big, A1.rows())
        comp = zmf_isometry(m, M, linalg.matmul(s2, s1), [a + b for a, b in zip(linalg.matvec(s2, v1), v2)])
        ok &= (A2 @ A1).matrix == comp.matrix
    return _status(ok), {"samples": samples}


def check_pi(weights, expected):
    ws = WeightSystem(weights)
    order = pi_group_order(ws)
    structure = pi_group_structure(ws)
    prod_structure = 1
    for s in structure:
        prod_structure *= s
    return _status(order == expected == prod_structure), {"order": order, "structure": structure}


def check_reflexive_all():
    rows = []
    ok = True
    for ws in catalog_weight_systems():
        D = delta_of_weights(ws)
        refl = is_reflexive(D)
        inv = polar_dual(polar_dual(D)) == D
        ok &= refl and inv
        rows.append({"weights": list(ws.w), "reflexive": refl, "involutive": inv})
    return _status(ok and len(rows) == 12), {"systems": rows}


def check_k3_self_dual():
    return _status(k3_dual(tree_lattice(2, 3, 7), tree_lattice(2, 3, 7))), {"lattice": "T(2,3,7)"}


def check_unique_embedding(name):
    v = nikulin_unique(make_standard(name))
    return _status(v is Verdict.GUARANTEED), {"lattice": name, "verdict": v.value}


def check_root_counts():
    vals = {n: root_count(make_standard(n)).count for n in ("E8", "A1", "E8(2)", "D4", "E7", "E6")}
    ok = vals == {"E8": 240, "A1": 2, "E8(2)": 0, "D4": 24, "E7": 126, "E6": 72}
    return _status(ok), vals


def check_mirror_rank19():
    res = mirror_lattice(make_standard("U+<6>"), [1, 0, 0])
    return _status(res.check_lattice.gram == ((6,),)), {"gram": [list(r) for r in res.check_lattice.gram]}


def claims():
    out = []
    for row in arnold_table():
        out.append(Claim(f"strange-duality/{row.name}", "Arnold strange duality table: involution, rank 20, opposite discriminant forms",
                         check_strange_duality, (row.name,)))
    for n in range(1, 11):
        out.append(Claim(f"mirror/degree-{2 * n:02d}", "mirror of a degree-2n polarization is U+E8+E8+<-2n>", check_mirror, (n,)))
        out.append(Claim(f"double-mirror/degree-{2 * n:02d}", "mirror of the mirror returns <2n>", check_double_mirror, (n,)))
    out += [
        Claim("genus/minus4-vs-d9", "elliptic fibration with a D9 fibre", check_genus, ("U+E8+E8+<-4>", "U+E8+D9")),
        Claim("genus/minus6-vs-e7-a2", "elliptic fibration with E8, E7, A2 fibres", check_genus, ("U+E8+E8+<-6>", "U+E8+E7+A2")),
        Claim("genus/overlattice-e6-e6-a5", "Z/3 section group gives the <-6> discriminant form", check_overlattice),
        Claim("rank20/u-e8-e8-a2", "rank 20 special fibre lattice", check_rank20, ("U+E8+E8+A2", -3)),
        Claim("rank20/u-e8-e8-a1-a1", "rank 20 special fibre lattice", check_rank20, ("U+E8+E8+<-2>+<-2>", -4)),
        Claim("enriques/complement", "Enriques lattice and its complement", check_enriques_complement),
        Claim("enriques/self-mirror", "Enriques lattice is its own mirror", check_enriques_self_mirror),
        Claim("enriques/u2-vector", "mirror at a U(2) vector is U+E8(2)", check_enriques_u2_mirror),
        Claim("kummer/base-change", "U(2)+<-4> equals the all-2 off-diagonal Gram", check_kummer_base_change),
        Claim("kummer/wedge-identity", "wedge identity for n = 1..10", check_wedge),
        Claim("kummer/wedge-symbolic", "wedge identity with n an indeterminate", check_wedge_symbolic),
        Claim("fricke/table", "orbit, cusp and excluded counts for n = 1..10", check_fricke_table),
        Claim("fricke/cusps-primes", "one cusp for prime level, two for level 4", check_cusps_primes),
        Claim("fricke/class-numbers", "two class number oracles agree", check_class_numbers),
        Claim("fricke/walls", "fixed points of reflections in -2 vectors", check_walls),
        Claim("fricke/aprime-matrices", "Moebius action as isometries in the discriminant kernel", check_aprime),
        Claim("fricke/a-multiplicative", "SL2 to SO(1,2) is a homomorphism", check_A_multiplicative),
        Claim("zmf/group-law", "split extension law for isometries fixing f", check_zmf_group_law),
        Claim("toric/pi-quartic", "Pi group of the quartic", check_pi, ((1, 1, 1, 1), 16)),
        Claim("toric/pi-1-3-8-12", "Pi group of order 2", check_pi, ((1, 3, 8, 12), 2)),
        Claim("toric/pi-1-6-14-21", "trivial Pi group", check_pi, ((1, 6, 14, 21), 1)),
        Claim("toric/reflexive", "all catalog simplices are reflexive", check_reflexive_all),
        Claim("k3-dual/t237-self", "T(2,3,7) is self-dual", check_k3_self_dual),
        Claim("nikulin/unique-degree-4", "degree 4 polarization embeds uniquely", check_unique_embedding, ("<4>",)),
        Claim("nikulin/unique-enriques", "Enriques lattice embeds uniquely", check_unique_embedding, ("E8(2)+U(2)",)),
        Claim("lattice/root-counts", "root counts of standard lattices", check_root_counts),
        Claim("mirror/rank-19-closure", "mirror of a rank 19 lattice is <2n>", check_mirror_rank19),
    ]
    return sorted(out, key=lambda c: c.id)


def run_claim(claim: Claim) -> dict:
    start = time.perf_counter()
    try:
        status, evidence = claim.fn(*claim.args)
    except K3MirrorError as exc:
        status, evidence = FAIL, {"error": f"{type(exc).__name__}: {exc}"}
    ms = round((time.perf_counter() - start) * 1000, 3)
    return {"id": claim.id, "paper_ref": claim.ref, "status": status, "evidence": _jsonable(evidence), "ms": ms}


def _run_by_id(claim_id: str) -> dict:
    return run_claim(next(c for c in claims() if c.id == claim_id))


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else int(x)
    return x


def select(only=None):
    cs = claims()
    if not only:
        return cs
    chosen = [c for c in cs if any(c.id == o or c.id.startswith(o.rstrip("/") + "/") for o in only)]
    return chosen


def run_verify(only=None, jobs: int = 1) -> dict:
    cs = select(only)
    if jobs > 1 and len(cs) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_by_id, [c.id for c in cs]))
    else:
        results = [run_claim(c) for c in cs]
    results.sort(key=lambda r: r["id"])
    summary = {s: sum(1 for r in results if r["status"] == s) for s in (PASS, FAIL, UNKNOWN)}
    return {"claims": results, "summary": summary}


def report_without_timing(report: dict) -> dict:
    return {
        "claims": [{k: v for k, v in c.items() if k != "ms"} for c in report["claims"]],
        "summary": report["summary"],
    }
