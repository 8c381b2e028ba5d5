"""Sublattice embeddings, orthogonal complements and embedding criteria."""

from __future__ import annotations

import enum
import itertools
import warnings
from dataclasses import dataclass
from typing import Optional

from . import linalg
from .discform import (
    FiniteQuadraticForm,
    are_isomorphic,
    discriminant_form,
    length,
    p_primary,
)
from .errors import DomainError, ParameterError
from .zlattice import Lattice, div, inner, is_even, norm, pairing_row, primitive, signature


class Verdict(str, enum.Enum):
    GUARANTEED = "guaranteed"
    NOT_IMPLIED = "not-implied"


@dataclass(frozen=True)
class Embedding:
    """Columns of ``matrix`` are the images of the basis of ``sub``."""

    ambient: Lattice
    sub: Lattice
    matrix: tuple

    def __post_init__(self):
        M = tuple(tuple(int(x) for x in row) for row in self.matrix)
        if len(M) != self.ambient.rank or any(len(r) != self.sub.rank for r in M):
            raise ParameterError(
                f"embedding matrix must be {self.ambient.rank} x {self.sub.rank}"
            )
        object.__setattr__(self, "matrix", M)
        induced = _induced_gram(self.ambient, [list(r) for r in M])
        if induced != self.sub.matrix():
            raise DomainError("embedding matrix is not compatible with the Gram matrices")

    @classmethod
    def from_vectors(cls, ambient: Lattice, vectors, label=None) -> "Embedding":
        """Embed the lattice spanned by ``vectors`` with its induced form."""
        M = linalg.from_columns([list(v) for v in vectors], ambient.rank)
        sub = Lattice(tuple(map(tuple, _induced_gram(ambient, M))), label)
        return cls(ambient, sub, M)

    def columns(self):
        return [linalg.column(self.matrix, j) for j in range(self.sub.rank)]

    def to_json(self):
        return {"ambient": self.ambient.to_json(), "matrix": [list(r) for r in self.matrix]}

    @classmethod
    def from_json(cls, data):
        amb = Lattice.from_json(data["ambient"])
        return cls.from_vectors(amb, linalg.transpose(data["matrix"]) if data["matrix"] else [])


def _induced_gram(ambient: Lattice, M):
    return linalg.matmul(linalg.matmul(linalg.transpose(M), ambient.matrix()), M)


def is_primitive(E: Embedding) -> bool:
    if E.sub.rank == 0:
        return True
    return all(d == 1 for d in linalg.invariant_factors([list(r) for r in E.matrix]))


def orthogonal_complement(E: Embedding):
    """The complement of the image of ``E`` and its (primitive) embedding.

    A non-primitive input has the same complement as its saturation; a
    warning is emitted in that case.
    """
    if not is_primitive(E):
        warnings.warn("embedding is not primitive; complement of its saturation returned", stacklevel=2)
    amb = E.ambient
    if E.sub.rank == 0:
        cols = linalg.identity(amb.rank)
    else:
        constraints = [pairing_row(amb, c) for c in E.columns()]
        cols = linalg.kernel_saturated(constraints)
    vecs = [linalg.column(cols, j) for j in range(len(cols[0]) if cols else 0)]
    emb = Embedding.from_vectors(amb, vecs, label=f"({E.sub})^perp")
    return emb.sub, emb


def complement_of_vectors(ambient: Lattice, vectors):
    return orthogonal_complement(Embedding.from_vectors(ambient, vectors))


# ------------------------------------------------------------ criteria


def _hyperbolic_t(M: Lattice) -> int:
    if not is_even(M):
        raise DomainError(f"{M} is not even")
    sig = signature(M)
    if sig.pos != 1:
        raise DomainError(f"{M} has signature {tuple(sig)}, expected (1, t)")
    if sig.neg > 19:
        raise DomainError(f"{M} has t = {sig.neg} > 19")
    return sig.neg


def nikulin_exists(M: Lattice) -> Verdict:
    """Sufficient condition for a primitive embedding into the K3 lattice."""
    t = _hyperbolic_t(M)
    if t <= 10 or length(discriminant_form(M)) <= 20 - t:
        return Verdict.GUARANTEED
    return Verdict.NOT_IMPLIED


def _prime_divisors(n):
    n = abs(n)
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def splits_off_u_form(A: FiniteQuadraticForm, m: int):
    """Find x, y spanning an orthogonal summand isometric to A(U(m)).

    Returns ``(x, y)`` or None. For m = 1 the summand is trivial.
    """
    k = len(A.orders)
    zero = tuple([0] * k)
    if m == 1:
        return zero, zero
    cands = [x for x in A.elements() if A.element_order(x) == m and A.q_int(x) == 0]
    want = A.exponent // m  # b(x, y) = 1/m
    for i, x in enumerate(cands):
        for y in cands[i + 1:]:
            if A.b_int(x, y) == want:
                # <x, y> then carries b with determinant unit mod m: non-degenerate
                return x, y
    return None


def nikulin_unique(M: Lattice) -> Verdict:
    """Sufficient condition for uniqueness of the embedding up to O(L)."""
    t = _hyperbolic_t(M)
    A = discriminant_form(M)
    for p in _prime_divisors(M.det):
        Ap = p_primary(A, p)
        if p != 2 and len(Ap.orders) > 19 - t:
            return Verdict.NOT_IMPLIED
        if p == 2 and len(Ap.orders) >= 21 - t and splits_off_u_form(Ap, 2) is None:
            return Verdict.NOT_IMPLIED
    return Verdict.GUARANTEED


def u_m_summand_criterion(S: Lattice, m: int) -> Verdict:
    if m < 1:
        raise ParameterError("m must be positive")
    if not is_even(S):
        raise DomainError(f"{S} is not even")
    sig = signature(S)
    if sig.pos == 0 or sig.neg == 0:
        raise DomainError(f"{S} is definite")
    A = discriminant_form(S)
    if splits_off_u_form(A, m) is None:
        return Verdict.NOT_IMPLIED
    if length(A) > S.rank - 3:
        return Verdict.NOT_IMPLIED
    return Verdict.GUARANTEED


# ------------------------------------------------------------ isotropic vectors


@dataclass(frozen=True)
class IsotropicVector:
    vector: tuple
    div: int


def find_isotropic_primitive(L: Lattice, bound: int = 1):
    """Primitive isotropic vectors with coordinates in [-bound, bound], one per sign pair."""
    if bound < 1:
        raise ParameterError("bound must be positive")
    sig = signature(L)
    if sig.pos == 0 or sig.neg == 0:
        return []
    out = []
    for v in itertools.product(range(-bound, bound + 1), repeat=L.rank):
        first = next((x for x in v if x), 0)
        if first <= 0:
            continue
        if norm(L, v) == 0 and primitive(v):
            out.append(IsotropicVector(tuple(v), div(L, v)))
    return out


class Admissibility(str, enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class AdmissibilityResult:
    verdict: Admissibility
    m: int
    witness_g: Optional[tuple] = None
    splitting: Optional[dict] = None
    reason: str = ""

    def to_json(self):
        return {
            "verdict": self.verdict.value,
            "m": self.m,
            "witness_g": list(self.witness_g) if self.witness_g else None,
            "splitting": self.splitting,
            "reason": self.reason,
        }


def _congruence_lattice(G, m):
    """Rows spanning {g : G g = 0 mod m}."""
    n = len(G)
    M = [list(G[i]) + [-m if j == i else 0 for j in range(n)] for i in range(n)]
    ker = linalg.kernel_rows(M)
    return linalg.lattice_basis([row[:n] for row in ker])


def u_m_splitting(L: Lattice, f, g, m):
    """Basis of the complement of span(f, g) and a check that it splits L."""
    comp_cols = linalg.kernel_saturated([pairing_row(L, f), pairing_row(L, g)])
    comp = [linalg.column(comp_cols, j) for j in range(len(comp_cols[0]) if comp_cols else 0)]
    basis = [list(f), list(g)] + comp
    if abs(linalg.det(linalg.from_columns(basis, L.rank))) != 1:
        raise DomainError("span(f, g) is not an orthogonal summand")
    return {"f": list(f), "g": list(g), "complement": [list(c) for c in comp]}


def project_to_complement(L: Lattice, f, g, m, s):
    """s - (s,g)/m f - (s,f)/m g, which lies in the complement of span(f, g)."""
    sg, sf = inner(L, s, g), inner(L, s, f)
    if sg % m or sf % m:
        raise DomainError(f"pairings ({sg}, {sf}) are not divisible by {m}")
    return [s[i] - sg // m * f[i] - sf // m * g[i] for i in range(L.rank)]


def is_m_admissible(L: Lattice, f, bound: int = 8, m: Optional[int] = None,
                    budget: int = 200_000) -> AdmissibilityResult:
    """Decide whether ``f`` is m-admissible (``m`` defaults to div(f)).

    ``no`` is returned when div(f) differs from m, and also when no vector g
    with (f, g) = m and all pairings of g divisible by m exists at all (this
    is a linear congruence problem, so the answer is exact). Otherwise a
    bounded search looks for an isotropic partner.
    """
    f = [int(x) for x in f]
    if len(f) != L.rank:
        raise ParameterError("vector length does not match rank")
    if not any(f) or not primitive(f):
        raise DomainError(f"{f} is not primitive")
    if norm(L, f) != 0:
        raise DomainError(f"{f} is not isotropic (norm {norm(L, f)})")
    d = div(L, f)
    if m is None:
        m = d
    if d != m:
        return AdmissibilityResult(Admissibility.NO, m, reason=f"div(f) = {d} != {m}")
    G = L.matrix()
    lam = _congruence_lattice(G, m)
    phi = pairing_row(L, f)
    vals = [linalg.dot(phi, row) for row in lam]
    c = linalg.gcd_list(vals)
    if c != m:
        return AdmissibilityResult(
            Admissibility.NO, m,
            reason=f"every g with m | (g, L) has (f, g) in {c}Z",
        )
    # g0 with (f, g0) = m inside lam, via extended gcd on the values
    coeffs = _bezout(vals)
    g0 = [sum(coeffs[r] * lam[r][i] for r in range(len(lam))) for i in range(L.rank)]
    # homogeneous part: lam rows with phi = 0
    hom = linalg.kernel_rows([vals])
    hom_vecs = [[sum(h[r] * lam[r][i] for r in range(len(lam))) for i in range(L.rank)] for h in hom]
    tried = 0
    for k in _search_combinations(hom_vecs, L.rank, bound):
        tried += 1
        if tried > budget:
            break
        g = [a + b for a, b in zip(g0, k)]
        nn = norm(L, g)
        if nn % (2 * m):
            continue
        a = -nn // (2 * m)
        g = [gi + a * fi for gi, fi in zip(g, f)]
        if not primitive(g):
            continue
        assert norm(L, g) == 0 and inner(L, f, g) == m and div(L, g) == m
        split = u_m_splitting(L, f, g, m)
        return AdmissibilityResult(Admissibility.YES, m, tuple(g), split, reason=f"found after {tried} candidates")
    return AdmissibilityResult(
        Admissibility.UNKNOWN, m,
        reason=f"no isotropic partner found with coefficients in [-{bound}, {bound}] ({tried} candidates)",
    )


def _bezout(vals):
    """Integers c with sum c_i vals_i = gcd(vals)."""
    coeffs = [0] * len(vals)
    g = 0
    for i, v in enumerate(vals):
        ng, x, y = linalg.xgcd(g, v)
        coeffs = [c * x for c in coeffs]
        coeffs[i] = y
        g = ng
    return coeffs


def _search_combinations(vecs, n, bound):
    """Integer combinations of ``vecs`` by increasing support, then coefficient size."""
    yield [0] * n
    r = len(vecs)
    for size in range(1, r + 1):
        for support in itertools.combinations(range(r), size):
            for mag in range(1, bound + 1):
                for coefs in itertools.product(range(-mag, mag + 1), repeat=size):
                    if 0 in coefs or max(abs(c) for c in coefs) != mag:
                        continue
                    yield [sum(c * vecs[s][i] for c, s in zip(coefs, support)) for i in range(n)]


def find_u_m_summand(S: Lattice, m: int, bound: int = 1):
    """An explicit U(m) summand found from a short isotropic vector, or None."""
    for iso in find_isotropic_primitive(S, bound):
        if iso.div != m:
            continue
        res = is_m_admissible(S, iso.vector, bound=2, m=m)
        if res.verdict is Admissibility.YES:
            return res
    return None


# ------------------------------------------------------------ genus


@dataclass(frozen=True)
class GenusComparison:
    equal: bool
    promoted: bool
    witness: Optional[list] = None
    reason: str = ""

    def __bool__(self):
        return self.equal

    def to_json(self):
        return {
            "equal": self.equal,
            "promoted": self.promoted,
            "witness": [list(x) for x in self.witness] if self.witness is not None else None,
            "reason": self.reason,
        }


def genus_equal(L1: Lattice, L2: Lattice) -> GenusComparison:
    """Same signature and isomorphic discriminant forms.

    ``promoted`` is set when both lattices are indefinite and the
    discriminant group needs at most rank - 2 generators, which forces an
    honest isometry of lattices.
    """
    s1, s2 = signature(L1), signature(L2)
    if s1 != s2:
        return GenusComparison(False, False, reason=f"signatures {tuple(s1)} != {tuple(s2)}")
    A1, A2 = discriminant_form(L1), discriminant_form(L2)
    w = are_isomorphic(A1, A2)
    if w is None:
        return GenusComparison(False, False, reason="discriminant forms differ")
    indefinite = s1.pos > 0 and s1.neg > 0
    promoted = indefinite and length(A1) <= L1.rank - 2
    return GenusComparison(True, promoted, w, reason=f"A = {A1.describe()}")
