"""Mirror lattices (Zf)^perp / Zf, K3 duality, Z_M(f) isometries and the tube map."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import linalg
from .discform import are_isomorphic, discriminant_form, fqf_negate
from .embed import (
    Admissibility,
    Embedding,
    is_m_admissible,
    orthogonal_complement,
)
from .errors import ConsistencyError, DegenerateLatticeError, DomainError, ParameterError
from .polys import Poly, QComplex
from .zlattice import (
    Lattice,
    direct_sum,
    div,
    hyperbolic,
    inner,
    is_even,
    norm,
    pairing_row,
    primitive,
    signature,
)


@dataclass(frozen=True)
class MirrorResult:
    check_lattice: Lattice
    f_used: tuple
    m: int
    splitting_witness: Optional[dict] = None
    ambient_basis: Optional[list] = None

    def to_json(self):
        return {
            "check_lattice": self.check_lattice.to_json(),
            "m": self.m,
            "f": list(self.f_used),
            "witness": self.splitting_witness,
        }


def _require_primitive_isotropic(N: Lattice, f):
    if len(f) != N.rank:
        raise ParameterError(f"vector of length {len(f)} does not match rank {N.rank}")
    if not any(f) or not primitive(f):
        raise DomainError(f"{list(f)} is not primitive")
    if norm(N, f) != 0:
        raise DomainError(f"{list(f)} is not isotropic (norm {norm(N, f)})")


def mirror_lattice(N: Lattice, f, admissibility_bound: int = 2) -> MirrorResult:
    """The lattice (Zf)^perp / Zf for a primitive isotropic f in N."""
    f = [int(x) for x in f]
    _require_primitive_isotropic(N, f)
    K = linalg.kernel_saturated([pairing_row(N, f)])
    c = linalg.solve_integer(K, f)
    if c is None:
        raise ConsistencyError("f is not in its own orthogonal complement")
    W = linalg.complete_to_basis(c)
    B = linalg.matmul(K, W)  # columns: f, then representatives of the quotient
    if linalg.column(B, 0) != f:
        raise ConsistencyError("basis completion lost f")
    G = linalg.matmul(linalg.matmul(linalg.transpose(B), N.matrix()), B)
    if any(G[0]):
        raise ConsistencyError("f is not in the radical of the form on f^perp")
    Q = [row[1:] for row in G[1:]]
    check = Lattice(tuple(map(tuple, Q)), f"({N})_f")
    if check.det == 0:
        raise DegenerateLatticeError(sum(1 for _ in Q) - linalg.rank(Q))
    m = div(N, f)
    adm = is_m_admissible(N, f, bound=admissibility_bound)
    witness = adm.splitting if adm.verdict is Admissibility.YES else None
    reps = [linalg.column(B, j) for j in range(1, len(B[0]))]
    return MirrorResult(check, tuple(f), m, witness, reps)


def mirror_of_polarization(E: Embedding, f, f_in_ambient: bool = True) -> MirrorResult:
    """Complement N of the polarization lattice, then the mirror at f.

    With ``f_in_ambient`` the vector is given in coordinates of the ambient
    lattice and must lie in N.
    """
    N, embN = orthogonal_complement(E)
    if f_in_ambient:
        fN = linalg.solve_integer([list(r) for r in embN.matrix], list(f))
        if fN is None:
            raise DomainError("f does not lie in the orthogonal complement of the polarization")
    else:
        fN = list(f)
    return mirror_lattice(N, fN)


@dataclass(frozen=True)
class DoubleMirror:
    first: MirrorResult
    second: MirrorResult
    check_embedding: Embedding


def double_mirror(E: Embedding, f_ambient) -> DoubleMirror:
    """Mirror of the mirror, using the U(m) splitting to realise the mirror
    lattice inside the ambient lattice."""
    N, embN = orthogonal_complement(E)
    fN = linalg.solve_integer([list(r) for r in embN.matrix], list(f_ambient))
    if fN is None:
        raise DomainError("f does not lie in the orthogonal complement of the polarization")
    first = mirror_lattice(N, fN)
    if first.splitting_witness is None:
        raise DomainError("no U(m) splitting found for f; the mirror is not realised as a sublattice")
    to_amb = lambda v: linalg.matvec([list(r) for r in embN.matrix], v)  # noqa: E731
    comp = [to_amb(v) for v in first.splitting_witness["complement"]]
    check_emb = Embedding.from_vectors(E.ambient, comp, label="mirror")
    second = mirror_of_polarization(check_emb, f_ambient)
    return DoubleMirror(first, second, check_emb)


def _hyperbolic(S: Lattice):
    if not is_even(S):
        raise DomainError(f"{S} is not even")
    sig = signature(S)
    if sig.pos != 1 or sig.neg != S.rank - 1:
        raise DomainError(f"{S} has signature {tuple(sig)}, expected (1, {S.rank - 1})")


def k3_dual(S: Lattice, S2: Lattice) -> bool:
    """rank S + rank S2 = 20 and A(S) is isometric to A(S2) with negated form."""
    _hyperbolic(S)
    _hyperbolic(S2)
    if S.rank + S2.rank != 20:
        return False
    return are_isomorphic(discriminant_form(S), fqf_negate(discriminant_form(S2))) is not None


def rank_relation(M: Lattice, Mcheck: Lattice) -> bool:
    return M.rank + Mcheck.rank == 20


# ------------------------------------------------------------ Z_M(f)


@dataclass(frozen=True)
class IsometryMatrix:
    """Square integer matrix; column j is the image of basis vector j."""

    matrix: tuple
    lattice: Lattice

    def __post_init__(self):
        M = tuple(tuple(int(x) for x in r) for r in self.matrix)
        object.__setattr__(self, "matrix", M)

    def rows(self):
        return [list(r) for r in self.matrix]

    def preserves_gram(self) -> bool:
        S = self.rows()
        return linalg.matmul(linalg.matmul(linalg.transpose(S), self.lattice.matrix()), S) == self.lattice.matrix()

    def __matmul__(self, other: "IsometryMatrix") -> "IsometryMatrix":
        return IsometryMatrix(tuple(map(tuple, linalg.matmul(self.rows(), other.rows()))), self.lattice)

    def apply(self, v):
        return linalg.matvec(self.rows(), v)


def zmf_lattice(m: int, Mcheck: Lattice) -> Lattice:
    return direct_sum(hyperbolic(m), Mcheck, label=f"U({m})+{Mcheck}" if m != 1 else f"U+{Mcheck}")


def zmf_isometry(m: int, Mcheck: Lattice, sigma_tilde, v, check_image: bool = True) -> IsometryMatrix:
    """Isometry of U(m) + Mcheck (basis f, g, z_1, ...) fixing f.

    f -> f, g -> -(v,v)/(2m) f + g + v, z -> -(v, s(z))/m f + s(z) where s is
    ``sigma_tilde`` (columns = images).
    """
    if m < 1:
        raise ParameterError("m must be positive")
    r = Mcheck.rank
    S = [[int(x) for x in row] for row in sigma_tilde]
    if len(S) != r or any(len(row) != r for row in S):
        raise ParameterError("sigma_tilde has the wrong size")
    v = [int(x) for x in v]
    if len(v) != r:
        raise ParameterError("v has the wrong length")
    if linalg.matmul(linalg.matmul(linalg.transpose(S), Mcheck.matrix()), S) != Mcheck.matrix():
        raise DomainError("sigma_tilde is not an isometry of the mirror lattice")
    vv = norm(Mcheck, v)
    if vv % (2 * m):
        raise DomainError(f"(v, v) = {vv} is not divisible by 2m = {2 * m}")
    n = r + 2
    out = linalg.zeros(n, n)
    out[0][0] = 1
    out[0][1] = -vv // (2 * m)
    out[1][1] = 1
    for i in range(r):
        out[2 + i][1] = v[i]
    for j in range(r):
        col = linalg.column(S, j)
        p = inner(Mcheck, v, col)
        if p % m:
            raise DomainError(f"(v, sigma(z_{j})) = {p} is not divisible by m = {m}")
        out[0][2 + j] = -p // m
        for i in range(r):
            out[2 + i][2 + j] = col[i]
    iso = IsometryMatrix(tuple(map(tuple, out)), zmf_lattice(m, Mcheck))
    if check_image and not iso.preserves_gram():
        raise ConsistencyError("assembled matrix does not preserve the Gram matrix")
    return iso


def zmf_components(iso: IsometryMatrix, m: int):
    """Recover (sigma_tilde, v) from an assembled matrix."""
    M = iso.rows()
    r = len(M) - 2
    v = [M[2 + i][1] for i in range(r)]
    S = [[M[2 + i][2 + j] for j in range(r)] for i in range(r)]
    return S, v


# ------------------------------------------------------------ tube domain


@dataclass(frozen=True)
class TubeImage:
    mu: tuple
    mu_mu: QComplex
    mu_mubar: Fraction
    y_norm: Fraction
    in_domain: bool

    def to_json(self):
        return {
            "mu": [str(x) for x in self.mu],
            "mu_mu": str(self.mu_mu),
            "mu_mubar": str(self.mu_mubar),
            "y_norm": str(self.y_norm),
            "in_domain": self.in_domain,
        }


def _cpair(L: Lattice, x, y):
    total = QComplex()
    for i in range(L.rank):
        if x[i].re == 0 and x[i].im == 0:
            continue
        for j in range(L.rank):
            gij = L.gram[i][j]
            if gij:
                total = total + x[i] * y[j] * gij
    return total


def tube_alpha(N: Lattice, f, g, z: Sequence) -> TubeImage:
    """mu = -1/2 (z,z) f + g + z for z orthogonal to f and g."""
    if inner(N, f, g) != 1:
        raise DomainError(f"(f, g) = {inner(N, f, g)}, expected 1")
    if norm(N, f) != 0 or norm(N, g) != 0:
        raise DomainError("f and g must be isotropic")
    zc = [QComplex.of(x) for x in z]
    if len(zc) != N.rank:
        raise ParameterError("z has the wrong length")
    fc = [QComplex.of(x) for x in f]
    gc = [QComplex.of(x) for x in g]
    if not (_cpair(N, zc, fc) == QComplex() and _cpair(N, zc, gc) == QComplex()):
        raise DomainError("z is not orthogonal to f and g")
    zz = _cpair(N, zc, zc)
    coef = zz * Fraction(-1, 2)
    mu = [coef * fc[i] + gc[i] + zc[i] for i in range(N.rank)]
    mu_mu = _cpair(N, mu, mu)
    if mu_mu != QComplex():
        raise ConsistencyError(f"(mu, mu) = {mu_mu} is not zero")
    mubar = [x.conjugate() for x in mu]
    mm = _cpair(N, mu, mubar)
    if not mm.is_real():
        raise ConsistencyError("(mu, conj mu) is not real")
    y = [x.im for x in zc]
    yy = Fraction(sum(y[i] * N.gram[i][j] * y[j] for i in range(N.rank) for j in range(N.rank)))
    if mm.re != 2 * yy:
        raise ConsistencyError("(mu, conj mu) != 2 (y, y)")
    return TubeImage(tuple(mu), mu_mu, mm.re, yy, yy > 0)


# ------------------------------------------------------------ wedge identity

# Basis of the second exterior power of Z^4 used below, as (i, j, sign) for
# +/- e_i ^ e_j with i < j.
WEDGE_BASIS = {
    "f1": (0, 1, 1),
    "g1": (2, 3, 1),
    "f2": (0, 2, 1),
    "g2": (1, 3, -1),
    "f3": (0, 3, 1),
    "g3": (1, 2, 1),
}


def wedge(u, w):
    """u ^ w in the basis e_i ^ e_j (i < j) of the second exterior power."""
    out = {}
    for i in range(4):
        for j in range(i + 1, 4):
            out[(i, j)] = u[i] * w[j] - u[j] * w[i]
    return out


def wedge_in_basis(u, w):
    raw = wedge(u, w)
    return {name: raw[(i, j)] * s for name, (i, j, s) in WEDGE_BASIS.items()}


def kummer_wedge_identity(n=None) -> bool:
    """(-t e1 + e4) ^ (n t e2 - e3) = -n t^2 f1 + g1 + t (f2 + n g2).

    ``n`` may be a positive integer or None for the version where n is an
    indeterminate too. A mismatch raises :class:`ConsistencyError`.
    """
    t, nn = Poly.ring("t", "n")
    if n is not None:
        if int(n) < 1:
            raise ParameterError("n must be positive")
        nn = Poly.const(t.vars, int(n))
    zero, one = Poly.const(t.vars, 0), Poly.const(t.vars, 1)
    u = [-t, zero, zero, one]
    w = [zero, nn * t, -one, zero]
    got = wedge_in_basis(u, w)
    expected = {
        "f1": -nn * t * t,
        "g1": one,
        "f2": t,
        "g2": nn * t,
        "f3": zero,
        "g3": zero,
    }
    for k in WEDGE_BASIS:
        if got[k] != expected[k]:
            raise ConsistencyError(f"coefficient of {k}: got {got[k]!r}, expected {expected[k]!r}")
    return True
