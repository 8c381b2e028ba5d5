"""Finite quadratic forms, in particular discriminant forms A(L) = L*/L."""

from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm, prod
from typing import Optional

from . import linalg
from .errors import CapacityError, ConsistencyError, DomainError, ParameterError
from .zlattice import Lattice, is_even

DEFAULT_BOUND = 10**6


def mod2(x) -> Fraction:
    return Fraction(x) % 2


def mod1(x) -> Fraction:
    return Fraction(x) % 1


def _frac(s) -> Fraction:
    return Fraction(s) if not isinstance(s, Fraction) else s


@dataclass(frozen=True)
class FiniteQuadraticForm:
    """A finite abelian group ``Z/n_1 x ... x Z/n_k`` with a quadratic form.

    ``q_diag[i]`` is q of the i-th generator in Q/2Z and ``b_matrix`` holds
    the bilinear form on generators in Q/Z.
    """

    orders: tuple
    q_diag: tuple
    b_matrix: tuple
    basis: Optional[tuple] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        orders = tuple(int(n) for n in self.orders)
        k = len(orders)
        q = tuple(mod2(_frac(x)) for x in self.q_diag)
        b = tuple(tuple(mod1(_frac(x)) for x in row) for row in self.b_matrix)
        if len(q) != k or len(b) != k or any(len(r) != k for r in b):
            raise ParameterError("orders, q and b sizes disagree")
        for i, n in enumerate(orders):
            if n <= 1:
                raise ParameterError("generator orders must exceed 1")
            if (n * q[i]).denominator != 1 or (n * n * q[i]) % 2 != 0:
                raise ParameterError(f"q value {q[i]} incompatible with order {n}")
            if b[i][i] != q[i] % 1:
                raise ParameterError(f"b({i},{i}) does not match q({i}) mod 1")
            for j in range(k):
                if b[i][j] != b[j][i]:
                    raise ParameterError("b matrix not symmetric")
                if (n * b[i][j]).denominator != 1:
                    raise ParameterError(f"order {n} does not kill b({i},{j})")
        object.__setattr__(self, "orders", orders)
        object.__setattr__(self, "q_diag", q)
        object.__setattr__(self, "b_matrix", b)

    # -- basic structure
    @property
    def order(self) -> int:
        return prod(self.orders)

    @property
    def exponent(self) -> int:
        return lcm(*self.orders) if self.orders else 1

    def __len__(self):
        return len(self.orders)

    def is_trivial(self) -> bool:
        return not self.orders

    def reduce(self, x) -> tuple:
        if len(x) != len(self.orders):
            raise ParameterError(f"element has {len(x)} coefficients, expected {len(self.orders)}")
        return tuple(int(c) % n for c, n in zip(x, self.orders))

    def elements(self, bound: int = DEFAULT_BOUND):
        if self.order > bound:
            raise CapacityError(f"group of order {self.order} exceeds enumeration bound {bound}")
        return itertools.product(*(range(n) for n in self.orders))

    def element_order(self, x) -> int:
        x = self.reduce(x)
        o = 1
        for c, n in zip(x, self.orders):
            o = lcm(o, n // gcd(c, n))
        return o

    def add(self, x, y):
        return self.reduce([a + b for a, b in zip(x, y)])

    def scale(self, k, x):
        return self.reduce([k * a for a in x])

    # -- values
    @property
    def _tables(self):
        t = self.__dict__.get("_tab")
        if t is None:
            N = self.exponent
            k = len(self.orders)
            qint = [int(self.q_diag[i] * 2 * N) % (4 * N) for i in range(k)]
            bint = [[int(self.b_matrix[i][j] * N) % N for j in range(k)] for i in range(k)]
            t = (N, qint, bint)
            object.__setattr__(self, "_tab", t)
        return t

    def q_int(self, x) -> int:
        """q(x) scaled by 2N and reduced mod 4N, N the exponent."""
        N, qint, bint = self._tables
        k = len(x)
        s = 0
        for i in range(k):
            ci = x[i]
            if ci:
                s += ci * ci * qint[i]
                for j in range(i + 1, k):
                    if x[j]:
                        s += 4 * ci * x[j] * bint[i][j]
        return s % (4 * N)

    def b_int(self, x, y) -> int:
        N, _, bint = self._tables
        k = len(x)
        return sum(x[i] * y[j] * bint[i][j] for i in range(k) for j in range(k) if x[i] and y[j]) % N

    def q_value(self, x) -> Fraction:
        x = self.reduce(x)
        N = self.exponent
        return Fraction(self.q_int(x), 2 * N)

    def b_value(self, x, y) -> Fraction:
        x, y = self.reduce(x), self.reduce(y)
        return Fraction(self.b_int(x, y), self.exponent)

    def check_consistency(self, samples: int = 50, seed: int = 0):
        """q(x+y) = q(x) + q(y) + 2 b(x,y) on generator pairs and random sums."""
        k = len(self.orders)
        gens = [tuple(int(i == j) for j in range(k)) for i in range(k)]
        rng = random.Random(seed)
        pairs = [(a, b) for a in gens for b in gens]
        for _ in range(samples if k else 0):
            pairs.append((self.reduce([rng.randrange(n) for n in self.orders]),
                          self.reduce([rng.randrange(n) for n in self.orders])))
        for x, y in pairs:
            lhs = self.q_value(self.add(x, y))
            rhs = mod2(self.q_value(x) + self.q_value(y) + 2 * self.b_value(x, y))
            if lhs != rhs:
                return False
        return True

    # -- serialization
    def to_json(self):
        return {
            "orders": list(self.orders),
            "q": [str(x) for x in self.q_diag],
            "b": [[str(x) for x in row] for row in self.b_matrix],
        }

    @classmethod
    def from_json(cls, data):
        try:
            return cls(
                tuple(data["orders"]),
                tuple(Fraction(s) for s in data["q"]),
                tuple(tuple(Fraction(s) for s in row) for row in data["b"]),
            )
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            if isinstance(exc, ParameterError):
                raise
            raise ParameterError(f"malformed finite quadratic form JSON: {exc}") from exc

    def describe(self) -> str:
        if not self.orders:
            return "trivial"
        return " x ".join(f"Z/{n}" for n in self.orders)


TRIVIAL = FiniteQuadraticForm((), (), ())


# ------------------------------------------------------------ construction


def _form_from_rational_basis(gram_q, vecs, orders):
    """Form on generators ``vecs`` (rational vectors) under a rational Gram."""
    k = len(vecs)
    gv = [[sum(gram_q[a][c] * v[c] for c in range(len(v))) for a in range(len(v))] for v in vecs]
    b = [[sum(vecs[i][a] * gv[j][a] for a in range(len(vecs[i]))) for j in range(k)] for i in range(k)]
    q = [b[i][i] for i in range(k)]
    return FiniteQuadraticForm(tuple(orders), tuple(q), tuple(tuple(r) for r in b), tuple(map(tuple, vecs)))


def discriminant_form(L: Lattice) -> FiniteQuadraticForm:
    """The discriminant form of an even non-degenerate lattice.

    Generators are dual vectors ``V[:, i] / d_i`` where ``U G V = D`` is the
    Smith form of the Gram matrix; factors equal to 1 are dropped.
    """
    if not is_even(L):
        raise DomainError(f"{L} is not even")
    if L.det == 0:
        raise DomainError(f"{L} is degenerate")
    G = L.matrix()
    D, U, V = linalg.snf(G)
    vecs, orders = [], []
    for i in range(L.rank):
        d = D[i][i]
        if d > 1:
            orders.append(d)
            vecs.append([Fraction(V[r][i], d) for r in range(L.rank)])
    A = _form_from_rational_basis(G, vecs, orders)
    object.__setattr__(A, "_lattice", (L, U, [D[i][i] for i in range(L.rank)]))
    return A


def dual_vector_class(A: FiniteQuadraticForm, y) -> tuple:
    """Coordinates in ``A = discriminant_form(L)`` of the class of a dual vector ``y``."""
    info = A.__dict__.get("_lattice")
    if info is None:
        raise ParameterError("form does not carry a lattice realization")
    L, U, diag = info
    Gy = [sum(L.gram[i][j] * Fraction(y[j]) for j in range(L.rank)) for i in range(L.rank)]
    coords = [sum(U[i][j] * Gy[j] for j in range(L.rank)) for i in range(L.rank)]
    out = []
    for i, d in enumerate(diag):
        if d > 1:
            c = coords[i]
            if c.denominator != 1:
                raise DomainError("vector is not in the dual lattice")
            out.append(int(c) % d)
    return tuple(out)


def _subquotient(A: FiniteQuadraticForm, K_basis, relations):
    """Form on ``K / R`` where ``K`` is given by integer rows in generator
    coordinates containing ``R = relations``; the induced q, b come from A."""
    k = len(K_basis)
    if k == 0:
        return TRIVIAL
    # relations in K coordinates
    Kt = linalg.transpose(K_basis)
    rel_coords = []
    for r in relations:
        c = linalg.solve_rational(Kt, r)
        if c is None or any(x.denominator != 1 for x in c):
            raise ConsistencyError("relation outside the subgroup")
        rel_coords.append([int(x) for x in c])
    D, U, V = linalg.snf(rel_coords)
    # rows of V^-1 give the new basis of K in K-coordinates
    Vinv = linalg.inverse_rational(V)
    Vinv = [[int(x) for x in row] for row in Vinv]
    orders, gens = [], []
    for i in range(k):
        d = D[i][i] if i < len(D) else 0
        if d == 1:
            continue
        if d == 0:
            raise DomainError("subquotient is infinite")
        orders.append(d)
        gens.append([sum(Vinv[i][j] * K_basis[j][c] for j in range(k)) for c in range(len(A.orders))])
    q = [A.q_value(g) for g in gens]
    b = [[A.b_value(g, h) for h in gens] for g in gens]
    return FiniteQuadraticForm(tuple(orders), tuple(q), tuple(map(tuple, b)))


def _relations(A):
    k = len(A.orders)
    return [[A.orders[i] if j == i else 0 for j in range(k)] for i in range(k)]


def fqf_direct_sum(A: FiniteQuadraticForm, B: FiniteQuadraticForm) -> FiniteQuadraticForm:
    """Orthogonal sum, renormalized to invariant factors."""
    orders = A.orders + B.orders
    k = len(orders)
    ka = len(A.orders)
    q = list(A.q_diag) + list(B.q_diag)
    b = [[Fraction(0)] * k for _ in range(k)]
    for i in range(ka):
        for j in range(ka):
            b[i][j] = A.b_matrix[i][j]
    for i in range(k - ka):
        for j in range(k - ka):
            b[ka + i][ka + j] = B.b_matrix[i][j]
    raw = FiniteQuadraticForm(orders, tuple(q), tuple(map(tuple, b)))
    return normalize(raw)


def normalize(A: FiniteQuadraticForm) -> FiniteQuadraticForm:
    """Re-express A on invariant-factor generators."""
    k = len(A.orders)
    if k == 0:
        return A
    return _subquotient(A, linalg.identity(k), _relations(A))


def fqf_negate(A: FiniteQuadraticForm) -> FiniteQuadraticForm:
    return FiniteQuadraticForm(
        A.orders,
        tuple(-x for x in A.q_diag),
        tuple(tuple(-x for x in row) for row in A.b_matrix),
    )


def length(A: FiniteQuadraticForm) -> int:
    """Minimal number of generators."""
    return len(normalize(A).orders)


def _is_prime(p):
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def p_primary(A: FiniteQuadraticForm, p: int) -> FiniteQuadraticForm:
    if not _is_prime(p):
        raise ParameterError(f"{p} is not prime")
    k = len(A.orders)
    if k == 0:
        return A
    # the p-part of Z/n is generated by (n / p^v) times the generator
    rows = []
    for i, n in enumerate(A.orders):
        m = n
        while m % p == 0:
            m //= p
        rows.append([m if j == i else 0 for j in range(k)])
    return _subquotient(A, rows, _relations(A))


# ------------------------------------------------------------ isotropy


def isotropic_elements(A: FiniteQuadraticForm, bound: int = DEFAULT_BOUND):
    """All x with q(x) = 0 in Q/2Z, as reduced coefficient tuples."""
    return [x for x in A.elements(bound) if A.q_int(x) == 0]


def span(A: FiniteQuadraticForm, gens, bound: int = DEFAULT_BOUND):
    """Elements of the subgroup generated by ``gens``."""
    seen = {A.reduce([0] * len(A.orders))}
    frontier = list(seen)
    gens = [A.reduce(g) for g in gens]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = A.add(x, g)
                if y not in seen:
                    seen.add(y)
                    if len(seen) > bound:
                        raise CapacityError("subgroup enumeration exceeded bound")
                    nxt.append(y)
        frontier = nxt
    return seen


def _lattice_rows_for(A, gens):
    rows = [list(A.reduce(g)) for g in gens] + _relations(A)
    return linalg.lattice_basis(rows)


def quotient_form(A: FiniteQuadraticForm, H_gens) -> FiniteQuadraticForm:
    """The form on H^perp / H for an isotropic subgroup H."""
    k = len(A.orders)
    H_gens = [A.reduce(h) for h in H_gens]
    for h in H_gens:
        if A.q_int(h) != 0:
            raise DomainError(f"generator {h} is not isotropic (q = {A.q_value(h)})")
    for g in H_gens:
        for h in H_gens:
            if A.b_int(g, h) != 0:
                raise DomainError(f"b({g}, {h}) = {A.b_value(g, h)} is nonzero")
    if k == 0:
        return A
    N = A.exponent
    # H^perp: x with sum_j x_j bint[h][j] = 0 mod N for all h; solve via lattice kernel
    bint = A._tables[2]
    conds = []
    for h in H_gens:
        conds.append([sum(h[i] * bint[i][j] for i in range(k)) for j in range(k)])
    perp_rows = _congruence_solutions(conds, N, A.orders)
    H_rows = _lattice_rows_for(A, H_gens)
    return _subquotient(A, perp_rows, H_rows)


def _congruence_solutions(conds, N, orders):
    """Basis rows of {x in Z^k : conds . x = 0 mod N} (contains diag(orders))."""
    k = len(orders)
    if not conds:
        return linalg.identity(k)
    c = len(conds)
    # x in Z^k, y in Z^c with conds x - N y = 0
    M = [list(conds[i]) + [-N if j == i else 0 for j in range(c)] for i in range(c)]
    ker = linalg.kernel_rows(M)
    rows = [row[:k] for row in ker]
    return linalg.lattice_basis(rows)


# ------------------------------------------------------------ isomorphism


def are_isomorphic(A: FiniteQuadraticForm, B: FiniteQuadraticForm, bound: int = DEFAULT_BOUND):
    """An isometry A -> B as the list of images of A's generators, or None."""
    if A.order != B.order:
        return None
    if A.order > bound or B.order > bound:
        raise CapacityError(f"order {A.order} exceeds isomorphism bound {bound}")
    if A.order == 1:
        return []
    An, Bn = normalize(A), normalize(B)
    if An.orders != Bn.orders:
        return None
    elems_b = list(B.elements(bound))
    keys_b = {}
    for y in elems_b:
        keys_b.setdefault((B.element_order(y), B.q_value(y)), []).append(y)
    hist_a = Counter((A.element_order(x), A.q_value(x)) for x in A.elements(bound))
    hist_b = Counter({key: len(v) for key, v in keys_b.items()})
    if hist_a != hist_b:
        return None
    k = len(A.orders)
    cands = [keys_b.get((A.orders[i], A.q_diag[i]), []) for i in range(k)]
    order = sorted(range(k), key=lambda i: len(cands[i]))
    images = [None] * k
    relB = _relations(B)

    def compatible(i, y):
        for j in order:
            if images[j] is None:
                continue
            if B.b_value(y, images[j]) != A.b_matrix[i][j]:
                return False
        return True

    def rec(pos):
        if pos == k:
            rows = [list(images[i]) for i in range(k)] + relB
            H = linalg.lattice_basis(rows)
            ok = len(H) == len(B.orders) and all(H[i][i] == 1 for i in range(len(H)))
            return ok
        i = order[pos]
        for y in cands[i]:
            if compatible(i, y):
                images[i] = y
                if rec(pos + 1):
                    return True
                images[i] = None
        return False

    if rec(0):
        return [tuple(im) for im in images]
    return None


def verify_isometry(A, B, images) -> bool:
    """Recheck an are_isomorphic witness on all generator pairs."""
    k = len(A.orders)
    if len(images) != k:
        return False
    for i in range(k):
        if B.element_order(images[i]) != A.orders[i] and A.orders[i] % B.element_order(images[i]) != 0:
            return False
        if B.scale(A.orders[i], images[i]) != B.reduce([0] * len(B.orders)):
            return False
        if B.q_value(images[i]) != A.q_diag[i]:
            return False
        for j in range(k):
            if B.b_value(images[i], images[j]) != A.b_matrix[i][j]:
                return False
    rows = [list(im) for im in images] + _relations(B)
    H = linalg.lattice_basis(rows)
    return len(H) == len(B.orders) and all(H[i][i] == 1 for i in range(len(H)))


# ------------------------------------------------------------ isometries


def preserves_gram(G, S) -> bool:
    St = linalg.transpose(S)
    return linalg.matmul(linalg.matmul(St, G), S) == [list(r) for r in G]


def acts_trivially_on_discriminant(L: Lattice, S) -> bool:
    """True iff the isometry S (columns = images of basis vectors) fixes L*/L.

    Entries of ``S`` may be Fractions as long as they are integral.
    """
    n = L.rank
    if len(S) != n or any(len(r) != n for r in S):
        raise DomainError("matrix size does not match the lattice")
    Si = [[Fraction(x) for x in row] for row in S]
    if any(x.denominator != 1 for row in Si for x in row):
        raise DomainError("matrix is not integral")
    Sint = [[int(x) for x in row] for row in Si]
    if not preserves_gram(L.gram, Sint):
        raise DomainError("matrix does not preserve the Gram matrix")
    if L.det == 0:
        raise DomainError("degenerate lattice")
    D, U, V = linalg.snf(L.matrix())
    for i in range(n):
        d = D[i][i]
        if d <= 1:
            continue
        g = [V[r][i] for r in range(n)]
        diff = [sum(Sint[r][c] * g[c] for c in range(n)) - g[r] for r in range(n)]
        # (S g* - g*) = (S g - g)/d must be integral
        if any(x % d for x in diff):
            return False
    return True
