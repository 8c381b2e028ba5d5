"""Degree-2n arithmetic: Fricke group matrices, class numbers and cusp counts."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Sequence

from .errors import ConsistencyError, DomainError, ParameterError
from .polys import Poly


def _is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


class SqrtInt:
    """The number a + b*sqrt(n) with rational a, b.

    Entries like 1/sqrt(n) are stored as (1/n)*sqrt(n). When n is a perfect
    square the value is folded into ``a``.
    """

    __slots__ = ("a", "b", "n")

    def __init__(self, a=0, b=0, n: int = 1):
        if n < 1:
            raise ParameterError("n must be positive")
        a, b = Fraction(a), Fraction(b)
        if _is_square(n):
            a += b * isqrt(n)
            b = Fraction(0)
        self.a, self.b, self.n = a, b, n

    @classmethod
    def sqrt(cls, n: int, coeff=1):
        return cls(0, coeff, n)

    def _coerce(self, other):
        if isinstance(other, SqrtInt):
            if other.n != self.n:
                raise ParameterError("mixing different square roots")
            return other
        return SqrtInt(Fraction(other), 0, self.n)

    def __add__(self, o):
        o = self._coerce(o)
        return SqrtInt(self.a + o.a, self.b + o.b, self.n)

    __radd__ = __add__

    def __neg__(self):
        return SqrtInt(-self.a, -self.b, self.n)

    def __sub__(self, o):
        return self + (-self._coerce(o))

    def __rsub__(self, o):
        return self._coerce(o) - self

    def __mul__(self, o):
        o = self._coerce(o)
        return SqrtInt(self.a * o.a + self.n * self.b * o.b, self.a * o.b + self.b * o.a, self.n)

    __rmul__ = __mul__

    def div_sqrt(self):
        """self / sqrt(n)."""
        if _is_square(self.n):
            return SqrtInt(self.a / isqrt(self.n), 0, self.n)
        return SqrtInt(self.b, self.a / self.n, self.n)

    def __truediv__(self, k):
        k = Fraction(k)
        return SqrtInt(self.a / k, self.b / k, self.n)

    def __eq__(self, o):
        try:
            o = self._coerce(o)
        except (ParameterError, TypeError, ValueError):
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b, self.n))

    def is_rational(self) -> bool:
        return self.b == 0

    def is_integer(self) -> bool:
        return self.b == 0 and self.a.denominator == 1

    def __repr__(self):
        if self.b == 0:
            return str(self.a)
        return f"{self.a}+{self.b}*sqrt({self.n})" if self.a else f"{self.b}*sqrt({self.n})"


def _as_sqrt(x, n):
    return x if isinstance(x, SqrtInt) else SqrtInt(Fraction(x), 0, n)


def _mat2(g, n):
    if len(g) != 2 or any(len(r) != 2 for r in g):
        raise ParameterError("expected a 2x2 matrix")
    return [[_as_sqrt(x, n) for x in row] for row in g]


def sqrt_matmul(A, B):
    k, m, p = len(A), len(B), len(B[0])
    return [[sum((A[i][t] * B[t][j] for t in range(m)), SqrtInt(0, 0, A[0][0].n)) for j in range(p)] for i in range(k)]


def embed_A(g, n: int):
    """Image of g in SL2(R) as an isometry of (U + <2n>) in the basis (f, e, g).

    Columns are the images of f, e, g; the Gram matrix is
    [[0, 0, 1], [0, 2n, 0], [1, 0, 0]].
    """
    (a, b), (c, d) = _mat2(g, n)
    if a * d - b * c != 1:
        raise DomainError("matrix must have determinant 1")
    s = SqrtInt.sqrt(n)
    return [
        [a * a, -2 * s * a * b, -(b * b)],
        [-(a * c).div_sqrt(), a * d + b * c, (b * d).div_sqrt()],
        [-(c * c), 2 * s * c * d, d * d],
    ]


def embed_Aprime(g, n: int):
    """Image of g as a rational isometry of (U + <2n>) in the basis (f, e, -g).

    ``g`` may contain SqrtInt entries (the Fricke element); the result is
    returned as Fractions when rational, otherwise as SqrtInt.
    """
    if n < 1:
        raise ParameterError("n must be positive")
    (al, be), (ga, de) = _mat2(g, n)
    if al * de - be * ga != 1:
        raise DomainError("matrix must have determinant 1")
    M = [
        [al * al, -2 * n * al * be, n * be * be],
        [-(al * ga) / n, al * de + ga * be, -(be * de)],
        [ga * ga / n, -2 * ga * de, de * de],
    ]
    if all(x.is_rational() for row in M for x in row):
        return [[x.a for x in row] for row in M]
    return M


def is_integral(M) -> bool:
    for row in M:
        for x in row:
            if isinstance(x, SqrtInt):
                if not x.is_integer():
                    return False
            elif Fraction(x).denominator != 1:
                return False
    return True


def gram_fg(n: int):
    """Gram of U + <2n> in the basis (f, e, g)."""
    return [[0, 0, 1], [0, 2 * n, 0], [1, 0, 0]]


def gram_fe_minus_g(n: int):
    """Gram of U + <2n> in the basis (f, e, -g)."""
    return [[0, 0, -1], [0, 2 * n, 0], [-1, 0, 0]]


def fricke_matrix(n: int):
    s = SqrtInt.sqrt(n)
    return [[SqrtInt(0, 0, n), SqrtInt(0, Fraction(-1, n), n)], [s, SqrtInt(0, 0, n)]]


def preserves(M, G) -> bool:
    n = len(G)
    for i in range(n):
        for j in range(n):
            s = sum(M[k][i] * G[k][l] * M[l][j] for k in range(n) for l in range(n))
            if s != G[i][j]:
                return False
    return True


def random_gamma0(n: int, rng: random.Random, length: int = 6):
    """A random element of Gamma_0(n) as a product of generators."""
    gens = [((1, 1), (0, 1)), ((1, -1), (0, 1)), ((1, 0), (n, 1)), ((1, 0), (-n, 1))]
    g = ((1, 0), (0, 1))
    for _ in range(rng.randint(1, length)):
        h = rng.choice(gens)
        g = tuple(tuple(sum(g[i][k] * h[k][j] for k in range(2)) for j in range(2)) for i in range(2))
    if rng.random() < 0.5:
        g = tuple(tuple(-x for x in r) for r in g)
    return [list(r) for r in g]


def random_star(n: int, rng: random.Random, length: int = 6):
    """A random matrix ((a, b sqrt n), (c sqrt n, d)) with integer a, b, c, d."""
    s = SqrtInt.sqrt(n)
    one, zero = SqrtInt(1, 0, n), SqrtInt(0, 0, n)
    gens = [[[one, s], [zero, one]], [[one, -s], [zero, one]], [[one, zero], [s, one]], [[one, zero], [-s, one]]]
    g = [[one, zero], [zero, one]]
    for _ in range(rng.randint(1, length)):
        g = sqrt_matmul(g, rng.choice(gens))
    return g


# ------------------------------------------------------------ counts


def squarefree_decomposition(n: int):
    """n = m * k^2 with m squarefree; returns (m, k)."""
    if n < 1:
        raise ParameterError("n must be positive")
    k = 1
    m = n
    p = 2
    while p * p <= m:
        while m % (p * p) == 0:
            m //= p * p
            k *= p
        p += 1
    return m, k


def isotropic_orbit_count(n: int) -> int:
    _, k = squarefree_decomposition(n)
    return (k + 2) // 2


def euler_phi(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def cusp_count(n: int) -> int:
    """Cusps of the Fricke group of level n.

    Half the number of cusps of Gamma_0(n), except 2 for n = 4. For n = 1
    the half-count is 1/2 and the answer is 1 (the single cusp of the
    modular group).
    """
    if n < 1:
        raise ParameterError("n must be positive")
    if n == 4:
        return 2
    total = sum(euler_phi(gcd(d, n // d)) for d in range(1, n + 1) if n % d == 0)
    if n == 1:
        return 1
    if total % 2:
        raise ConsistencyError(f"cusp sum {total} for n = {n} is odd")
    return total // 2


@dataclass(frozen=True)
class BinaryForm:
    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    @property
    def is_primitive(self) -> bool:
        return gcd(gcd(self.a, self.b), self.c) == 1

    @property
    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        if not (abs(b) <= a <= c):
            return False
        if (abs(b) == a or a == c) and b < 0:
            return False
        return True

    def reduce(self) -> "BinaryForm":
        """Gauss reduction of a positive definite form."""
        a, b, c = self.a, self.b, self.c
        if a <= 0 or self.discriminant >= 0:
            raise DomainError("only positive definite forms can be reduced")
        while True:
            if not (-a < b <= a):
                # translate x -> x + k y to bring b into (-a, a]
                k = (a - b) // (2 * a)
                b, c = b + 2 * k * a, a * k * k + b * k + c
            if a > c:
                a, b, c = c, -b, a
                continue
            if a == c and b < 0:
                b = -b
            return BinaryForm(a, b, c)


def _check_disc(D: int):
    if D >= 0 or D % 4 not in (0, 1):
        raise DomainError(f"{D} is not a negative discriminant")


def reduced_forms(D: int):
    _check_disc(D)
    out = []
    amax = isqrt(-D // 3)
    for a in range(1, amax + 1):
        for b in range(-a, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            f = BinaryForm(a, b, c)
            if f.is_reduced and f.is_primitive:
                out.append(f)
    return out


def class_number(D: int) -> int:
    """Number of classes of primitive positive definite forms of discriminant D."""
    return len(reduced_forms(D))


def class_number_bruteforce(D: int) -> int:
    """Independent count: Gauss-reduce every primitive form with |a|, |b| <= |D|."""
    _check_disc(D)
    seen = set()
    for a in range(1, -D + 1):
        for b in range(D, -D + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            f = BinaryForm(a, b, c)
            if f.is_primitive:
                seen.add(f.reduce())
    return len(seen)


def excluded_count(n: int) -> int:
    """Size of the excluded set in the Fricke quotient for degree 2n."""
    if n < 1:
        raise ParameterError("n must be positive")
    if n <= 4:
        return 1
    h = class_number(-4 * n)
    if n % 8 == 7:
        return 2 * h
    if n % 8 == 3:
        if (4 * h) % 3:
            raise ConsistencyError(f"4 h(-4n) = {4 * h} is not divisible by 3 for n = {n}")
        return 4 * h // 3
    return h


def fricke_counts(n: int) -> dict:
    return {
        "orbit_count": isotropic_orbit_count(n),
        "cusp_count": cusp_count(n),
        "excluded_count": excluded_count(n),
        "class_number": class_number(-4 * n),
    }


# ------------------------------------------------------------ wall fixed points


@dataclass(frozen=True)
class WallCheck:
    t: str
    pairing: str
    holds: bool


def _wall_ring(n):
    s, i = Poly.ring("s", "i")
    return s, i


def wall_fixed_point(n: int, v: Sequence[int]) -> WallCheck:
    """Check that mu(t) = -n t^2 f + g + t e pairs to zero with v = a f + b g + c e
    at t = c/b + i/(b sqrt n), computing in Q(sqrt n, i)."""
    if n < 1:
        raise ParameterError("n must be positive")
    a, b, c = (int(x) for x in v)
    if 2 * a * b + 2 * n * c * c != -2:
        raise DomainError(f"(v, v) = {2 * a * b + 2 * n * c * c}, expected -2")
    if b == 0:
        raise DomainError("b must be nonzero")
    s, i = _wall_ring(n)
    t = Fraction(c, b) + i * s * Fraction(1, b * n)
    pairing = -n * b * t * t + a + 2 * n * c * t
    pairing = pairing.reduce_square("s", n).reduce_square("i", -1)
    return WallCheck(str(t), str(pairing), pairing.is_zero())


def wall_identity_symbolic() -> bool:
    """b * (-n b t^2 + a + 2 n c t) vanishes when a b = -1 - n c^2 and
    t = c/b + i/(b sqrt n); with s = sqrt n and X = s b t = c s + i this is
    -X^2 + ab + 2 s c X, a polynomial in c, s, i."""
    c, s, i = Poly.ring("c", "s", "i")
    X = c * s + i
    ab = -1 - s * s * c * c
    expr = (-(X * X) + ab + 2 * s * c * X).reduce_square("i", -1)
    return expr.is_zero()
