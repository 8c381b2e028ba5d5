"""Integral lattices given by Gram matrices, with the standard constructors."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import isqrt
from typing import NamedTuple, Optional, Sequence

from . import linalg
from .errors import DegenerateLatticeError, ParameterError


class Signature(NamedTuple):
    pos: int
    neg: int


@dataclass(frozen=True)
class Lattice:
    """A free Z-module with an integral symmetric bilinear form."""

    gram: tuple
    label: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        g = tuple(tuple(int(x) for x in row) for row in self.gram)
        n = len(g)
        if any(len(row) != n for row in g):
            raise ParameterError("Gram matrix must be square")
        for i in range(n):
            for j in range(i):
                if g[i][j] != g[j][i]:
                    raise ParameterError(f"Gram matrix not symmetric at ({i}, {j})")
        object.__setattr__(self, "gram", g)

    @property
    def rank(self) -> int:
        return len(self.gram)

    @cached_property
    def det(self) -> int:
        return linalg.det([list(r) for r in self.gram])

    @property
    def is_degenerate(self) -> bool:
        return self.det == 0

    def matrix(self):
        return [list(r) for r in self.gram]

    def __str__(self):
        return self.label or f"Lattice(rank={self.rank})"

    def to_json(self):
        d = {"gram": self.matrix()}
        if self.label:
            d["label"] = self.label
        return d

    @classmethod
    def from_json(cls, data):
        if "gram" not in data:
            raise ParameterError("lattice JSON needs a 'gram' field")
        return cls(tuple(tuple(r) for r in data["gram"]), data.get("label"))


def primitive(v: Sequence[int]) -> bool:
    return linalg.gcd_list(v) == 1


def _check_vec(L: Lattice, v):
    if len(v) != L.rank:
        raise ParameterError(f"vector of length {len(v)} does not match rank {L.rank}")


def inner(L: Lattice, v, w):
    _check_vec(L, v)
    _check_vec(L, w)
    return sum(v[i] * sum(L.gram[i][j] * w[j] for j in range(L.rank)) for i in range(L.rank))


def norm(L: Lattice, v):
    return inner(L, v, v)


def pairing_row(L: Lattice, v):
    """The functional (v, -) as its values on the basis."""
    _check_vec(L, v)
    return [sum(L.gram[i][j] * v[j] for j in range(L.rank)) for i in range(L.rank)]


def determinant(L: Lattice) -> int:
    return L.det


def is_even(L: Lattice) -> bool:
    return all(L.gram[i][i] % 2 == 0 for i in range(L.rank))


def div(L: Lattice, f) -> int:
    """Positive generator of the ideal (f, L)."""
    if not any(f):
        raise ParameterError("div is undefined for the zero vector")
    return linalg.gcd_list(pairing_row(L, f))


# ---------------------------------------------------------------- constructors


def hyperbolic(m: int = 1) -> Lattice:
    if m == 0:
        raise ParameterError("U(m) needs m != 0")
    return Lattice(((0, m), (m, 0)), "U" if m == 1 else f"U({m})")


def diag(k: int) -> Lattice:
    if k == 0:
        raise ParameterError("<k> needs k != 0")
    return Lattice(((k,),), f"<{k}>")


def _from_graph(n, edges, label):
    g = [[0] * n for _ in range(n)]
    for i in range(n):
        g[i][i] = -2
    for i, j in edges:
        g[i][j] = g[j][i] = 1
    return Lattice(tuple(map(tuple, g)), label)


def tree_lattice(p: int, q: int, r: int) -> Lattice:
    """T(p,q,r): three arms of lengths p, q, r meeting in one vertex."""
    if min(p, q, r) < 2:
        raise ParameterError("T(p,q,r) needs p, q, r >= 2")
    edges = []
    n = 1
    for arm in (p, q, r):
        prev = 0
        for _ in range(arm - 1):
            edges.append((prev, n))
            prev = n
            n += 1
    return _from_graph(n, edges, f"T({p},{q},{r})")


def root_lattice(kind: str, n: int) -> Lattice:
    kind = kind.upper()
    if kind == "A":
        if n < 1:
            raise ParameterError("A_n needs n >= 1")
        return _from_graph(n, [(i, i + 1) for i in range(n - 1)], f"A{n}")
    if kind == "D":
        if n < 4:
            raise ParameterError("D_n needs n >= 4")
        return Lattice(tree_lattice(2, 2, n - 2).gram, f"D{n}")
    if kind == "E":
        if n not in (6, 7, 8):
            raise ParameterError("E_n exists only for n = 6, 7, 8")
        return Lattice(tree_lattice(2, 3, n - 3).gram, f"E{n}")
    raise ParameterError(f"unknown root system {kind!r}")


def direct_sum(*parts: Lattice, label=None) -> Lattice:
    g = linalg.block_diag(*(p.matrix() for p in parts))
    if label is None:
        label = "+".join(str(p) for p in parts)
    return Lattice(tuple(map(tuple, g)), label)


def rescale(L: Lattice, m: int) -> Lattice:
    if m == 0:
        raise ParameterError("rescale factor must be nonzero")
    if m == 1:
        return L
    g = tuple(tuple(m * x for x in row) for row in L.gram)
    return Lattice(g, f"{L}({m})")


def k3_lattice() -> Lattice:
    """U+U+U+E8+E8, signature (3, 19)."""
    U, E8 = hyperbolic(), root_lattice("E", 8)
    return direct_sum(U, U, U, E8, E8, label="L_K3")


_TERM = re.compile(
    r"""^(?:
        <(?P<k>[+-]?\d+)> |
        diag\((?P<dk>[+-]?\d+)\) |
        T\((?P<p>\d+),(?P<q>\d+),(?P<r>\d+)\) |
        (?P<name>L_K3|U|[ADE]_?\d+)(?:\((?P<m>[+-]?\d+)\))?
    )$""",
    re.VERBOSE,
)


def make_standard(name: str) -> Lattice:
    """Build a lattice from a name such as ``U``, ``U(2)``, ``E8``, ``<-4>``,
    ``T(2,3,7)``, ``E8(2)``, or a ``+``-separated sum of those."""
    text = name.replace(" ", "").replace("⊥", "+")
    terms = _split_sum(text)
    if len(terms) > 1:
        return direct_sum(*(make_standard(t) for t in terms), label=text)
    m = _TERM.match(text)
    if not m:
        raise ParameterError(f"cannot parse lattice name {name!r}")
    if m["k"] is not None:
        return diag(int(m["k"]))
    if m["dk"] is not None:
        return diag(int(m["dk"]))
    if m["p"] is not None:
        return tree_lattice(int(m["p"]), int(m["q"]), int(m["r"]))
    base = m["name"]
    if base == "U":
        lat = hyperbolic(1)
    elif base == "L_K3":
        lat = k3_lattice()
    else:
        lat = root_lattice(base[0], int(base.lstrip("ADE_")))
    if m["m"] is not None:
        lat = rescale(lat, int(m["m"]))
    return lat


def _split_sum(text):
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch in "(<":
            depth += 1
        elif ch in ")>":
            depth -= 1
        if ch == "+" and depth == 0 and cur:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    parts.append(cur)
    return parts


# ------------------------------------------------------------------ signature


def diagonalize(L: Lattice):
    """Congruent rational diagonalization.

    Returns a list of diagonal blocks: ``Fraction`` entries for 1x1 pieces
    and ``("hyperbolic", a)`` for 2x2 pieces ``[[0, a], [a, 0]]``. Raises
    :class:`DegenerateLatticeError` if the form has a radical.
    """
    A = [[Fraction(x) for x in row] for row in L.gram]
    blocks = []
    while A:
        n = len(A)
        k = next((i for i in range(n) if A[i][i] != 0), None)
        if k is not None:
            p = A[k][k]
            blocks.append(p)
            rest = [i for i in range(n) if i != k]
            A = [[A[i][j] - A[i][k] * A[k][j] / p for j in rest] for i in rest]
            continue
        pair = next(((i, j) for i in range(n) for j in range(i + 1, n) if A[i][j] != 0), None)
        if pair is None:
            raise DegenerateLatticeError(n)
        i, j = pair
        a = A[i][j]
        blocks.append(("hyperbolic", a))
        rest = [k for k in range(n) if k not in (i, j)]
        # project e_k onto the orthogonal complement of span(e_i, e_j)
        proj = {k: (A[k][j] / a, A[k][i] / a) for k in rest}
        A = [
            [
                A[k][l]
                - proj[k][0] * A[i][l]
                - proj[k][1] * A[j][l]
                - proj[l][0] * A[k][i]
                - proj[l][1] * A[k][j]
                + proj[k][0] * proj[l][1] * a
                + proj[k][1] * proj[l][0] * a
                for l in rest
            ]
            for k in rest
        ]
    return blocks


def signature(L: Lattice) -> Signature:
    pos = neg = 0
    for b in diagonalize(L):
        if isinstance(b, tuple):
            pos += 1
            neg += 1
        elif b > 0:
            pos += 1
        else:
            neg += 1
    return Signature(pos, neg)


def is_definite(L: Lattice) -> bool:
    s = signature(L)
    return s.pos == 0 or s.neg == 0


# ------------------------------------------------------------------- roots


class RootCount(NamedTuple):
    count: int
    truncated: bool
    bound: str


def _ldl(Q):
    """Q = sum_i d_i (x_i + sum_{j>i} mu_ij x_j)^2 for positive definite Q."""
    n = len(Q)
    A = [[Fraction(x) for x in row] for row in Q]
    d = [Fraction(0)] * n
    mu = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        d[i] = A[i][i]
        if d[i] <= 0:
            raise ParameterError("form is not positive definite")
        for j in range(i + 1, n):
            mu[i][j] = A[i][j] / d[i]
        for j in range(i + 1, n):
            for k in range(i + 1, n):
                A[j][k] -= mu[i][j] * d[i] * mu[i][k]
    return d, mu


def short_vectors(Q, bound):
    """All integer x with x^T Q x <= bound for a positive definite Q.

    Fincke-Pohst enumeration with exact rational completion of squares.
    """
    n = len(Q)
    d, mu = _ldl(Q)
    out = []
    x = [0] * n

    def rec(i, budget):
        if i < 0:
            out.append(tuple(x))
            return
        c = -sum(mu[i][j] * x[j] for j in range(i + 1, n))
        r2 = budget / d[i]
        s = isqrt(int(r2)) + 1
        base = c.numerator // c.denominator
        for xi in range(base - s, base + s + 2):
            t = (xi - c) ** 2
            if t <= r2:
                x[i] = xi
                rec(i - 1, budget - d[i] * t)
        x[i] = 0

    rec(n - 1, Fraction(bound))
    return out


def root_count(L: Lattice, coordinate_bound: int = 2) -> RootCount:
    """Number of vectors of norm -2.

    Negative definite lattices are enumerated completely. For any other
    signature only the box ``[-coordinate_bound, coordinate_bound]^rank`` is
    scanned and the result is flagged as truncated.
    """
    sig = signature(L)
    if sig.pos == 0:
        Q = [[-x for x in row] for row in L.gram]
        vecs = short_vectors(Q, 2)
        count = sum(1 for v in vecs if norm(L, v) == -2)
        return RootCount(count, False, "complete: x^T(-G)x <= 2 via LDL completion of squares")
    count = 0
    rng = range(-coordinate_bound, coordinate_bound + 1)
    for v in itertools.product(rng, repeat=L.rank):
        if norm(L, v) == -2:
            count += 1
    return RootCount(count, True, f"box |x_i| <= {coordinate_bound}")
