"""Reflexive simplices of K3 weight systems and their polar duals."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm, prod
from typing import Optional, Sequence

from . import linalg
from .errors import ConsistencyError, DomainError, ParameterError


@dataclass(frozen=True)
class WeightSystem:
    w: tuple

    def __post_init__(self):
        w = tuple(int(x) for x in self.w)
        if len(w) != 4 or any(x <= 0 for x in w):
            raise ParameterError("a weight system is four positive integers")
        if linalg.gcd_list(w) != 1:
            raise ParameterError(f"weights {w} are not coprime")
        d = sum(w)
        bad = [x for x in w if d % x]
        if bad:
            raise DomainError(f"weights {bad} do not divide d = {d}")
        object.__setattr__(self, "w", w)

    @property
    def d(self) -> int:
        return sum(self.w)

    @property
    def degrees(self) -> tuple:
        """The quotients d / w_i."""
        return tuple(self.d // x for x in self.w)

    @classmethod
    def parse(cls, text: str) -> "WeightSystem":
        try:
            return cls(tuple(int(x) for x in text.replace(" ", "").split(",")))
        except ValueError as exc:
            raise ParameterError(f"cannot parse weights {text!r}") from exc


@dataclass(frozen=True)
class Simplex3:
    """A 3-simplex given by four (possibly rational) points."""

    vertices: tuple

    def __post_init__(self):
        vs = tuple(tuple(Fraction(x) for x in v) for v in self.vertices)
        if len(vs) != 4 or any(len(v) != 3 for v in vs):
            raise ParameterError("a 3-simplex needs exactly four points in dimension 3")
        edges = [[vs[k][i] - vs[0][i] for i in range(3)] for k in (1, 2, 3)]
        if linalg.det_rational(edges) == 0:
            raise ParameterError("vertices are affinely dependent")
        object.__setattr__(self, "vertices", vs)

    @property
    def is_lattice(self) -> bool:
        return all(x.denominator == 1 for v in self.vertices for x in v)

    def integer_vertices(self):
        if not self.is_lattice:
            raise DomainError("simplex has non-integral vertices")
        return [[int(x) for x in v] for v in self.vertices]

    def barycentric_origin(self):
        """Barycentric coordinates of the origin."""
        A = [[self.vertices[k][i] for k in range(4)] for i in range(3)] + [[1, 1, 1, 1]]
        return linalg.solve_rational(A, [0, 0, 0, 1])

    def origin_interior(self) -> bool:
        return all(c > 0 for c in self.barycentric_origin())

    def to_json(self):
        return [[str(x) if x.denominator != 1 else int(x) for x in v] for v in self.vertices]


def lattice_basis(ws: WeightSystem):
    """HNF basis (rows) of {t in Z^4 : sum w_i t_i = 0}."""
    return linalg.kernel_rows([list(ws.w)])


def delta_of_weights(ws: WeightSystem) -> Simplex3:
    """The simplex {sum w_i t_i = 0, t_i >= -1} in coordinates of the HNF basis."""
    B = lattice_basis(ws)
    Bt = linalg.transpose(B)
    verts = []
    for j, dj in enumerate(ws.degrees):
        t = [dj - 1 if i == j else -1 for i in range(4)]
        x = linalg.solve_integer(Bt, t)
        if x is None:
            raise ConsistencyError(f"vertex {t} is not in the lattice")
        verts.append(tuple(x))
    return Simplex3(tuple(verts))


def vertices_in_weight_coordinates(ws: WeightSystem):
    return [[dj - 1 if i == j else -1 for i in range(4)] for j, dj in enumerate(ws.degrees)]


def polar_dual(S: Simplex3) -> Simplex3:
    """Vertex j of the dual is the functional equal to 1 on the facet opposite vertex j.

    The result may have rational vertices; use ``is_lattice`` to test
    reflexivity.
    """
    if not S.origin_interior():
        raise DomainError("origin is not an interior point")
    out = []
    for j in range(4):
        rows = [list(S.vertices[k]) for k in range(4) if k != j]
        a = linalg.solve_rational(rows, [1, 1, 1])
        if a is None:
            raise ConsistencyError("facet equations are singular")
        out.append(tuple(a))
    return Simplex3(tuple(out))


def is_reflexive(S: Simplex3) -> bool:
    return S.is_lattice and S.origin_interior() and polar_dual(S).is_lattice


def pi_group_order(ws: WeightSystem) -> int:
    num = prod(ws.degrees)
    if num % (ws.d ** 2):
        raise ConsistencyError(f"{num} is not divisible by d^2 = {ws.d ** 2}")
    return num // ws.d ** 2


def pi_group_structure(ws: WeightSystem):
    """Invariant factors of {a : sum w_i a_i = 0 mod d} / span(d_i e_i, (1,1,1,1)).

    This is computed by Smith form and is independent of the closed formula
    in :func:`pi_group_order`.
    """
    d = ws.d
    # K = {a : w.a = 0 mod d}: kernel of [w | -d] projected
    K = linalg.lattice_basis([row[:4] for row in linalg.kernel_rows([list(ws.w) + [-d]])])
    R = [[dj if i == j else 0 for i in range(4)] for j, dj in enumerate(ws.degrees)] + [[1, 1, 1, 1]]
    Kt = linalg.transpose(K)
    coords = []
    for r in R:
        c = linalg.solve_integer(Kt, r)
        if c is None:
            raise ConsistencyError(f"relation {r} is not in the congruence lattice")
        coords.append(c)
    factors = linalg.invariant_factors(coords)
    if any(f == 0 for f in factors):
        raise ConsistencyError("relations do not have full rank")
    return [f for f in factors if f > 1]


def edge_interior_points(p, q) -> int:
    diffs = [int(a) - int(b) for a, b in zip(p, q)]
    return linalg.gcd_list(diffs) - 1 if any(diffs) else -1


def edge_interior_counts(S: Simplex3):
    vs = S.integer_vertices()
    return {(i, j): edge_interior_points(vs[i], vs[j]) for i in range(4) for j in range(i + 1, 4)}


@dataclass(frozen=True)
class EdgeRow:
    edge: tuple
    l_star: int
    dual_edge: tuple
    l_star_dual: int

    @property
    def ok(self) -> bool:
        return self.l_star == 0 and self.l_star_dual == 0

    def to_json(self):
        return {
            "edge": list(self.edge),
            "l_star": self.l_star,
            "dual_edge": list(self.dual_edge),
            "l_star_dual": self.l_star_dual,
            "ok": self.ok,
        }


def condition_star(ws: WeightSystem):
    """Whether every edge and its dual edge have no interior lattice points.

    Returns ``(holds, table)`` with one row per edge of the simplex.
    """
    delta = delta_of_weights(ws)
    dual = polar_dual(delta)
    if not dual.is_lattice:
        raise DomainError("simplex is not reflexive")
    counts = edge_interior_counts(delta)
    dual_counts = edge_interior_counts(dual)
    table = []
    for (i, j), l in sorted(counts.items()):
        k, m = (x for x in range(4) if x not in (i, j))
        table.append(EdgeRow((i, j), l, (k, m), dual_counts[(k, m)]))
    return all(r.ok for r in table), table


def strange_duality_weights(triple: Sequence[int], d0: Optional[int]) -> WeightSystem:
    """Weights d/d_i with d the least common multiple of (d0, d1, d2, d3)."""
    if d0 is None:
        raise DomainError(f"triple {tuple(triple)} has no d0 entry")
    ds = [int(d0)] + [int(x) for x in triple]
    if len(ds) != 4 or any(x <= 0 for x in ds):
        raise ParameterError("need a triple of positive integers and a positive d0")
    if sum(Fraction(1, x) for x in ds) != 1:
        raise DomainError(f"1/{ds[0]} + 1/{ds[1]} + 1/{ds[2]} + 1/{ds[3]} != 1")
    d = lcm(*ds)
    w = tuple(d // x for x in ds)
    if sum(w) != d:
        raise ConsistencyError(f"weights {w} do not sum to {d}")
    return WeightSystem(w)


def analyze(ws: WeightSystem) -> dict:
    delta = delta_of_weights(ws)
    dual = polar_dual(delta)
    reflexive = delta.is_lattice and dual.is_lattice
    out = {
        "weights": list(ws.w),
        "d": ws.d,
        "delta_vertices": delta.to_json(),
        "dual_vertices": dual.to_json(),
        "reflexive": reflexive,
        "pi_order": pi_group_order(ws),
        "pi_structure": pi_group_structure(ws),
    }
    if reflexive:
        holds, table = condition_star(ws)
        out["edge_table"] = [r.to_json() for r in table]
        out["condition_star"] = holds
    else:
        out["edge_table"] = []
        out["condition_star"] = None
    return out
