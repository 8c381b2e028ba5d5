"""Small exact algebra helpers: sparse multivariate polynomials and Q(i)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class Poly:
    """Sparse polynomial with Fraction coefficients in named variables."""

    __slots__ = ("vars", "terms")

    def __init__(self, variables, terms=None):
        self.vars = tuple(variables)
        self.terms = {}
        for exps, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                self.terms[tuple(exps)] = self.terms.get(tuple(exps), 0) + c
        self.terms = {e: c for e, c in self.terms.items() if c}

    @classmethod
    def const(cls, variables, c):
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, variables, name):
        e = tuple(int(v == name) for v in variables)
        return cls(variables, {e: 1})

    @classmethod
    def ring(cls, *names):
        """Generators of the polynomial ring in ``names``."""
        return tuple(cls.var(names, n) for n in names)

    def _lift(self, other):
        if isinstance(other, Poly):
            if other.vars != self.vars:
                raise ValueError("polynomials live in different rings")
            return other
        return Poly.const(self.vars, other)

    def __add__(self, other):
        other = self._lift(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, 0) + c
        return Poly(self.vars, t)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        return Poly(self.vars, t)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Poly.const(self.vars, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        try:
            other = self._lift(other)
        except (ValueError, TypeError):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def is_zero(self):
        return not self.terms

    def reduce_square(self, name, value):
        """Apply the rule ``name**2 -> value`` (value a scalar or Poly)."""
        k = self.vars.index(name)
        value = self._lift(value)
        out = Poly(self.vars)
        for e, c in self.terms.items():
            q, r = divmod(e[k], 2)
            mono = Poly(self.vars, {e[:k] + (r,) + e[k + 1:]: c})
            out = out + mono * value ** q
        return out

    def coefficient(self, name, power):
        """Coefficient of ``name**power`` as a polynomial in the other variables."""
        k = self.vars.index(name)
        return Poly(self.vars, {e[:k] + (0,) + e[k + 1:]: c for e, c in self.terms.items() if e[k] == power})

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(v if p == 1 else f"{v}^{p}" for v, p in zip(self.vars, e) if p)
            parts.append(f"{c}*{mono}" if mono else str(c))
        return " + ".join(parts)


@dataclass(frozen=True)
class QComplex:
    """Gaussian rational re + im*i."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @staticmethod
    def of(x):
        return x if isinstance(x, QComplex) else QComplex(Fraction(x), Fraction(0))

    def __add__(self, o):
        o = QComplex.of(o)
        return QComplex(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return QComplex(-self.re, -self.im)

    def __sub__(self, o):
        return self + (-QComplex.of(o))

    def __rsub__(self, o):
        return QComplex.of(o) - self

    def __mul__(self, o):
        o = QComplex.of(o)
        return QComplex(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conjugate(self):
        return QComplex(self.re, -self.im)

    def is_real(self):
        return self.im == 0

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        return f"{self.re}+{self.im}i" if self.im > 0 else f"{self.re}{self.im}i"

    @classmethod
    def parse(cls, text: str) -> "QComplex":
        """Parse ``"p/q"``, ``"a+bi"``, ``"bi"`` style strings."""
        s = text.replace(" ", "")
        if not s.endswith("i"):
            return cls(Fraction(s), 0)
        body = s[:-1]
        cut = max(body.rfind("+"), body.rfind("-"))
        while cut > 0 and body[cut - 1] in "eE/":
            cut = max(body.rfind("+", 0, cut), body.rfind("-", 0, cut))
        re_part, im_part = (body[:cut], body[cut:]) if cut > 0 else ("0", body)
        if im_part in ("", "+"):
            im_part = "1"
        elif im_part == "-":
            im_part = "-1"
        return cls(Fraction(re_part), Fraction(im_part))
