"""Chow ring of a projective bundle P(E) -> B over a curve, rank n + 2.

Classes are integer combinations of xi^a * beta with beta one of 1, epsE,
epsI (first Chern classes of E and I pulled back from the curve).  Two
pullback classes multiply to zero, and xi^(n+2) = -epsE * xi^(n+1) since
c_i(E) = 0 for i >= 2 on a curve.  Top-dimensional classes are combinations
of xi^(n+1) epsE and xi^(n+1) epsI, of degrees degE and degI.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Tuple

from .errors import DimensionMismatch, NotTopDimensional

BASES = ("1", "E", "I")


def _reduce(n: int, terms) -> Dict[Tuple[int, str], int]:
    out: Dict[Tuple[int, str], int] = {}

    def put(key, c):
        if c:
            out[key] = out.get(key, 0) + c
            if out[key] == 0:
                del out[key]

    for (a, beta), c in terms.items():
        if not c:
            continue
        if a <= n + 1:
            put((a, beta), c)
        elif beta == "1" and a == n + 2:
            put((n + 1, "E"), -c)
        # anything beyond is zero: it would need two pullback classes
    return out


@dataclass(frozen=True)
class ChowClass:
    n: int
    terms: Tuple[Tuple[Tuple[int, str], int], ...]

    @classmethod
    def make(cls, n: int, terms) -> "ChowClass":
        if n < 1:
            raise ValueError("relative dimension must be at least 1")
        red = _reduce(n, dict(terms))
        return cls(n, tuple(sorted(red.items(), key=lambda kv: (kv[0][0], BASES.index(kv[0][1])))))

    @classmethod
    def zero(cls, n: int) -> "ChowClass":
        return cls.make(n, {})

    @classmethod
    def one(cls, n: int, c: int = 1) -> "ChowClass":
        return cls.make(n, {(0, "1"): c})

    @classmethod
    def xi(cls, n: int) -> "ChowClass":
        return cls.make(n, {(1, "1"): 1})

    @classmethod
    def eps_e(cls, n: int) -> "ChowClass":
        return cls.make(n, {(0, "E"): 1})

    @classmethod
    def eps_i(cls, n: int) -> "ChowClass":
        return cls.make(n, {(0, "I"): 1})

    def as_dict(self):
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def _coerce(self, other) -> "ChowClass":
        if isinstance(other, int):
            return ChowClass.one(self.n, other)
        if not isinstance(other, ChowClass):
            raise TypeError(f"cannot combine a Chow class with {type(other).__name__}")
        if other.n != self.n:
            raise DimensionMismatch(f"classes on P(E) with n={self.n} and n={other.n}")
        return other

    def __add__(self, other):
        other = self._coerce(other)
        t = self.as_dict()
        for k, c in other.terms:
            t[k] = t.get(k, 0) + c
        return ChowClass.make(self.n, t)

    __radd__ = __add__

    def __neg__(self):
        return ChowClass.make(self.n, {k: -c for k, c in self.terms})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        return multiply(self, self._coerce(other))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = ChowClass.one(self.n)
        for _ in range(e):
            out = out * self
        return out

    def codimension_terms(self):
        return {a + (beta != "1") for (a, beta), _ in self.terms}

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (a, beta), c in self.terms:
            mono = []
            if beta != "1":
                mono.append("eps" + beta)
            if a:
                mono.append("xi" if a == 1 else f"xi^{a}")
            body = "*".join(mono) or "1"
            parts.append(f"{c}*{body}" if body != "1" else str(c))
        return " + ".join(parts).replace("+ -", "- ")


def multiply(a: ChowClass, b: ChowClass) -> ChowClass:
    if a.n != b.n:
        raise DimensionMismatch(f"classes on P(E) with n={a.n} and n={b.n}")
    out: Dict[Tuple[int, str], int] = {}
    for (i, x), c in a.terms:
        for (j, y), e in b.terms:
            if x != "1" and y != "1":
                continue
            beta = y if x == "1" else x
            key = (i + j, beta)
            out[key] = out.get(key, 0) + c * e
    # reducing a product of reduced classes: xi^(n+2) appears at most once per term
    return ChowClass.make(a.n, out)


@dataclass(frozen=True)
class LinearDegree:
    """c_E * degE + c_I * degI with integer coefficients."""
    c_e: int
    c_i: int

    def __neg__(self):
        return LinearDegree(-self.c_e, -self.c_i)

    def scaled(self, k: int) -> "LinearDegree":
        return LinearDegree(k * self.c_e, k * self.c_i)

    def __str__(self):
        if not (self.c_e or self.c_i):
            return "0"
        parts = []
        for c, sym in ((self.c_e, "degE"), (self.c_i, "degI")):
            if c:
                parts.append(f"{c}*{sym}")
        return " + ".join(parts).replace("+ -", "- ")


def degree(a: ChowClass) -> LinearDegree:
    top = a.n + 2
    ce = ci = 0
    for (k, beta), c in a.terms:
        codim = k + (beta != "1")
        if codim != top:
            raise NotTopDimensional(f"term xi^{k}*{beta} has codimension {codim}, need {top}")
        if beta == "E":
            ce += c
        else:
            ci += c
    return LinearDegree(ce, ci)


def delta_expression(n: int) -> LinearDegree:
    """Delta = -2 degE + (n + 2) degI."""
    return LinearDegree(-2, n + 2)


@dataclass(frozen=True)
class HeightIdentity:
    n: int
    height: LinearDegree
    delta: LinearDegree
    factor: int
    holds: bool

    def to_dict(self):
        return {"n": self.n,
                "h": str(self.height),
                "Delta": str(self.delta),
                "identity": f"{self.factor}*Delta",
                "holds": self.holds}


def verify_height_formula(n: int) -> HeightIdentity:
    """Expand h = -deg((epsE + n xi - epsI)^(n+1) (2 xi + epsI)) and compare with n^n Delta."""
    if not 1 <= n <= 6:
        raise ValueError("n must lie in 1..6")
    xi, e, i = ChowClass.xi(n), ChowClass.eps_e(n), ChowClass.eps_i(n)
    anticanonical = e + n * xi - i
    fundamental = 2 * xi + i
    h = -degree(anticanonical ** (n + 1) * fundamental)
    delta = delta_expression(n)
    factor = n ** n
    return HeightIdentity(n, h, delta, factor, h == delta.scaled(factor))
