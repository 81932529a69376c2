"""Binary forms over F_q and points of the projective line.

A ``BinaryForm`` of degree d stores coefficients c_0..c_d with c_i the
coefficient of u^(d-i) v^i.  The zero form has no degree.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import (DegreeMismatch, ExtensionTooLarge, InexactDivision,
                      SpecMismatch, ZeroForm)
from .field import GF, Scalar

DEFAULT_ROOT_BUDGET = 10 ** 6


# -- univariate helpers on ascending code lists -------------------------------

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def upoly_divmod(F: GF, a, b):
    a = _trim(list(a))
    b = _trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = F.inv(b[-1])
    db = len(b) - 1
    quot = [0] * max(0, len(a) - db)
    while len(a) - 1 >= db and a:
        shift = len(a) - 1 - db
        c = F.mul(a[-1], inv_lead)
        quot[shift] = c
        for i, bi in enumerate(b):
            if bi:
                a[shift + i] = F.sub(a[shift + i], F.mul(c, bi))
        _trim(a)
    return quot, a


def upoly_gcd(F: GF, a, b):
    """Monic gcd of two univariate polynomials (ascending codes)."""
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, upoly_divmod(F, a, b)[1]
    if not a:
        return []
    inv_lead = F.inv(a[-1])
    return [F.mul(c, inv_lead) for c in a]


def upoly_derivative(F: GF, a):
    return _trim([F.mul(i % F.p, c) for i, c in enumerate(a)][1:])


def upoly_eval(F: GF, a, x):
    acc = 0
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


# -- projective line ----------------------------------------------------------

@dataclass(frozen=True)
class ProjPoint1:
    """A point [u:v] of P^1 over ``field``, first nonzero coordinate 1."""

    field: GF
    u: int
    v: int

    @classmethod
    def make(cls, field: GF, u, v) -> "ProjPoint1":
        u, v = field.code(u), field.code(v)
        if u == 0 and v == 0:
            raise ValueError("[0:0] is not a projective point")
        if u:
            inv = field.inv(u)
            return cls(field, 1, field.mul(v, inv))
        return cls(field, 0, 1)

    @property
    def coords(self):
        return (Scalar(self.field, self.u), Scalar(self.field, self.v))

    def key(self):
        return (self.field.key(self.u), self.field.key(self.v))

    def to(self, target: GF) -> "ProjPoint1":
        """The same point viewed in a larger field."""
        if target == self.field:
            return self
        return ProjPoint1(target, target.lift(self.field, self.u),
                          target.lift(self.field, self.v))

    def degree_over(self, base: GF) -> int:
        """Degree of the residue field of this point over ``base``."""
        if self.u == 0:
            return 1
        return self.field.degree_over(self.v, base)

    def conjugate(self, base: GF) -> "ProjPoint1":
        return ProjPoint1(self.field, self.u, self.field.frobenius(self.v, base.k))

    def label(self) -> str:
        return f"{_fmt(self.field, self.u)}:{_fmt(self.field, self.v)}"

    def __repr__(self):
        return f"[{self.label()}]"


def _fmt(F: GF, a: int) -> str:
    if F.k == 1:
        return str(a)
    return ",".join(str(r) for r in F.residues(a))


def points_of_p1(F: GF):
    """All points of P^1(F) in a fixed order: [0:1], then [1:t] by code."""
    yield ProjPoint1(F, 0, 1)
    for t in range(F.q):
        yield ProjPoint1(F, 1, t)


# -- binary forms -------------------------------------------------------------

class BinaryForm:
    __slots__ = ("field", "degree", "_c")

    def __init__(self, field: GF, coeffs, degree=None):
        """``coeffs`` may be codes, ints, residue lists or Scalars.

        An all-zero coefficient list yields the ZERO form.  The degree
        defaults to ``len(coeffs) - 1``.
        """
        codes = tuple(field.code(c) for c in coeffs)
        if degree is None:
            degree = len(codes) - 1
        if codes and len(codes) != degree + 1:
            raise DegreeMismatch(f"{len(codes)} coefficients for degree {degree}")
        if not any(codes):
            self.field, self.degree, self._c = field, None, ()
        else:
            self.field, self.degree, self._c = field, degree, codes

    @classmethod
    def zero(cls, field: GF) -> "BinaryForm":
        return cls(field, ())

    @classmethod
    def from_codes(cls, field: GF, codes) -> "BinaryForm":
        f = cls.__new__(cls)
        codes = tuple(codes)
        if any(codes):
            f.field, f.degree, f._c = field, len(codes) - 1, codes
        else:
            f.field, f.degree, f._c = field, None, ()
        return f

    @classmethod
    def constant(cls, field: GF, c) -> "BinaryForm":
        return cls(field, [c])

    @classmethod
    def monomial(cls, field: GF, a: int, b: int, c=1) -> "BinaryForm":
        """c * u^a v^b."""
        codes = [0] * (a + b + 1)
        codes[b] = field.code(c)
        return cls(field, codes)

    # -- accessors --------------------------------------------------------
    @property
    def codes(self):
        return self._c

    @property
    def coeffs(self):
        return tuple(Scalar(self.field, c) for c in self._c)

    def is_zero(self) -> bool:
        return self.degree is None

    def __bool__(self):
        return self.degree is not None

    def __eq__(self, other):
        if not isinstance(other, BinaryForm):
            return NotImplemented
        return (self.field == other.field and self.degree == other.degree
                and self._c == other._c)

    def __hash__(self):
        return hash((self.field, self.degree, self._c))

    def __repr__(self):
        if self.is_zero():
            return "ZERO"
        F = self.field
        d = self.degree
        terms = []
        for i, c in enumerate(self._c):
            if not c:
                continue
            mono = "".join(
                part for part in (
                    "" if d - i == 0 else ("u" if d - i == 1 else f"u^{d - i}"),
                    "" if i == 0 else ("v" if i == 1 else f"v^{i}"))
            )
            coef = _fmt(F, c) if F.k == 1 else f"[{_fmt(F, c)}]"
            if mono and coef == "1":
                terms.append(mono)
            else:
                terms.append(coef + ("*" + mono if mono else ""))
        return " + ".join(terms)

    def _check(self, other: "BinaryForm"):
        if self.field != other.field:
            raise SpecMismatch(f"forms over {self.field!r} and {other.field!r}")

    # -- ring operations --------------------------------------------------
    def __add__(self, other: "BinaryForm") -> "BinaryForm":
        self._check(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.degree != other.degree:
            raise DegreeMismatch(f"adding degree {self.degree} and {other.degree}")
        F = self.field
        return BinaryForm.from_codes(F, (F.add(a, b) for a, b in zip(self._c, other._c)))

    def __neg__(self) -> "BinaryForm":
        F = self.field
        return BinaryForm.from_codes(F, (F.neg(a) for a in self._c))

    def __sub__(self, other: "BinaryForm") -> "BinaryForm":
        return self + (-other)

    def __mul__(self, other) -> "BinaryForm":
        if isinstance(other, (int, Scalar)):
            return self.scale(other)
        self._check(other)
        if self.is_zero() or other.is_zero():
            return BinaryForm.zero(self.field)
        F = self.field
        out = [0] * (self.degree + other.degree + 1)
        for i, a in enumerate(self._c):
            if a:
                for j, b in enumerate(other._c):
                    if b:
                        out[i + j] = F.add(out[i + j], F.mul(a, b))
        return BinaryForm.from_codes(F, out)

    __rmul__ = __mul__

    def scale(self, c) -> "BinaryForm":
        F = self.field
        c = F.code(c)
        return BinaryForm.from_codes(F, (F.mul(c, a) for a in self._c))

    def __pow__(self, e: int) -> "BinaryForm":
        out = BinaryForm.constant(self.field, 1)
        for _ in range(e):
            out = out * self
        return out

    def evaluate_at(self, point: ProjPoint1) -> Scalar:
        return Scalar(point.field, self.evaluate_codes(point.field, point.u, point.v))

    def evaluate_codes(self, K: GF, u: int, v: int) -> int:
        """Evaluate at (u, v) given as codes of K (an extension of the base)."""
        if self.is_zero():
            return 0
        table = K.embedding(self.field)
        d = self.degree
        acc = 0
        # Horner in the ratio: sum c_i u^(d-i) v^i
        upow = [1]
        for _ in range(d):
            upow.append(K.mul(upow[-1], u))
        vp = 1
        for i, c in enumerate(self._c):
            if c:
                cc = c if table is None else table[c]
                acc = K.add(acc, K.mul(cc, K.mul(upow[d - i], vp)))
            vp = K.mul(vp, v)
        return acc

    def derivative_u(self) -> "BinaryForm":
        if self.is_zero() or self.degree == 0:
            return BinaryForm.zero(self.field)
        F, d = self.field, self.degree
        return BinaryForm.from_codes(
            F, (F.mul((d - i) % F.p, c) for i, c in enumerate(self._c[:-1])))

    def derivative_v(self) -> "BinaryForm":
        if self.is_zero() or self.degree == 0:
            return BinaryForm.zero(self.field)
        F = self.field
        return BinaryForm.from_codes(
            F, (F.mul(i % F.p, c) for i, c in enumerate(self._c) if i > 0))

    # -- divisibility -----------------------------------------------------
    def infinity_multiplicity(self) -> int:
        """Multiplicity of the root [1:0], i.e. the power of v dividing f."""
        if self.is_zero():
            raise ZeroForm("zero form has no roots to count")
        n = 0
        for c in self._c:
            if c:
                break
            n += 1
        return n

    def dehomogenize(self):
        """f(t, 1) as an ascending code list (degree drops at [1:0])."""
        return _trim(list(reversed(self._c)))

    @classmethod
    def homogenize(cls, F: GF, a, degree: int) -> "BinaryForm":
        """Inverse of ``dehomogenize`` for a target degree >= deg a."""
        a = _trim(list(a))
        if not a:
            return cls.zero(F)
        if len(a) - 1 > degree:
            raise DegreeMismatch("target degree below polynomial degree")
        codes = list(reversed(a))
        codes = [0] * (degree + 1 - len(codes)) + codes
        return cls.from_codes(F, codes)

    def monic(self) -> "BinaryForm":
        if self.is_zero():
            return self
        lead = next(c for c in self._c if c)
        return self.scale(self.field.inv(lead))

    def gcd(self, other: "BinaryForm") -> "BinaryForm":
        """Monic gcd: first nonzero coefficient in the u-ordering equals 1."""
        self._check(other)
        if self.is_zero():
            return other.monic()
        if other.is_zero():
            return self.monic()
        F = self.field
        m = min(self.infinity_multiplicity(), other.infinity_multiplicity())
        g = upoly_gcd(F, self.dehomogenize(), other.dehomogenize())
        r = len(g) - 1
        return BinaryForm.homogenize(F, g, r + m)

    def divide_exact(self, other: "BinaryForm") -> "BinaryForm":
        self._check(other)
        if other.is_zero():
            raise InexactDivision("division by the zero form")
        if self.is_zero():
            return self
        F = self.field
        dq = self.degree - other.degree
        if dq < 0:
            raise InexactDivision(f"degree {self.degree} by degree {other.degree}")
        # substitute u = 1; the quotient must fit in degree dq
        quot, rem = upoly_divmod(F, self._c, other._c)
        if rem or len(_trim(list(quot))) > dq + 1:
            raise InexactDivision(f"{other!r} does not divide {self!r}")
        quot = list(quot) + [0] * (dq + 1 - len(quot))
        return BinaryForm.from_codes(F, quot[:dq + 1])

    def divides(self, other: "BinaryForm") -> bool:
        try:
            other.divide_exact(self)
        except InexactDivision:
            return False
        return True

    def is_squarefree(self) -> bool:
        if self.is_zero():
            raise ZeroForm("is_squarefree of the zero form")
        if self.infinity_multiplicity() > 1:
            return False
        a = self.dehomogenize()
        if len(a) <= 1:
            return True
        g = upoly_gcd(self.field, a, upoly_derivative(self.field, a))
        return len(g) <= 1

    def projective_roots(self, max_ext: int = 1, budget: int = DEFAULT_ROOT_BUDGET):
        """Roots over extensions of degree <= max_ext, one per Galois orbit.

        Returns a list of (ProjPoint1, multiplicity).  Points over a degree-m
        extension are expressed in ``field.extension(m)``; the representative
        of each orbit is the one with the least normalized coordinates.
        """
        if self.is_zero():
            raise ZeroForm("projective_roots of the zero form")
        F = self.field
        if F.q ** max_ext > budget:
            raise ExtensionTooLarge(
                f"q^{max_ext} = {F.q ** max_ext} exceeds root budget {budget}")
        out = []
        mult_inf = self.infinity_multiplicity()
        # [0:1] is a root iff u divides f, i.e. c_d == 0
        if self._c[-1] == 0:
            n = 0
            for c in reversed(self._c):
                if c:
                    break
                n += 1
            out.append((ProjPoint1(F, 0, 1), n))
        if mult_inf:
            out.append((ProjPoint1(F, 1, 0), mult_inf))
        # remaining roots [1:s], s != 0: roots of f(1, s) = sum c_i s^i
        poly = _trim(list(self._c))
        for m in range(1, max_ext + 1):
            K = F.extension(m)
            table = K.embedding(F)
            lifted = poly if table is None else [table[c] for c in poly]
            seen = set()
            for s in range(1, K.q):
                if s in seen:
                    continue
                if upoly_eval(K, lifted, s) != 0:
                    continue
                if K.degree_over(s, F) != m:
                    continue
                orbit = [s]
                x = K.frobenius(s, F.k)
                while x != s:
                    orbit.append(x)
                    x = K.frobenius(x, F.k)
                seen.update(orbit)
                rep = min(orbit, key=K.key)
                mult = 0
                rest = lifted
                while True:
                    quot, rem = upoly_divmod(K, rest, [K.neg(rep), 1])
                    if rem:
                        break
                    mult += 1
                    rest = quot
                out.append((ProjPoint1(K, 1, rep), mult))
        return sorted(out, key=lambda pm: (pm[0].field.k, pm[0].key()))


def form_from_coeffs(field: GF, coeffs) -> BinaryForm:
    """Form from a descending-power coefficient list ([] is ZERO)."""
    return BinaryForm(field, coeffs)
