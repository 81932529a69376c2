"""Finite fields F_{p^k} for odd p.

Elements are stored as integer codes: the residue vector (c_0, ..., c_{k-1})
of the power-basis representation packs into ``sum(c_i * p**i)``.  The prime
subfield therefore sits at codes ``0..p-1``, which keeps constants cheap.
``Scalar`` wraps a code together with its field for the public API; the
hot loops elsewhere in the package work on raw codes through the ``GF``
methods.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from ..errors import DivisionByZero, InputError, NotASquare, SpecMismatch

# fields up to this order get log/exp tables for multiplication
_TABLE_LIMIT = 1 << 16
# and up to this order a full addition table
_ADD_TABLE_LIMIT = 256


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid far beyond 2**64."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for s in small:
        if n % s == 0:
            return n == s
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


# -- dense polynomials over F_p, ascending coefficient lists -----------------

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, m, p):
    a = _trim(list(a))
    inv_lead = pow(m[-1], p - 2, p)
    dm = len(m) - 1
    while len(a) - 1 >= dm and a:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _trim(a)
    return a


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _pgcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _ppowmod(base, e, m, p):
    result = [1]
    base = _pmod(base, m, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), m, p)
        base = _pmod(_pmul(base, base, p), m, p)
        e >>= 1
    return result


def is_irreducible_mod_p(f, p) -> bool:
    """Irreducibility of a monic polynomial over F_p (Ben-Or test)."""
    f = _trim(list(f))
    k = len(f) - 1
    if k <= 0:
        return False
    if k == 1:
        return True
    x = [0, 1]
    h = x
    for _ in range(k // 2):
        h = _ppowmod(h, p, f, p)
        diff = list(h) + [0] * max(0, 2 - len(h))
        diff[1] = (diff[1] - 1) % p
        if len(_pgcd(f, diff, p)) > 1:
            return False
    return True


def least_irreducible(p: int, k: int):
    """Lexicographically least monic irreducible of degree k over F_p.

    Candidates are ordered by the residue tuple (c_0, ..., c_{k-1}).
    """
    for tail in itertools.product(range(p), repeat=k):
        f = list(tail) + [1]
        if f[0] == 0:
            continue
        if is_irreducible_mod_p(f, p):
            return tuple(f)
    raise InputError(f"no irreducible polynomial of degree {k} over F_{p}")


class GF:
    """The field F_q, q = p**k, with a fixed power-basis modulus."""

    def __init__(self, p: int, k: int = 1, modulus=None):
        if p == 2 or not is_prime(p):
            raise InputError(f"characteristic must be an odd prime, got {p}")
        if k < 1:
            raise InputError(f"extension degree must be >= 1, got {k}")
        self.p = p
        self.k = k
        self.q = p ** k
        if k == 1:
            self.modulus = None
        else:
            if modulus is None:
                modulus = least_irreducible(p, k)
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != k + 1 or modulus[-1] != 1:
                raise InputError("modulus must be monic of degree k")
            if not is_irreducible_mod_p(modulus, p):
                raise InputError(f"modulus {modulus} is reducible over F_{p}")
            self.modulus = modulus
        self._exp = None
        self._log = None
        self._add_table = None
        self._nonsquare = None
        self._embeddings = {}
        if k > 1 and self.q <= _TABLE_LIMIT:
            self._build_tables()

    # -- identity ---------------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, GF) and (self.p, self.k, self.modulus) == (
            other.p, other.k, other.modulus)

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))

    def __repr__(self):
        if self.k == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.k})"

    def __call__(self, x) -> "Scalar":
        return Scalar(self, self.code(x))

    # -- codes ----------------------------------------------------------------
    def code(self, x) -> int:
        """Coerce an int, residue sequence or Scalar to a code.

        An int in range(q) is already a code; any other int is read as an
        integer of the prime field and reduced mod p.
        """
        if isinstance(x, Scalar):
            if x.field != self:
                raise SpecMismatch(f"{x!r} does not belong to {self!r}")
            return x.v
        if isinstance(x, int):
            return x if 0 <= x < self.q else x % self.p
        if isinstance(x, (list, tuple)):
            return self.from_residues(x)
        raise TypeError(f"cannot coerce {x!r} into {self!r}")

    def residues(self, a: int):
        out = []
        for _ in range(self.k):
            a, r = divmod(a, self.p)
            out.append(r)
        return tuple(out)

    def from_residues(self, res) -> int:
        if len(res) > self.k:
            raise SpecMismatch(f"residue list {list(res)} too long for {self!r}")
        v = 0
        for r in reversed(list(res)):
            v = v * self.p + int(r) % self.p
        return v

    def key(self, a: int):
        """Lexicographic ordering key: the residue tuple, constant term first."""
        return self.residues(a) if self.k > 1 else a

    def elements(self):
        return range(self.q)

    def random(self, rng) -> int:
        return rng.randrange(self.q)

    # -- arithmetic on codes ---------------------------------------------------
    def _build_tables(self):
        q = self.q
        gen = None
        order = q - 1
        prime_factors = [r for r in range(2, order + 1)
                         if order % r == 0 and is_prime(r)]
        for cand in range(self.p, q):
            if all(self._slow_pow(cand, order // r) != 1 for r in prime_factors):
                gen = cand
                break
        exp = [0] * (2 * order)
        log = [0] * q
        x = 1
        for i in range(order):
            exp[i] = x
            log[x] = i
            x = self._slow_mul(x, gen)
        for i in range(order, 2 * order):
            exp[i] = exp[i - order]
        self._exp, self._log = exp, log
        if q <= _ADD_TABLE_LIMIT:
            self._add_table = [[self._slow_add(a, b) for b in range(q)]
                               for a in range(q)]

    def _slow_add(self, a, b):
        p = self.p
        out, scale = 0, 1
        while a or b:
            a, ra = divmod(a, p)
            b, rb = divmod(b, p)
            out += ((ra + rb) % p) * scale
            scale *= p
        return out

    def _slow_mul(self, a, b):
        prod = _pmul(list(self.residues(a)), list(self.residues(b)), self.p)
        return self.from_residues(_pmod(prod, self.modulus, self.p) if prod else [])

    def _slow_pow(self, a, e):
        result = 1
        while e:
            if e & 1:
                result = self._slow_mul(result, a)
            a = self._slow_mul(a, a)
            e >>= 1
        return result

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        if self._add_table is not None:
            return self._add_table[a][b]
        return self._slow_add(a, b)

    def neg(self, a: int) -> int:
        if self.k == 1:
            return -a % self.p
        p = self.p
        out, scale = 0, 1
        while a:
            a, r = divmod(a, p)
            out += (-r % p) * scale
            scale *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        if self._log is not None:
            return self._exp[self._log[a] + self._log[b]]
        return self._slow_mul(a, b)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        if self.k == 1:
            return pow(a, e, self.p)
        if a == 0:
            return 1 if e == 0 else 0
        if self._log is not None:
            return self._exp[self._log[a] * e % (self.q - 1)]
        return self._slow_pow(a, e)

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero(f"inverse of zero in {self!r}")
        if self.k == 1:
            return pow(a, self.p - 2, self.p)
        if self._log is not None:
            return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]
        return self._slow_pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def is_square(self, a: int) -> bool:
        if a == 0:
            return True
        return self.pow(a, (self.q - 1) // 2) == 1

    def nonsquare(self) -> int:
        if self._nonsquare is None:
            self._nonsquare = next(a for a in range(1, self.q)
                                   if not self.is_square(a))
        return self._nonsquare

    def sqrt(self, a: int) -> int:
        """Square root with the lexicographically smaller representation."""
        if a == 0:
            return 0
        if not self.is_square(a):
            raise NotASquare(f"{self(a)!r} is not a square in {self!r}")
        # Tonelli-Shanks in F_q
        q1, s = self.q - 1, 0
        while q1 % 2 == 0:
            q1 //= 2
            s += 1
        z = self.pow(self.nonsquare(), q1)
        x = self.pow(a, (q1 + 1) // 2)
        t = self.pow(a, q1)
        m = s
        while t != 1:
            i, t2 = 0, t
            while t2 != 1:
                t2 = self.mul(t2, t2)
                i += 1
            b = z
            for _ in range(m - i - 1):
                b = self.mul(b, b)
            x = self.mul(x, b)
            z = self.mul(b, b)
            t = self.mul(t, z)
            m = i
        other = self.neg(x)
        return min(x, other, key=self.key)

    def frobenius(self, a: int, times: int = 1) -> int:
        """a -> a**(p**times)."""
        return self.pow(a, self.p ** times) if times else a

    # -- towers -----------------------------------------------------------
    def extension(self, m: int) -> "GF":
        """The degree-m extension F_{q^m}, with its own canonical modulus."""
        if m == 1:
            return self
        return gf(self.p, self.k * m)

    def contains(self, other: "GF") -> bool:
        return other.p == self.p and self.k % other.k == 0

    def embedding(self, sub: "GF"):
        """Code map from the subfield ``sub`` into this field.

        Returns a list indexed by codes of ``sub``.  For the prime subfield
        this is the identity on 0..p-1.
        """
        if sub == self:
            return None
        if not self.contains(sub):
            raise SpecMismatch(f"{sub!r} is not a subfield of {self!r}")
        cached = self._embeddings.get(sub)
        if cached is not None:
            return cached
        if sub.k == 1:
            table = list(range(sub.q))
        else:
            # least root of the subfield modulus, found by enumeration
            mod = [c for c in sub.modulus]
            alpha = None
            for cand in range(self.q):
                acc = 0
                for c in reversed(mod):
                    acc = self.add(self.mul(acc, cand), c)
                if acc == 0:
                    alpha = cand
                    break
            if alpha is None:  # pragma: no cover - guaranteed by field theory
                raise SpecMismatch("subfield modulus has no root")
            powers = [1]
            for _ in range(sub.k - 1):
                powers.append(self.mul(powers[-1], alpha))
            table = []
            for a in range(sub.q):
                acc = 0
                for r, pw in zip(sub.residues(a), powers):
                    if r:
                        acc = self.add(acc, self.mul(r, pw))
                table.append(acc)
        self._embeddings[sub] = table
        return table

    def lift(self, sub: "GF", a: int) -> int:
        table = self.embedding(sub)
        return a if table is None else table[a]

    def degree_over(self, a: int, sub: "GF") -> int:
        """Degree of the element a over the subfield ``sub`` (Frobenius orbit size)."""
        step = sub.k
        x = a
        for j in range(1, self.k // step + 1):
            x = self.frobenius(x, step)
            if x == a:
                return j
        return self.k // step  # pragma: no cover


@lru_cache(maxsize=None)
def gf(p: int, k: int = 1) -> GF:
    """Cached constructor using the canonical (least irreducible) modulus."""
    return GF(p, k)


class Scalar:
    """An element of a finite field."""

    __slots__ = ("field", "v")

    def __init__(self, field: GF, v: int):
        self.field = field
        self.v = v

    @property
    def residues(self):
        return self.field.residues(self.v)

    def _other(self, other):
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise SpecMismatch(f"{self.field!r} vs {other.field!r}")
            return other.v
        if isinstance(other, int):
            return other % self.field.p
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Scalar(self.field, self.field.add(self.v, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Scalar(self.field, self.field.sub(self.v, o))

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Scalar(self.field, self.field.sub(o, self.v))

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Scalar(self.field, self.field.mul(self.v, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Scalar(self.field, self.field.div(self.v, o))

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Scalar(self.field, self.field.div(o, self.v))

    def __neg__(self):
        return Scalar(self.field, self.field.neg(self.v))

    def __pow__(self, e: int):
        return Scalar(self.field, self.field.pow(self.v, e))

    def inv(self):
        return Scalar(self.field, self.field.inv(self.v))

    def is_square(self) -> bool:
        return self.field.is_square(self.v)

    def sqrt(self) -> "Scalar":
        return Scalar(self.field, self.field.sqrt(self.v))

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.field == other.field and self.v == other.v
        if isinstance(other, int):
            return self.v == other % self.field.p and (self.field.k == 1 or self.v < self.field.p)
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.v))

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        if self.v >= self.field.p:
            raise TypeError(f"{self!r} is not in the prime field")
        return self.v

    def __repr__(self):
        if self.field.k == 1:
            return f"{self.v}"
        return f"{list(self.residues)}"


def enumerate_all(field: GF):
    """All q elements as Scalars, ordered by code."""
    return [Scalar(field, a) for a in field.elements()]


def sample_uniform(field: GF, rng) -> Scalar:
    return Scalar(field, field.random(rng))


def numpy_tables(field: GF):
    """(add, mul, neg) lookup tables as numpy arrays, cached on the field."""
    import numpy as np

    cached = getattr(field, "_np_tables", None)
    if cached is None:
        q = field.q
        if field.k == 1:
            a = np.arange(q, dtype=np.int64)
            add = (a[:, None] + a[None, :]) % q
            mul = (a[:, None] * a[None, :]) % q
            neg = (-a) % q
        else:
            add = np.array([[field.add(x, y) for y in range(q)] for x in range(q)], dtype=np.int64)
            mul = np.array([[field.mul(x, y) for y in range(q)] for x in range(q)], dtype=np.int64)
            neg = np.array([field.neg(x) for x in range(q)], dtype=np.int64)
        cached = (add, mul, neg)
        field._np_tables = cached
    return cached
