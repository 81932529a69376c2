"""Quadric surface fibrations over P^1 given by a Gram matrix of binary forms.

A fibration is recorded by twists d = (d_1, ..., d_4), a parity e in {0, 1}
and a symmetric 4x4 matrix whose (i, j) entry is a binary form of degree
d_i + d_j + e.  This is the quadratic form q : E -> E^dual (x) O(e) with
E = O(-d_1) + ... + O(-d_4).
"""

from __future__ import annotations

import enum
import itertools
import random
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Optional, Sequence

from .errors import (DegenerateForm, DegreeMismatch, Inconsistent, InputError,
                     SamplingExhausted, SpecMismatch)
from .gfpoly import GF, BinaryForm, ProjPoint1
from .gfpoly import linalg

UPPER = [(i, j) for i in range(4) for j in range(i, 4)]


class Case(str, enum.Enum):
    CASE1 = "Case1"
    CASE2 = "Case2"
    CASE3 = "Case3"
    CASE4 = "Case4"
    UNBALANCED = "Unbalanced"

    @classmethod
    def parse(cls, x) -> "Case":
        if isinstance(x, Case):
            return x
        s = str(x)
        if s.isdigit():
            s = f"Case{s}"
        for c in cls:
            if c.value.lower() == s.lower():
                return c
        raise InputError(f"unknown case {x!r}")


# (case, n mod 2) -> (Delta mod 8, g mod 4); the census table over P^1
CENSUS_TABLE = {
    (Case.CASE1, 0): (0, 3),
    (Case.CASE1, 1): (4, 1),
    (Case.CASE2, 0): (2, 0),
    (Case.CASE2, 1): (6, 2),
    (Case.CASE3, 0): (4, 1),
    (Case.CASE3, 1): (0, 3),
    (Case.CASE4, 0): (6, 2),
    (Case.CASE4, 1): (2, 0),
}


def _perm_sign(perm) -> int:
    sign = 1
    perm = list(perm)
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            sign = -sign
    return sign


def form_determinant(field: GF, M) -> BinaryForm:
    """Leibniz expansion of a square matrix of binary forms.

    Terms whose product is ZERO are skipped, so matrices whose entries follow
    a consistent degree pattern always sum homogeneous terms.
    """
    n = len(M)
    total = BinaryForm.zero(field)
    for perm in itertools.permutations(range(n)):
        term = None
        for i, j in enumerate(perm):
            entry = M[i][j]
            if entry.is_zero():
                term = None
                break
            term = entry if term is None else term * entry
        if term is None:
            continue
        if _perm_sign(perm) < 0:
            term = -term
        total = total + term
    return total


@dataclass(frozen=True)
class FibrationSpec:
    field: GF
    d: tuple
    e: int
    gram: tuple

    def __post_init__(self):
        object.__setattr__(self, "d", tuple(int(x) for x in self.d))
        object.__setattr__(self, "gram", tuple(tuple(row) for row in self.gram))
        if len(self.d) != 4 or len(self.gram) != 4 or any(len(r) != 4 for r in self.gram):
            raise InputError("a fibration needs 4 twists and a 4x4 Gram matrix")
        if self.e not in (0, 1):
            raise Inconsistent(f"e must be normalized to 0 or 1, got {self.e}")
        for i, j in itertools.product(range(4), repeat=2):
            g = self.gram[i][j]
            if g.field != self.field:
                raise SpecMismatch(f"gram[{i}][{j}] is over {g.field!r}")
            if g != self.gram[j][i]:
                raise InputError(f"gram is not symmetric at ({i},{j})")
            want = self.d[i] + self.d[j] + self.e
            if not g.is_zero() and g.degree != want:
                raise DegreeMismatch(
                    f"gram[{i}][{j}] has degree {g.degree}, pattern requires {want}")
        if self.discriminant.is_zero():
            raise DegenerateForm("det(gram) is identically zero")

    @classmethod
    def from_upper(cls, field: GF, d, e, upper: Sequence) -> "FibrationSpec":
        """Build from the 10 upper-triangular entries in row-major (i<=j) order.

        Entries may be BinaryForms or descending coefficient lists.
        """
        if len(upper) != 10:
            raise InputError(f"expected 10 upper-triangular entries, got {len(upper)}")
        M = [[None] * 4 for _ in range(4)]
        for (i, j), entry in zip(UPPER, upper):
            if not isinstance(entry, BinaryForm):
                entry = BinaryForm(field, entry, degree=d[i] + d[j] + e) if entry else BinaryForm.zero(field)
            M[i][j] = M[j][i] = entry
        return cls(field, tuple(d), e, tuple(tuple(r) for r in M))

    @classmethod
    def diagonal(cls, field: GF, d, e, forms) -> "FibrationSpec":
        zero = BinaryForm.zero(field)
        M = [[zero] * 4 for _ in range(4)]
        for i, f in enumerate(forms):
            M[i][i] = f if isinstance(f, BinaryForm) else BinaryForm(field, f)
        return cls(field, tuple(d), e, tuple(tuple(r) for r in M))

    def upper(self):
        return [self.gram[i][j] for i, j in UPPER]

    @cached_property
    def discriminant(self) -> BinaryForm:
        return form_determinant(self.field, self.gram)

    @property
    def delta(self) -> int:
        return 2 * sum(self.d) + 4 * self.e

    def entry_degree(self, i: int, j: int) -> int:
        return self.d[i] + self.d[j] + self.e

    def same_data(self, other: "FibrationSpec") -> bool:
        return (self.field == other.field and self.d == other.d
                and self.e == other.e and self.gram == other.gram)

    def __repr__(self):
        return f"FibrationSpec({self.field!r}, d={self.d}, e={self.e})"


@dataclass(frozen=True)
class FibrationInvariants:
    delta: int
    genus: Optional[int]
    epsilon: int
    heightX: int
    case: Case
    degE: int

    def to_dict(self):
        return {"delta": self.delta, "genus": self.genus, "epsilon": self.epsilon,
                "heightX": self.heightX, "case": self.case.value, "degE": self.degE}


def discriminant(fib: FibrationSpec) -> BinaryForm:
    return fib.discriminant


def classify(d) -> Case:
    """Census case of a twist pattern, from its multiset only."""
    a = min(d)
    if any(x > a + 1 for x in d):
        return Case.UNBALANCED
    ups = sum(1 for x in d if x == a + 1)
    return [Case.CASE1, Case.CASE2, Case.CASE3, Case.CASE4][ups]


def invariants(fib: FibrationSpec) -> FibrationInvariants:
    delta = fib.delta
    if fib.discriminant.degree != delta:  # pragma: no cover - guarded at construction
        raise DegreeMismatch(f"deg det = {fib.discriminant.degree} != {delta}")
    genus = delta // 2 - 1 if delta >= 2 else None
    return FibrationInvariants(
        delta=delta, genus=genus, epsilon=fib.e, heightX=4 * delta,
        case=classify(fib.d), degE=-sum(fib.d))


def has_squarefree_discriminant(fib: FibrationSpec) -> bool:
    return fib.discriminant.is_squarefree()


@dataclass(frozen=True)
class Fiber:
    """The quadric X_b: an evaluated Gram matrix over the residue field of b."""

    b: ProjPoint1
    matrix: tuple
    rank: int
    kernel: Optional[tuple]

    @property
    def field(self) -> GF:
        return self.b.field

    def scalars(self):
        F = self.field
        return [[F(x) for x in row] for row in self.matrix]

    def value(self, x) -> int:
        return linalg.bilinear(self.field, self.matrix, x, x)

    @property
    def disc(self) -> int:
        return linalg.det(self.field, self.matrix)


@lru_cache(maxsize=4096)
def fiber_at(fib: FibrationSpec, b: ProjPoint1) -> Fiber:
    K = b.field
    if not K.contains(fib.field):
        raise SpecMismatch(f"{b!r} is not over an extension of {fib.field!r}")
    M = tuple(tuple(fib.gram[i][j].evaluate_codes(K, b.u, b.v) for j in range(4))
              for i in range(4))
    rk = linalg.rank(K, M)
    ker = None
    if rk == 3:
        ker = linalg.normalize(K, linalg.kernel(K, M, 4)[0])
    return Fiber(b, M, rk, ker)


def normalize(d, e: int, gram) -> FibrationSpec:
    """Twist so that e lands in {0, 1}; entries of ``gram`` are unchanged."""
    c = e // 2
    nd = tuple(x + c for x in d)
    ne = e - 2 * c
    if min(nd) < 0:
        raise Inconsistent(f"twists {tuple(d)}, e={e} normalize to negative {nd}")
    field = gram[0][0].field
    return FibrationSpec(field, nd, ne, gram)


def census_pattern(case, n: int):
    """Twist pattern and parity of the balanced census family with parameter n."""
    case = Case.parse(case)
    if n < 0:
        raise InputError("census parameter n must be >= 0")
    e = n % 2
    m = (n - e) // 2
    ups = {Case.CASE1: 0, Case.CASE2: 1, Case.CASE3: 2, Case.CASE4: 3}.get(case)
    if ups is None:
        raise InputError("the census has no unbalanced family")
    d = tuple([m + 1] * ups + [m] * (4 - ups))
    return d, e


def random_gram(field: GF, d, e, rng: random.Random):
    upper = []
    for i, j in UPPER:
        deg = d[i] + d[j] + e
        if deg < 0:
            upper.append(BinaryForm.zero(field))
        else:
            upper.append(BinaryForm.from_codes(field, [field.random(rng) for _ in range(deg + 1)]))
    return upper


@dataclass(frozen=True)
class CensusSample:
    fib: FibrationSpec
    tries: int
    seed: int


def sample_census(field: GF, case, n: int, tries: int = 1000, rng=None, seed: int = 0) -> CensusSample:
    """Uniform Gram matrix of the census pattern with square-free discriminant."""
    d, e = census_pattern(case, n)
    if rng is None:
        rng = random.Random(seed)
    for attempt in range(1, tries + 1):
        upper = random_gram(field, d, e, rng)
        try:
            fib = FibrationSpec.from_upper(field, d, e, upper)
        except DegenerateForm:
            continue
        if has_squarefree_discriminant(fib):
            return CensusSample(fib, attempt, seed)
    raise SamplingExhausted(f"no square-free sample for {case} n={n} in {tries} tries")


def census_row_ok(fib: FibrationSpec, n: int) -> bool:
    """Does the fibration match its census table row (Delta, epsilon, g)?"""
    inv = invariants(fib)
    want = CENSUS_TABLE.get((inv.case, n % 2))
    if want is None:
        return False
    formal_genus = inv.delta // 2 - 1
    return (inv.delta % 8 == want[0] and formal_genus % 4 == want[1]
            and inv.epsilon == n % 2 and inv.delta == 2 * formal_genus + 2)


def cofactors(fib: FibrationSpec):
    """The 3x3 minors of the Gram matrix (upper triangle, by symmetry)."""
    out = []
    for i, j in UPPER:
        rows = [r for r in range(4) if r != i]
        cols = [c for c in range(4) if c != j]
        sub = [[fib.gram[r][c] for c in cols] for r in rows]
        out.append(form_determinant(fib.field, sub))
    return out


def discriminant_fibers_have_rank3(fib: FibrationSpec) -> bool:
    """True iff every fiber over a root of the discriminant has rank exactly 3.

    Rank <= 2 at b means every 3x3 minor vanishes at b, so the criterion is
    that the discriminant and all minors share no root.
    """
    g = fib.discriminant
    for m in cofactors(fib):
        g = g.gcd(m)
    return g.degree == 0


def discriminant_fiber_ranks(fib: FibrationSpec, max_ext: int, budget: int = 10 ** 6):
    """Explicit (root, multiplicity, fiber rank) over extensions up to max_ext."""
    out = []
    for b, mult in fib.discriminant.projective_roots(max_ext, budget):
        out.append((b, mult, fiber_at(fib, b).rank))
    return out


def projective_points(K: GF, n: int):
    """Normalized points of P^(n-1)(K) as an (N, n) code array, lexicographic."""
    import numpy as np

    blocks = []
    q = K.q
    for lead in range(n):
        free = n - 1 - lead
        idx = np.arange(q ** free, dtype=np.int64)
        block = np.zeros((q ** free, n), dtype=np.int64)
        block[:, lead] = 1
        for col in range(n - 1, lead, -1):
            block[:, col] = idx % q
            idx //= q
        blocks.append(block)
    return np.concatenate(blocks)


def fiber_points(fiber: Fiber, limit: int = 2_000_000):
    """All K-points of the fiber quadric, as normalized code tuples."""
    import numpy as np

    from .gfpoly.field import numpy_tables

    K = fiber.field
    if (K.q ** 4 - 1) // (K.q - 1) > limit:
        raise InputError(f"fiber over {K!r} too large to enumerate")
    add, mul, _ = numpy_tables(K)
    pts = projective_points(K, 4)
    M = fiber.matrix
    total = np.zeros(len(pts), dtype=np.int64)
    for i in range(4):
        for j in range(i, 4):
            c = M[i][j] if i == j else K.add(M[i][j], M[j][i])
            if c:
                term = mul[c, mul[pts[:, i], pts[:, j]]]
                total = add[total, term]
    return [tuple(int(x) for x in row) for row in pts[total == 0]]
