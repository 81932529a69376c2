"""Sections of a quadric surface fibration over P^1 and searches for them.

A section of height h is a saturated line subbundle O(-f) -> E, i.e. four
binary forms s_i of degree f - d_i (some possibly ZERO) with no common
root, satisfying sum_ij gram_ij s_i s_j = 0.  Its height is
-sum(d) + 2f - e.

Two search strategies are provided.  Direct enumeration walks every
canonically scaled coefficient vector.  Fiber interpolation fixes the value
of the section at a few points b off the discriminant: choosing a point x of
the fiber X_b imposes the linear conditions s(b) || x, and the remaining
solution space is small enough to walk.  A saturated section passes through
exactly one fiber point over each b, so every section is met exactly once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Optional, Sequence

import numpy as np

from .errors import (BudgetExceeded, ConstraintOffQuadric,
                     ConstraintOnDiscriminant, InputError, InvalidSection,
                     NotEnoughInterpolationPoints, PreconditionError)
from .fibration import FibrationSpec, fiber_at, fiber_points, invariants
from .gfpoly import GF, BinaryForm, ProjPoint1, linalg
from .gfpoly.forms import points_of_p1

DEFAULT_BUDGET = 10 ** 7
_CHUNK = 1 << 15


# -- the Section type ---------------------------------------------------------

@dataclass(frozen=True)
class Section:
    fib: FibrationSpec
    f: int
    s: tuple

    @property
    def height(self) -> int:
        return height_of(self.fib, self.f)

    def vector(self):
        return Layout(self.fib, self.f).vector(self.s)

    def key(self):
        F = self.fib.field
        return tuple(F.key(c) for c in self.vector())

    def at(self, b: ProjPoint1):
        """sigma(b) as a code vector over the field of b (not normalized)."""
        return tuple(si.evaluate_codes(b.field, b.u, b.v) for si in self.s)

    def point_at(self, b: ProjPoint1):
        return linalg.normalize(b.field, self.at(b))

    @property
    def has_zero_component(self) -> bool:
        return any(si.is_zero() for si in self.s)

    def to_dict(self):
        from .io import form_to_json
        return {"f": self.f,
                "s": [form_to_json(si) for si in self.s],
                "h": self.height,
                "zero_component": self.has_zero_component}

    def __repr__(self):
        return f"Section(f={self.f}, h={self.height}, s={list(self.s)})"


def height_of(fib: FibrationSpec, f: int) -> int:
    return -sum(fib.d) + 2 * f - fib.e


def height(sec: Section) -> int:
    return sec.height


def twist_for_height(fib: FibrationSpec, h: int) -> Optional[int]:
    """The twist f with height h, or None when h has the wrong parity."""
    num = h + sum(fib.d) + fib.e
    if num % 2:
        return None
    return num // 2


def minimal_height(fib: FibrationSpec) -> int:
    """Least height at which some component can be nonzero (f = min d)."""
    return height_of(fib, min(fib.d))


def existence_bound(fib: FibrationSpec) -> int:
    """Height below which a rational section must exist over a finite field."""
    return fib.delta // 2 - (2 if fib.e == 0 else 3)


def weak_approximation_bound(fib: FibrationSpec, n_points: int) -> int:
    return (3 * fib.delta) // 2 + 2 * n_points


def section_problems(sec: Section) -> list:
    """Independent check of the Section invariants; empty list when valid."""
    fib, f = sec.fib, sec.f
    F = fib.field
    problems = []
    if len(sec.s) != 4:
        return ["section needs 4 components"]
    for i, si in enumerate(sec.s):
        if si.field != F:
            problems.append(f"s{i + 1} over the wrong field")
        elif not si.is_zero() and si.degree != f - fib.d[i]:
            problems.append(f"s{i + 1} has degree {si.degree}, expected {f - fib.d[i]}")
    nonzero = [si for si in sec.s if not si.is_zero()]
    if not nonzero:
        return problems + ["all components are ZERO"]
    if problems:
        return problems
    total = BinaryForm.zero(F)
    for i in range(4):
        for j in range(4):
            g = fib.gram[i][j]
            if g.is_zero() or sec.s[i].is_zero() or sec.s[j].is_zero():
                continue
            total = total + g * sec.s[i] * sec.s[j]
    if not total.is_zero():
        problems.append("section does not lie on the fibration")
    g = nonzero[0]
    for si in nonzero[1:]:
        g = g.gcd(si)
    if g.degree != 0:
        problems.append(f"not saturated: common factor {g!r}")
    lead = next(c for si in sec.s for c in si.codes if c)
    if lead != 1:
        problems.append("not canonically scaled")
    return problems


def is_saturated(forms) -> bool:
    nonzero = [si for si in forms if not si.is_zero()]
    if not nonzero:
        return False
    g = nonzero[0]
    for si in nonzero[1:]:
        if g.degree == 0:
            break
        g = g.gcd(si)
    return g.degree == 0


def make_section(fib: FibrationSpec, f: int, forms) -> Section:
    """Validated, canonically scaled section from four forms."""
    F = fib.field
    forms = [si if isinstance(si, BinaryForm) else BinaryForm(F, si) for si in forms]
    lead = next((c for si in forms for c in si.codes if c), None)
    if lead is None:
        raise InvalidSection("all components are ZERO")
    inv = F.inv(lead)
    sec = Section(fib, f, tuple(si.scale(inv) for si in forms))
    problems = section_problems(sec)
    if problems:
        raise InvalidSection("; ".join(problems))
    return sec


# -- coefficient layout -------------------------------------------------------

class Layout:
    """Coordinates on the coefficient space of (s_1, .., s_4) at twist f."""

    def __init__(self, fib: FibrationSpec, f: int):
        self.fib = fib
        self.f = f
        self.field = fib.field
        self.degrees = [f - di for di in fib.d]
        self.sizes = [max(0, g + 1) for g in self.degrees]
        self.offsets = [sum(self.sizes[:i]) for i in range(4)]
        self.D = sum(self.sizes)
        self.out_degree = 2 * f + fib.e
        self._tensor = None
        self._terms = None

    def forms(self, vec):
        F = self.field
        out = []
        for i in range(4):
            n, o = self.sizes[i], self.offsets[i]
            if n == 0:
                out.append(BinaryForm.zero(F))
            else:
                out.append(BinaryForm.from_codes(F, [int(c) for c in vec[o:o + n]]))
        return tuple(out)

    def vector(self, forms):
        vec = []
        for i in range(4):
            si = forms[i]
            if self.sizes[i] == 0:
                continue
            vec.extend(si.codes if not si.is_zero() else [0] * self.sizes[i])
        return vec

    def terms(self):
        """(k, a, b, g): Q(c)_k = sum g c_a c_b over the fibration identity."""
        if self._terms is None:
            F = self.field
            acc = {}
            for i in range(4):
                for j in range(4):
                    g = self.fib.gram[i][j]
                    if g.is_zero() or not self.sizes[i] or not self.sizes[j]:
                        continue
                    for gi, gc in enumerate(g.codes):
                        if not gc:
                            continue
                        for a in range(self.sizes[i]):
                            for b in range(self.sizes[j]):
                                key = (a + b + gi, self.offsets[i] + a, self.offsets[j] + b)
                                acc[key] = F.add(acc.get(key, 0), gc)
            self._terms = [(k, a, b, g) for (k, a, b), g in sorted(acc.items()) if g]
        return self._terms

    def tensor(self):
        """Dense (D, m*D) int64 matrix for vectorized evaluation over F_p."""
        if self._tensor is None:
            m, D = self.out_degree + 1, self.D
            T = np.zeros((m, D, D), dtype=np.int64)
            for k, a, b, g in self.terms():
                T[k, a, b] = (T[k, a, b] + g) % self.field.p
            self._tensor = np.ascontiguousarray(T.transpose(1, 0, 2).reshape(D, m * D))
        return self._tensor

    def fast(self) -> bool:
        F = self.field
        return F.k == 1 and self.D > 0 and (self.D ** 2) * F.p ** 3 < 2 ** 62

    def on_fibration(self, V):
        """Boolean mask over the rows of V (int64 codes, prime field)."""
        if self.out_degree < 0:
            # every Gram entry that could meet the support is ZERO
            return np.ones(len(V), dtype=bool)
        p = self.field.p
        m, D = self.out_degree + 1, self.D
        Y = (V @ self.tensor()) % p
        Q = (Y.reshape(len(V), m, D) * V[:, None, :]).sum(axis=2) % p
        return ~Q.any(axis=1)

    def on_fibration_generic(self, vec) -> bool:
        F = self.field
        if self.out_degree < 0:
            return True
        out = [0] * (self.out_degree + 1)
        for k, a, b, g in self.terms():
            if vec[a] and vec[b]:
                out[k] = F.add(out[k], F.mul(g, F.mul(vec[a], vec[b])))
        return not any(out)

    def monomial_values(self, b: ProjPoint1):
        """Value at b of the monomial attached to each coordinate, in b's field."""
        K = b.field
        vals = [0] * self.D
        for i in range(4):
            deg = self.degrees[i]
            for a in range(self.sizes[i]):
                vals[self.offsets[i] + a] = K.mul(K.pow(b.u, deg - a), K.pow(b.v, a))
        return vals

    def point_rows(self, b: ProjPoint1, x):
        """Linear conditions over the base field expressing s(b) || x."""
        F, K = self.field, b.field
        vals = self.monomial_values(b)
        piv = next(i for i, c in enumerate(x) if c)
        krows = []
        for c in range(4):
            if c == piv:
                continue
            row = [0] * self.D
            # s_c(b) - x_c * s_piv(b) = 0
            for a in range(self.sizes[c]):
                row[self.offsets[c] + a] = vals[self.offsets[c] + a]
            xc = x[c]
            if xc:
                for a in range(self.sizes[piv]):
                    j = self.offsets[piv] + a
                    row[j] = K.sub(row[j], K.mul(xc, vals[j]))
            krows.append(row)
        if K == F:
            return krows
        if F.k != 1:
            raise InputError("conditions at non-rational points need a prime base field")
        rows = []
        for row in krows:
            split = [K.residues(c) for c in row]
            for r in range(K.k):
                rows.append([s[r] for s in split])
        return rows


# -- enumeration engine -------------------------------------------------------

class _Budget:
    def __init__(self, budget: int):
        self.budget = budget
        self.used = 0

    def charge(self, n: int):
        self.used += n
        if self.used > self.budget:
            raise BudgetExceeded(f"budget {self.budget} exhausted", needed=self.used)

    @property
    def remaining(self):
        return self.budget - self.used


def _projective_size(q: int, dim: int) -> int:
    return (q ** dim - 1) // (q - 1) if dim > 0 else 0


def _walk_subspace(layout: Layout, basis, budget: _Budget, hits: list):
    """Check every canonically scaled vector of span(basis) against the identity.

    ``basis`` must be in reduced echelon form so that the first nonzero entry
    of each projective representative is 1.
    """
    F = layout.field
    r = len(basis)
    if r == 0:
        return
    budget.charge(_projective_size(F.q, r))
    if layout.fast():
        p = F.p
        B = np.array(basis, dtype=np.int64)
        for j in range(r):
            t = r - 1 - j
            total = p ** t
            rest = B[j + 1:]
            for start in range(0, total, _CHUNK):
                idx = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
                lam = np.empty((len(idx), t), dtype=np.int64)
                for col in range(t - 1, -1, -1):
                    lam[:, col] = idx % p
                    idx //= p
                V = (B[j][None, :] + lam @ rest) % p if t else B[j][None, :].copy()
                ok = layout.on_fibration(V)
                for row in V[ok]:
                    hits.append([int(c) for c in row])
        return
    import itertools

    for j in range(r):
        for lam in itertools.product(range(F.q), repeat=r - 1 - j):
            vec = list(basis[j])
            for coef, row in zip(lam, basis[j + 1:]):
                if coef:
                    vec = [F.add(a, F.mul(coef, b)) for a, b in zip(vec, row)]
            if layout.on_fibration_generic(vec):
                hits.append(vec)


def interpolation_points(fib: FibrationSpec, max_ext: int = 2, exclude=()):
    """Points off the discriminant, rational ones first, one per Galois orbit."""
    F = fib.field
    disc = fib.discriminant
    excluded = set()
    for b in exclude:
        excluded.add((b.field, b.u, b.v))
    out = []
    for m in range(1, max_ext + 1):
        K = F.extension(m)
        seen = set()
        for b in points_of_p1(K):
            if b.degree_over(F) != m or (b.u, b.v) in seen:
                continue
            orbit = [b]
            c = b.conjugate(F)
            while (c.u, c.v) != (b.u, b.v):
                orbit.append(c)
                c = c.conjugate(F)
            seen.update((o.u, o.v) for o in orbit)
            rep = min(orbit, key=lambda o: o.key())
            if (K, rep.u, rep.v) in excluded:
                continue
            if disc.evaluate_codes(K, rep.u, rep.v) == 0:
                continue
            out.append(rep)
    return out


@dataclass
class SearchPlan:
    strategy: str
    cost: int
    points: list = dc_field(default_factory=list)
    work: Optional[int] = None  # relative running time; defaults to cost

    def __post_init__(self):
        if self.work is None:
            self.work = self.cost


# a search-tree node (an exact row reduction) costs about as much as this
# many vectorized candidate checks
NODE_WEIGHT = 64


def _interpolation_plan(layout: Layout, points, base_rank: int = 0):
    """Cheapest number of interpolation points under a generic-rank model."""
    q = layout.field.q
    free = layout.D - base_rank
    best = None
    nodes = 1
    conditions = 0
    for k, b in enumerate(points, start=1):
        m = b.field.k // layout.field.k
        nfib = (q ** m + 1) ** 2  # fiber point count upper bound
        nodes *= nfib
        conditions += 3 * m
        kernel = max(free - conditions, 0)
        leaves = nodes * _projective_size(q, kernel)
        plan = SearchPlan("interpolate", nodes + leaves, list(points[:k]),
                          work=NODE_WEIGHT * nodes + leaves)
        if best is None or plan.work < best.work:
            best = plan
        if kernel == 0:
            break
    return best


def _interpolate(layout: Layout, base_rows, points, budget: _Budget, hits: list):
    F = layout.field
    D = layout.D
    conds = []
    for b in points:
        fb = fiber_at(layout.fib, b)
        conds.append([layout.point_rows(b, x) for x in fiber_points(fb)])

    def rec(level, rows):
        if level == len(conds):
            ker = linalg.kernel(F, rows, D) if rows else [list(r) for r in np.eye(D, dtype=int)]
            budget.charge(1)
            _walk_subspace(layout, ker, budget, hits)
            return
        for xrows in conds[level]:
            red, piv = linalg.rref(F, rows + xrows)
            if len(piv) == D:
                budget.charge(1)
                continue
            rec(level + 1, red)

    start = linalg.rref(F, base_rows)[0] if base_rows else []
    rec(0, start)


def _collect(layout: Layout, hits, include_broken=False):
    fib = layout.fib
    sections, broken = {}, {}
    for vec in hits:
        forms = layout.forms(vec)
        sec = Section(fib, layout.f, forms)
        key = sec.key()
        if is_saturated(forms):
            sections[key] = sec
        elif include_broken:
            broken[key] = sec
    out = [sections[k] for k in sorted(sections)]
    if include_broken:
        return out, [broken[k] for k in sorted(broken)]
    return out


def plan_search(fib: FibrationSpec, layout: Layout, budget: int, strategy: str = "auto",
                base_rows=(), exclude=(), max_ext: int = 2) -> SearchPlan:
    F = fib.field
    base_rank = len(linalg.rref(F, list(base_rows))[1]) if base_rows else 0
    direct = SearchPlan("direct", _projective_size(F.q, layout.D - base_rank))
    if strategy == "direct":
        return direct
    interp = None
    if F.k == 1 or max_ext == 1:
        pts = interpolation_points(fib, max_ext if F.k == 1 else 1, exclude)
        interp = _interpolation_plan(layout, pts, base_rank)
    if strategy == "interpolate":
        if interp is None:
            raise NotEnoughInterpolationPoints("no point off the discriminant is available")
        return interp
    if interp is not None and interp.work < direct.work:
        return interp
    return direct


def _run(fib, layout, plan, budget, base_rows=()):
    hits = []
    if plan.strategy == "direct":
        if base_rows:
            basis = linalg.kernel(fib.field, list(base_rows), layout.D)
        else:
            basis = [[1 if i == j else 0 for j in range(layout.D)] for i in range(layout.D)]
        _walk_subspace(layout, basis, budget, hits)
    else:
        _interpolate(layout, list(base_rows), plan.points, budget, hits)
    return hits


def enumerate_sections(fib: FibrationSpec, h: int, budget: int = DEFAULT_BUDGET,
                       strategy: str = "auto", include_broken: bool = False,
                       max_ext: int = 2, _budget: Optional[_Budget] = None):
    """All saturated sections of height exactly h, sorted, canonically scaled.

    With ``include_broken`` a pair (sections, broken) is returned, where
    broken holds the unsaturated solutions of the identity (found only by
    direct enumeration; interpolation may miss them).
    """
    f = twist_for_height(fib, h)
    empty = ([], []) if include_broken else []
    if f is None or f < min(fib.d):
        return empty
    layout = Layout(fib, f)
    tracker = _budget or _Budget(budget)
    plan = plan_search(fib, layout, tracker.remaining, strategy, max_ext=max_ext)
    if plan.cost > tracker.remaining and strategy == "auto":
        other = plan_search(fib, layout, tracker.remaining, "direct")
        needed = min(plan.cost, other.cost)
        raise BudgetExceeded(
            f"height {h} needs about {needed} candidates, budget left {tracker.remaining}",
            needed=needed)
    hits = _run(fib, layout, plan, tracker)
    return _collect(layout, hits, include_broken)


def count_by_height(fib: FibrationSpec, h_min: int, h_max: int,
                    budget: int = DEFAULT_BUDGET, strategy: str = "auto"):
    tracker = _Budget(budget)
    out = {}
    for h in range(h_min, h_max + 1):
        out[h] = len(enumerate_sections(fib, h, strategy=strategy, _budget=tracker))
    return out


def _require_cover(fib: FibrationSpec):
    if fib.delta <= 0:
        raise PreconditionError("needs a nontrivial discriminant (Delta > 0)")
    if not fib.discriminant.is_squarefree():
        raise PreconditionError("needs a square-free discriminant")


@dataclass
class MinHeightResult:
    height: int
    section: Section
    bound: int
    within_bound: bool
    candidates: int

    def to_dict(self):
        return {"height": self.height, "section": self.section.to_dict(),
                "bound": self.bound, "within_bound": self.within_bound,
                "candidates": self.candidates}


def min_height_section(fib: FibrationSpec, h_max: Optional[int] = None,
                       budget: int = DEFAULT_BUDGET) -> Optional[MinHeightResult]:
    """Least height carrying a section, scanning upward; None if none up to h_max."""
    _require_cover(fib)
    bound = existence_bound(fib)
    if h_max is None:
        h_max = bound
    tracker = _Budget(budget)
    h = minimal_height(fib)
    while h <= h_max:
        secs = enumerate_sections(fib, h, _budget=tracker)
        if secs:
            return MinHeightResult(h, secs[0], bound, h <= bound, tracker.used)
        h += 2
    return None


# -- weak approximation -------------------------------------------------------

@dataclass(frozen=True)
class PointConstraint:
    b: ProjPoint1
    x: tuple  # normalized codes over b.field

    @classmethod
    def make(cls, b: ProjPoint1, x) -> "PointConstraint":
        K = b.field
        return cls(b, linalg.normalize(K, [K.code(c) for c in x]))

    def to_dict(self):
        from .io import scalar_to_json
        K = self.b.field
        return {"b": [scalar_to_json(K, self.b.u), scalar_to_json(K, self.b.v)],
                "x": [scalar_to_json(K, c) for c in self.x]}


def validate_constraint(fib: FibrationSpec, c: PointConstraint):
    fb = fiber_at(fib, c.b)
    if fb.rank < 4:
        raise ConstraintOnDiscriminant(f"{c.b!r} lies on the discriminant")
    if fb.value(c.x) != 0:
        raise ConstraintOffQuadric(f"{c.x} is not on the fiber over {c.b!r}")


def constraint_weight(fib: FibrationSpec, c: PointConstraint) -> int:
    """Number of geometric points a constraint stands for (its Galois orbit)."""
    return c.b.degree_over(fib.field)


@dataclass
class ApproxResult:
    height: int
    section: Section
    bound: int
    within_bound: bool
    candidates: int

    to_dict = MinHeightResult.to_dict


def weak_approx_search(fib: FibrationSpec, constraints: Sequence[PointConstraint],
                       h_max: Optional[int] = None, budget: int = DEFAULT_BUDGET
                       ) -> Optional[ApproxResult]:
    """Least-height section through the prescribed fiber points."""
    constraints = list(constraints)
    if not constraints:
        res = min_height_section(fib, h_max, budget)
        if res is None:
            return None
        return ApproxResult(res.height, res.section, weak_approximation_bound(fib, 0),
                            res.height <= weak_approximation_bound(fib, 0), res.candidates)
    seen = set()
    for c in constraints:
        validate_constraint(fib, c)
        key = (c.b.field, c.b.u, c.b.v)
        if key in seen:
            raise InputError(f"duplicate constraint point {c.b!r}")
        seen.add(key)
    n = sum(constraint_weight(fib, c) for c in constraints)
    bound = weak_approximation_bound(fib, n)
    if h_max is None:
        h_max = bound
    tracker = _Budget(budget)
    h = minimal_height(fib)
    exclude = [c.b for c in constraints]
    while h <= h_max:
        f = twist_for_height(fib, h)
        layout = Layout(fib, f)
        rows = []
        for c in constraints:
            rows.extend(layout.point_rows(c.b, c.x))
        plan = plan_search(fib, layout, tracker.remaining, base_rows=rows, exclude=exclude)
        if plan.cost > tracker.remaining:
            raise BudgetExceeded(
                f"height {h} needs about {plan.cost} candidates, budget left {tracker.remaining}",
                needed=plan.cost)
        hits = _run(fib, layout, plan, tracker, rows)
        good = []
        for sec in _collect(layout, hits):
            if all(sec.point_at(c.b) == c.x for c in constraints):
                good.append(sec)
        if good:
            return ApproxResult(h, good[0], bound, h <= bound, tracker.used)
        h += 2
    return None


# -- stability hypothesis -----------------------------------------------------

@dataclass
class StabilityReport:
    holds: bool
    threshold: int
    heights_checked: list
    offending: list
    semistable: bool

    def to_dict(self):
        return {"hypothesis_holds": self.holds,
                "threshold": self.threshold,
                "heights_checked": self.heights_checked,
                "offending": [s.to_dict() for s in self.offending],
                "fano_bundle_semistable": self.semistable}


def check_stability_hypothesis(fib: FibrationSpec, budget: int = DEFAULT_BUDGET) -> StabilityReport:
    """Look for sections with h < -Delta/2.

    When none exist (and the discriminant cover is nontrivial, which Delta > 0
    with square-free discriminant ensures) the Fano variety of lines is the
    projectivization of a semistable rank-two bundle.
    """
    _require_cover(fib)
    tracker = _Budget(budget)
    heights, offending = [], []
    h = minimal_height(fib)
    while 2 * h < -fib.delta:
        heights.append(h)
        offending.extend(enumerate_sections(fib, h, _budget=tracker))
        h += 2
    holds = not offending
    return StabilityReport(holds, -(fib.delta // 2), heights, offending, holds)


def enumerate_brute_force(fib: FibrationSpec, h: int):
    """Reference enumeration with exact form arithmetic; tiny cases only."""
    import itertools

    f = twist_for_height(fib, h)
    if f is None or f < min(fib.d):
        return []
    layout = Layout(fib, f)
    F = fib.field
    found = {}
    for vec in itertools.product(range(F.q), repeat=layout.D):
        lead = next((c for c in vec if c), None)
        if lead != 1:
            continue
        sec = Section(fib, f, layout.forms(vec))
        if not section_problems(sec):
            found[sec.key()] = sec
    return [found[k] for k in sorted(found)]
