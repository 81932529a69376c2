"""Lines in the fibers of a quadric surface fibration.

A line of a smooth fiber X_b is a totally isotropic 2-plane of the fiber's
Gram matrix.  The two rulings are told apart intrinsically: for an
isotropic plane with Pluecker vector P the compound matrix of the Gram
matrix satisfies  C(G) P = lam * W P,  where W is the wedge pairing on
Lambda^2, and lam^2 = det G(b).  The two square roots of disc(b) therefore
name the two rulings, i.e. the two points of the discriminant double cover
over b, and Frobenius swaps them exactly when disc(b) is a nonsquare.
Label 0 goes to the root with the smaller residue representation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import (FiberMismatch, InternalInvariantError,
                     NoRationalFiberPoint, PointNotOnQuadric, SingularFiber,
                     SpecMismatch)
from .fibration import FibrationSpec, fiber_at, fiber_points
from .gfpoly import GF, ProjPoint1, Scalar, linalg

PAIRS = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


@dataclass(frozen=True)
class LineInFiber:
    b: ProjPoint1
    field: GF
    basis: tuple  # 2x4 codes over ``field``, reduced echelon form

    @classmethod
    def span(cls, b: ProjPoint1, field: GF, rows) -> "LineInFiber":
        red, piv = linalg.rref(field, rows)
        if len(piv) != 2:
            raise ValueError("a line needs two independent vectors")
        return cls(b, field, tuple(tuple(r) for r in red))

    def lift(self, target: GF) -> "LineInFiber":
        if target == self.field:
            return self
        return LineInFiber(self.b, target, tuple(
            tuple(linalg.lift_matrix(target, self.field, self.basis)[i]) for i in range(2)))

    def key(self):
        return tuple(self.field.key(c) for row in self.basis for c in row)

    def to_dict(self):
        from .io import field_to_json, scalar_to_json
        return {"b": self.b.label(), "field": field_to_json(self.field),
                "basis": [[scalar_to_json(self.field, c) for c in row] for row in self.basis]}


@dataclass(frozen=True)
class RulingLabel:
    b: ProjPoint1
    sqrt_disc: Scalar
    parity: int


def _smooth_fiber(fib: FibrationSpec, b: ProjPoint1):
    fb = fiber_at(fib, b)
    if fb.rank < 4:
        raise SingularFiber(f"fiber over {b!r} has rank {fb.rank}")
    return fb


def _common_field(a: GF, b: GF) -> GF:
    if a.contains(b):
        return a
    if b.contains(a):
        return b
    from math import lcm
    return a.extension(lcm(a.k, b.k) // a.k)


def _same_point(b1: ProjPoint1, b2: ProjPoint1) -> bool:
    K = _common_field(b1.field, b2.field)
    return b1.to(K) == b2.to(K)


def pluecker(K: GF, v, w):
    return [K.sub(K.mul(v[i], w[j]), K.mul(v[j], w[i])) for i, j in PAIRS]


def _wedge_dual(K: GF, p):
    p01, p02, p03, p12, p13, p23 = p
    return [p23, K.neg(p13), p12, p03, K.neg(p02), p01]


def _compound(K: GF, G, p):
    out = []
    for i, j in PAIRS:
        acc = 0
        for n, (k, l) in enumerate(PAIRS):
            c = K.sub(K.mul(G[i][k], G[j][l]), K.mul(G[i][l], G[j][k]))
            if c and p[n]:
                acc = K.add(acc, K.mul(c, p[n]))
        out.append(acc)
    return out


def ruling_eigenvalue(fib: FibrationSpec, line: LineInFiber) -> int:
    """The square root of disc(b) attached to the line's ruling (a code)."""
    K = line.field
    G = linalg.lift_matrix(K, line.b.field, fiber_at(fib, line.b).matrix)
    p = pluecker(K, *line.basis)
    c = _compound(K, G, p)
    w = _wedge_dual(K, p)
    i = next(i for i in range(6) if w[i])
    lam = K.div(c[i], w[i])
    if any(c[j] != K.mul(lam, w[j]) for j in range(6)):
        raise InternalInvariantError("Pluecker vector of an isotropic plane is not an eigenvector")
    return lam


def ruling_label(fib: FibrationSpec, line: LineInFiber) -> RulingLabel:
    K = line.field
    lam = ruling_eigenvalue(fib, line)
    other = K.neg(lam)
    parity = 0 if min(lam, other, key=K.key) == lam else 1
    return RulingLabel(line.b, Scalar(K, lam), parity)


def is_isotropic(fib: FibrationSpec, line: LineInFiber) -> bool:
    K = line.field
    G = linalg.lift_matrix(K, line.b.field, fiber_at(fib, line.b).matrix)
    return all(linalg.bilinear(K, G, v, w) == 0 for v in line.basis for w in line.basis)


def lines_through_point(fib: FibrationSpec, b: ProjPoint1, x):
    """The two lines of the smooth fiber X_b through x, ordered by ruling label.

    Lines live over the residue field K of b when disc(b) is a square in K
    and over its quadratic extension otherwise (then they are conjugate).
    """
    fb = _smooth_fiber(fib, b)
    K = b.field
    x = [c.v if isinstance(c, Scalar) else int(c) for c in x]
    if not any(x):
        raise PointNotOnQuadric("zero vector")
    G = fb.matrix
    if fb.value(x) != 0:
        raise PointNotOnQuadric(f"{x} is not on the fiber over {b!r}")
    Gx = linalg.mat_vec(K, G, x)
    tangent = linalg.kernel(K, [Gx], 4)
    basis = [x]
    for t in tangent:
        if linalg.rank(K, basis + [t]) > len(basis):
            basis.append(t)
    y1, y2 = basis[1], basis[2]
    a = linalg.bilinear(K, G, y1, y1)
    bb = linalg.bilinear(K, G, y1, y2)
    c = linalg.bilinear(K, G, y2, y2)
    disc = K.sub(K.mul(bb, bb), K.mul(a, c))
    if disc == 0:  # pragma: no cover - G nonsingular forces disc != 0
        raise InternalInvariantError("degenerate residual form on a smooth fiber")
    L = K if K.is_square(disc) else K.extension(2)
    y1l, y2l, xl = (linalg.lift_matrix(L, K, [v])[0] for v in (y1, y2, x))
    al, bl, cl = (L.lift(K, t) for t in (a, bb, c))
    if al:
        r = L.sqrt(L.lift(K, disc))
        dirs = [(L.sub(r, bl), al), (L.sub(L.neg(r), bl), al)]
    else:
        dirs = [(1, 0), (cl, L.neg(L.add(bl, bl)))]
    lines = []
    for beta, gamma in dirs:
        w = [L.add(L.mul(beta, s), L.mul(gamma, t)) for s, t in zip(y1l, y2l)]
        lines.append(LineInFiber.span(b, L, [xl, w]))
    lines.sort(key=lambda ln: ruling_label(fib, ln).parity)
    return tuple(lines)


@dataclass(frozen=True)
class Intersection:
    kind: str  # "point", "empty" or "same"
    point: Optional[tuple] = None
    field: Optional[GF] = None


def line_intersection(l1: LineInFiber, l2: LineInFiber) -> Intersection:
    if not _same_point(l1.b, l2.b):
        raise FiberMismatch(f"lines over {l1.b!r} and {l2.b!r}")
    L = _common_field(l1.field, l2.field)
    a, c = l1.lift(L), l2.lift(L)
    rows = list(a.basis) + list(c.basis)
    r = linalg.rank(L, rows)
    dim = 4 - r
    if dim == 0:
        return Intersection("empty")
    if dim == 2:
        return Intersection("same", field=L)
    # alpha v1 + beta w1 = gamma v2 + delta w2
    cols = [list(a.basis[0]), list(a.basis[1]),
            [L.neg(t) for t in c.basis[0]], [L.neg(t) for t in c.basis[1]]]
    system = [[cols[j][i] for j in range(4)] for i in range(4)]
    coef = linalg.kernel(L, system, 4)[0]
    vec = [L.add(L.mul(coef[0], s), L.mul(coef[1], t)) for s, t in zip(*a.basis)]
    return Intersection("point", linalg.normalize(L, vec), L)


def intersection_dimension(l1: LineInFiber, l2: LineInFiber) -> int:
    L = _common_field(l1.field, l2.field)
    return 4 - linalg.rank(L, list(l1.lift(L).basis) + list(l2.lift(L).basis))


def ruling_of(line: LineInFiber, reference: LineInFiber) -> int:
    """0 when the lines lie in the same ruling (even intersection dimension)."""
    if not _same_point(line.b, reference.b):
        raise FiberMismatch(f"lines over {line.b!r} and {reference.b!r}")
    return intersection_dimension(line, reference) % 2


def section_to_line_data(sec, points):
    """Pointwise shadow of the section of the Fano variety over the double cover.

    Maps (b label, ruling sign) to the line of X_b through sigma(b); sign "+"
    is the ruling of label 0.
    """
    out = {}
    for b in points:
        x = sec.at(b)
        lines = lines_through_point(sec.fib, b, x)
        for ln in lines:
            lab = ruling_label(sec.fib, ln)
            out[f"{b.label()}:{'+' if lab.parity == 0 else '-'}"] = ln
    return out


def all_lines(fib: FibrationSpec, b: ProjPoint1, field: Optional[GF] = None):
    """Every line of the smooth fiber X_b defined over ``field`` (default: K(b))."""
    fb = _smooth_fiber(fib, b)
    L = field or b.field
    if not L.contains(b.field):
        raise SpecMismatch(f"{L!r} does not contain {b.field!r}")
    bL = b.to(L)
    found = {}
    for x in fiber_points(fiber_at(fib, bL)):
        for ln in lines_through_point(fib, bL, x):
            if ln.field == L:
                found[ln.key()] = ln
    del fb
    return [found[k] for k in sorted(found)]


def galois_swap_check(fib: FibrationSpec, b: ProjPoint1) -> bool:
    """True iff Frobenius exchanges the two rulings of X_b (disc(b) nonsquare).

    Cross-checked against the field of definition of the two lines through
    the least rational point of the fiber.
    """
    fb = _smooth_fiber(fib, b)
    K = b.field
    swapped = not K.is_square(fb.disc)
    pts = fiber_points(fb)
    if not pts:
        raise NoRationalFiberPoint(f"smooth fiber over {b!r} has no rational point")
    lines = lines_through_point(fib, b, pts[0])
    conjugate = all(ln.field != K for ln in lines)
    if conjugate != swapped:
        raise InternalInvariantError(
            f"ruling field of definition disagrees with disc(b) square class at {b!r}")
    return swapped


def smooth_points(fib: FibrationSpec, max_ext: int = 2):
    """Points b of P^1 over F_{q^m}, m <= max_ext, with a smooth fiber.

    Each point appears once, over the field generated by its coordinates.
    """
    from .gfpoly.forms import points_of_p1

    base = fib.field
    out = []
    for m in range(1, max_ext + 1):
        K = base.extension(m) if m > 1 else base
        for b in points_of_p1(K):
            if b.degree_over(base) != m:
                continue
            if fiber_at(fib, b).rank == 4:
                out.append(b)
    return out


@dataclass
class CorrespondenceReport:
    sections: int
    points: int
    checks: int
    failures: list
    swap_points: dict

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self):
        return {"sections": self.sections, "points": self.points, "checks": self.checks,
                "ok": self.ok, "failures": self.failures[:20],
                "galois_swaps": self.swap_points}


def correspondence_check(fib: FibrationSpec, sections, max_ext: int = 2) -> CorrespondenceReport:
    """Round trip sigma(b) -> the two lines through it -> their intersection.

    For every section and smooth point b the intersection must be sigma(b)
    exactly and the two lines must carry opposite ruling labels; at each b
    the Galois behaviour of the rulings must match the square class of disc(b).
    """
    points = smooth_points(fib, max_ext)
    swaps, failures, checks = {}, [], 0
    for b in points:
        swapped = galois_swap_check(fib, b)
        if swapped != (not b.field.is_square(fiber_at(fib, b).disc)):
            failures.append({"b": b.label(), "what": "galois swap"})
        swaps[b.label()] = swapped
    for sec in sections:
        for b in points:
            checks += 1
            x = sec.point_at(b)
            l0, l1 = lines_through_point(fib, b, x)
            meet = line_intersection(l0, l1)
            K = meet.field
            if meet.kind != "point" or meet.point != tuple(linalg.lift_matrix(K, b.field, [x])[0]):
                failures.append({"b": b.label(), "section": sec.to_dict(), "what": "intersection"})
            if ruling_label(fib, l0).parity == ruling_label(fib, l1).parity:
                failures.append({"b": b.label(), "section": sec.to_dict(), "what": "labels"})
    return CorrespondenceReport(len(sections), len(points), checks, failures, swaps)
