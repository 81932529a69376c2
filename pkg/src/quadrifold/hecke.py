"""Elementary transformations along a line in a smooth fiber.

The surgery works on Gram matrices.  A graded automorphism U of E first
moves the line to the coordinate plane span(e_B) at p (B = {3, 4} by
default).  With l the linear form vanishing at p and M the diagonal matrix
scaling the complementary block A by l, the output form is

    (1/l) * M^T (U^T G U) M,

which is polynomial because the B-block of U^T G U vanishes at p.  The A
twists stay put, the B twists drop by one and deg I grows by one, so Delta
is preserved and epsilon flips.  The same surgery with the blocks swapped,
taken along the exceptional line span(e_A), undoes the first one.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .errors import (Inconsistent, InternalInvariantError, LineNotIsotropic,
                     NoGradedAutomorphism, InvalidSection, PreconditionError, SectionNotOnInput,
                     SingularFiberAtP)
from .fibration import FibrationSpec, fiber_at, normalize
from .gfpoly import BinaryForm, ProjPoint1, linalg
from .lines import LineInFiber
from .sections import Section, make_section

DEFAULT_BLOCKS = ((0, 1), (2, 3))


# -- polynomial matrices ----------------------------------------------------

def _zero(F):
    return BinaryForm.zero(F)


def mat_mul(F, A, B):
    n, m, k = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(k):
            acc = _zero(F)
            for t in range(m):
                acc = acc + A[i][t] * B[t][j]
            row.append(acc)
        out.append(row)
    return out


def transpose(A):
    return [list(r) for r in zip(*A)]


def _minor(A, i, j):
    return [[A[r][c] for c in range(len(A)) if c != j] for r in range(len(A)) if r != i]


def graded_inverse(F, U):
    """Inverse of a polynomial matrix with constant nonzero determinant."""
    from .fibration import form_determinant
    det = form_determinant(F, U)
    if det.is_zero() or det.degree != 0:
        raise InternalInvariantError("basis change does not have constant determinant")
    inv = F.inv(det.codes[0])
    n = len(U)
    out = [[None] * n for _ in range(n)]
    for i, j in itertools.product(range(n), repeat=2):
        c = form_determinant(F, _minor(U, j, i)) if n > 1 else BinaryForm.constant(F, 1)
        if (i + j) % 2:
            c = -c
        out[i][j] = c.scale(inv)
    return out


def mat_vec_forms(F, A, s):
    out = []
    for row in A:
        acc = _zero(F)
        for a, x in zip(row, s):
            acc = acc + a * x
        out.append(acc)
    return out


def vanishing_form(p: ProjPoint1) -> BinaryForm:
    """The linear form v0*u - u0*v, which vanishes exactly at p = [u0:v0]."""
    F = p.field
    return BinaryForm.from_codes(F, (p.v, F.neg(p.u)))


def _nonvanishing_form(p: ProjPoint1) -> BinaryForm:
    F = p.field
    return BinaryForm.monomial(F, 1, 0) if p.u else BinaryForm.monomial(F, 0, 1)


# -- the graded automorphism ------------------------------------------------

def _allowed(d, i, j) -> bool:
    # U_ij has degree d_j - d_i
    return d[j] >= d[i]


def _frame_at_p(F, d, line_rows, blocks):
    """A constant matrix T, graded-shaped, whose B columns span the line."""
    A, B = blocks
    q = F.q
    pairs = []
    # every basis of the plane: rows of a 2x2 invertible change applied to line_rows
    elems = range(q)
    changes = itertools.chain([(1, 0, 0, 1)], itertools.product(elems, repeat=4))
    for a, b, c, e in changes:
        if F.sub(F.mul(a, e), F.mul(b, c)) == 0:
            continue
        v = [F.add(F.mul(a, x), F.mul(b, y)) for x, y in zip(*line_rows)]
        w = [F.add(F.mul(c, x), F.mul(e, y)) for x, y in zip(*line_rows)]
        pairs.append((v, w))
        if len(pairs) > 200_000:  # pragma: no cover - q is desk scale
            break
    for v, w in pairs:
        cols = {B[0]: v, B[1]: w}
        if not all(_allowed(d, i, j) or cols[j][i] == 0 for j in B for i in range(4)):
            continue
        for ea, eb in itertools.product(range(4), repeat=2):
            if not (_allowed(d, ea, A[0]) and _allowed(d, eb, A[1])):
                continue
            full = dict(cols)
            full[A[0]] = [1 if i == ea else 0 for i in range(4)]
            full[A[1]] = [1 if i == eb else 0 for i in range(4)]
            T = [[full[j][i] for j in range(4)] for i in range(4)]
            if linalg.rank(F, T) == 4:
                return T
    return None


def graded_automorphism(fib: FibrationSpec, p: ProjPoint1, line_rows, blocks=DEFAULT_BLOCKS):
    F = fib.field
    T = _frame_at_p(F, fib.d, line_rows, blocks)
    if T is None:
        raise NoGradedAutomorphism(
            f"no graded automorphism of E with twists {fib.d} moves the line to the coordinate plane")
    m = _nonvanishing_form(p)
    m_at_p = m.evaluate_codes(F, p.u, p.v)
    U = []
    for i in range(4):
        row = []
        for j in range(4):
            if T[i][j] == 0:
                row.append(_zero(F))
                continue
            k = fib.d[j] - fib.d[i]
            row.append((m ** k).scale(F.div(T[i][j], F.pow(m_at_p, k))) if k
                       else BinaryForm.constant(F, T[i][j]))
        U.append(row)
    return U


# -- the transform ----------------------------------------------------------

def _lenient_normalize(d, e, gram, field):
    try:
        return normalize(d, e, gram)
    except Inconsistent:
        # a legitimate surgery output may need a negative twist; keep it
        c = e // 2
        return FibrationSpec(field, tuple(x + c for x in d), e - 2 * c, gram)


def _surgery(fib: FibrationSpec, G, p, blocks):
    """(1/l) M^T G M for a Gram matrix G already adapted to the line."""
    F = fib.field
    A, B = blocks
    ell = vanishing_form(p)
    out = [[None] * 4 for _ in range(4)]
    for i, j in itertools.product(range(4), repeat=2):
        g = G[i][j]
        if i in A and j in A:
            out[i][j] = g * ell
        elif i in B and j in B:
            try:
                out[i][j] = g.divide_exact(ell)
            except Exception as exc:
                raise InternalInvariantError(f"B-block entry ({i},{j}) not divisible by l_p") from exc
        else:
            out[i][j] = g
    d = list(fib.d)
    for i in B:
        d[i] -= 1
    return _lenient_normalize(tuple(d), fib.e + 1, tuple(tuple(r) for r in out), F)


@dataclass(frozen=True)
class TransformReceipt:
    input: FibrationSpec
    output: FibrationSpec
    p: ProjPoint1
    line: LineInFiber
    basis_change: tuple
    blocks: tuple = DEFAULT_BLOCKS
    post_change: Optional[tuple] = None
    det_factor: int = 1

    @property
    def swap_blocks(self) -> bool:
        return self.blocks != DEFAULT_BLOCKS

    def exceptional_line(self) -> LineInFiber:
        """The line of the output fiber over p created by the blowup."""
        F = self.output.field
        rows = [[1 if i == a else 0 for i in range(4)] for a in self.blocks[0]]
        if self.post_change is not None:
            Vinv = graded_inverse(F, self.post_change)
            rows = [[linalg.dot(F, [x.evaluate_codes(F, self.p.u, self.p.v) for x in r], v)
                     for r in Vinv] for v in rows]
        return LineInFiber.span(self.p, F, rows)

    def to_dict(self):
        from .io import fibration_to_json, form_to_json, scalar_to_json
        F = self.input.field
        out = {"input": fibration_to_json(self.input),
               "output": fibration_to_json(self.output),
               "p": self.p.label(),
               "line": [[scalar_to_json(F, c) for c in r] for r in self.line.basis],
               "swap_blocks": self.swap_blocks,
               "basis_change": [[form_to_json(x) for x in r] for r in self.basis_change]}
        if self.post_change is not None:
            out["post_change"] = [[form_to_json(x) for x in r] for r in self.post_change]
        out["det_factor"] = scalar_to_json(F, self.det_factor)
        return out


def _check_line(fib: FibrationSpec, p: ProjPoint1, line):
    F = fib.field
    if p.field != F:
        raise PreconditionError("the transform point must be rational over the base field")
    fb = fiber_at(fib, p)
    if fb.rank < 4:
        raise SingularFiberAtP(f"fiber over {p!r} has rank {fb.rank}")
    if isinstance(line, LineInFiber):
        rows = [list(r) for r in line.basis]
    else:
        rows = [list(r) for r in line]
        line = LineInFiber.span(p, F, rows)
    if line.field != F:
        raise PreconditionError("the line must be defined over the base field")
    if any(linalg.bilinear(F, fb.matrix, v, w) for v in rows for w in rows):
        raise LineNotIsotropic(f"line {rows} is not isotropic in the fiber over {p!r}")
    return line, rows


def elementary_transform(fib: FibrationSpec, p: ProjPoint1, line, swap_blocks: bool = False,
                         post_change=None) -> TransformReceipt:
    """Blow up the line in X_p and contract the old fiber.

    ``line`` is a LineInFiber or a 2x4 basis over the base field.  With
    ``swap_blocks`` the line is moved to span(e1, e2) and the last two
    coordinates are scaled instead.  ``post_change`` is an optional graded
    automorphism V applied to the result (output = V^T G' V).
    """
    F = fib.field
    blocks = DEFAULT_BLOCKS[::-1] if swap_blocks else DEFAULT_BLOCKS
    line, rows = _check_line(fib, p, line)
    U = graded_automorphism(fib, p, rows, blocks)
    G1 = mat_mul(F, mat_mul(F, transpose(U), [list(r) for r in fib.gram]), U)
    G1 = tuple(tuple(r) for r in G1)
    fib_u = FibrationSpec(F, fib.d, fib.e, G1)
    out = _surgery(fib_u, G1, p, blocks)
    from .fibration import form_determinant
    factor = form_determinant(F, U).codes[0]
    if post_change is not None:
        V = [list(r) for r in post_change]
        G2 = mat_mul(F, mat_mul(F, transpose(V), [list(r) for r in out.gram]), V)
        out = FibrationSpec(F, out.d, out.e, tuple(tuple(r) for r in G2))
        factor = F.mul(factor, form_determinant(F, V).codes[0])
        post_change = tuple(tuple(r) for r in V)
    receipt = TransformReceipt(fib, out, p, line, tuple(tuple(r) for r in U), blocks,
                               post_change, F.mul(factor, factor))
    _verify_receipt(receipt)
    return receipt


def _verify_receipt(r: TransformReceipt):
    a, b = r.input, r.output
    if a.delta != b.delta:
        raise InternalInvariantError(f"Delta changed: {a.delta} -> {b.delta}")
    if a.e == b.e:
        raise InternalInvariantError("epsilon did not flip")
    if b.discriminant != a.discriminant.scale(r.det_factor):
        raise InternalInvariantError("discriminant changed by more than (det U)^2")


def inverse_transform(receipt: TransformReceipt) -> TransformReceipt:
    """The transform along the exceptional line that returns exactly the input."""
    F = receipt.input.field
    out = receipt.output
    if receipt.post_change is not None:
        raise PreconditionError("only plain transforms can be inverted")
    rows = [[1 if i == a else 0 for i in range(4)] for a in receipt.blocks[0]]
    swap = not receipt.swap_blocks
    inv = graded_inverse(F, [list(r) for r in receipt.basis_change])
    back = elementary_transform(out, receipt.p, rows, swap_blocks=swap, post_change=inv)
    if not back.output.same_data(receipt.input):
        raise InternalInvariantError("inverse transform did not restore the input")
    return back


# -- sections ---------------------------------------------------------------

@dataclass(frozen=True)
class TransformedSection:
    section: Section
    through_line: bool

    @property
    def shift(self) -> int:
        return -1 if self.through_line else 1


def transform_section(receipt: TransformReceipt, sec: Section) -> TransformedSection:
    """Proper transform of a section; its height moves by +1, or by -1 when
    sigma(p) lies on the transformed line."""
    fib = receipt.input
    if not sec.fib.same_data(fib):
        raise SectionNotOnInput("section belongs to a different fibration")
    F = fib.field
    A, B = receipt.blocks
    p = receipt.p
    Uinv = graded_inverse(F, [list(r) for r in receipt.basis_change])
    s1 = mat_vec_forms(F, Uinv, list(sec.s))
    ell = vanishing_form(p)
    through = all(s1[i].evaluate_codes(F, p.u, p.v) == 0 for i in A)
    s2 = list(s1)
    f = sec.f
    if through:
        for i in A:
            s2[i] = s1[i].divide_exact(ell)
        f -= 1
    else:
        for i in B:
            s2[i] = s1[i] * ell
    if receipt.post_change is not None:
        Vinv = graded_inverse(F, [list(r) for r in receipt.post_change])
        s2 = mat_vec_forms(F, Vinv, s2)
    # account for the normalization shift of the output twists
    d_raw = [x - (1 if i in B else 0) for i, x in enumerate(fib.d)]
    f += receipt.output.d[0] - d_raw[0]
    try:
        new = make_section(receipt.output, f, s2)
    except InvalidSection as exc:
        raise InternalInvariantError(f"transformed section is invalid: {exc}") from exc
    out = TransformedSection(new, through)
    if new.height != sec.height + out.shift:
        raise InternalInvariantError(
            f"height moved from {sec.height} to {new.height}, expected shift {out.shift}")
    return out
