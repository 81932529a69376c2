import pytest

from quadrifold.errors import LineNotIsotropic, NoGradedAutomorphism, SectionNotOnInput
from quadrifold.fibration import FibrationSpec, fiber_at, invariants
from quadrifold.gfpoly import BinaryForm, ProjPoint1, gf
from quadrifold.hecke import (elementary_transform, graded_inverse, inverse_transform,
                              mat_mul, transform_section, vanishing_form)
from quadrifold.lines import all_lines
from quadrifold.sections import enumerate_sections


def test_worked_transform(hecke_f3):
    F = hecke_f3.field
    u, v = BinaryForm.monomial(F, 1, 0), BinaryForm.monomial(F, 0, 1)
    one, z = BinaryForm.constant(F, 1), BinaryForm.zero(F)
    p = ProjPoint1.make(F, 0, 1)
    rec = elementary_transform(hecke_f3, p, [[0, 0, 1, 0], [0, 0, 0, 1]])
    out = rec.output
    assert (out.d, out.e) == ((1, 1, 0, 0), 0)
    want = ((u * u, z, v, z), (z, u * u, z, v), (v, z, one, z), (z, v, z, one))
    assert out.gram == want
    sq = (u * u - v * v) * (u * u - v * v)
    assert out.discriminant == hecke_f3.discriminant == sq


def test_vanishing_form():
    F = gf(5)
    for t in range(5):
        p = ProjPoint1.make(F, 1, t)
        assert vanishing_form(p).evaluate_codes(F, p.u, p.v) == 0
    assert vanishing_form(ProjPoint1.make(F, 0, 1)) == BinaryForm.monomial(F, 1, 0)


def test_not_isotropic(hecke_f3):
    F = hecke_f3.field
    with pytest.raises(LineNotIsotropic):
        elementary_transform(hecke_f3, ProjPoint1.make(F, 0, 1), [[1, 0, 1, 0], [0, 1, 0, 1]])


def test_double_transform_restores(hecke_f3):
    F = hecke_f3.field
    p = ProjPoint1.make(F, 0, 1)
    rec = elementary_transform(hecke_f3, p, [[0, 0, 1, 0], [0, 0, 0, 1]])
    again = elementary_transform(rec.output, p, rec.exceptional_line(), swap_blocks=True)
    assert (again.output.d, again.output.e) == (hecke_f3.d, hecke_f3.e)
    assert again.output.discriminant == hecke_f3.discriminant
    assert inverse_transform(rec).output.same_data(hecke_f3)


def _transforms(fib, p):
    for line in all_lines(fib, p):
        yield elementary_transform(fib, p, line)


def test_invariants_and_heights(surgery_f3):
    F = surgery_f3.field
    p = ProjPoint1.make(F, 1, 1)
    secs = {h: enumerate_sections(surgery_f3, h) for h in (-1, 1)}
    for rec in _transforms(surgery_f3, p):
        a, b = invariants(rec.input), invariants(rec.output)
        assert a.delta == b.delta and a.epsilon != b.epsilon
        assert sum(rec.output.d) + 2 * rec.output.e == sum(rec.input.d) + 2 * rec.input.e
        assert rec.output.discriminant == rec.input.discriminant.scale(rec.det_factor)
        back = inverse_transform(rec)
        for h, ss in secs.items():
            for s in ss:
                t = transform_section(rec, s)
                assert t.section.height == h + t.shift
                assert t.shift == (-1 if t.through_line else 1)
                assert transform_section(back, t.section).section.key() == s.key()


def test_section_through_line_drops(surgery_f3):
    F = surgery_f3.field
    p = ProjPoint1.make(F, 1, 1)
    sec = enumerate_sections(surgery_f3, -1)[0]
    from quadrifold.lines import lines_through_point
    line = lines_through_point(surgery_f3, p, sec.point_at(p))[0]
    rec = elementary_transform(surgery_f3, p, line)
    t = transform_section(rec, sec)
    assert t.through_line and t.section.height == -2


def test_section_of_other_fibration(surgery_f3, worked_f3):
    F = surgery_f3.field
    rec = next(_transforms(surgery_f3, ProjPoint1.make(F, 1, 0)))
    with pytest.raises(SectionNotOnInput):
        transform_section(rec, enumerate_sections(worked_f3, -1)[0])


def test_unbalanced_twists():
    F = gf(5)
    p = ProjPoint1.make(F, 1, 1)
    # d = (0, 0, 0, 1): only the coordinate of e4 is restricted, every line has a frame
    fib = FibrationSpec.diagonal(F, (0, 0, 0, 1), 0, [[1], [1], [1], [1, 0, 3]])
    assert fiber_at(fib, p).rank == 4
    lines = all_lines(fib, p)
    assert lines
    for line in lines:
        rec = elementary_transform(fib, p, line)
        assert invariants(rec.output).delta == invariants(fib).delta
        U = [list(r) for r in rec.basis_change]
        prod = mat_mul(F, U, graded_inverse(F, U))
        assert all(prod[i][j] == (BinaryForm.constant(F, 1) if i == j else BinaryForm.zero(F))
                   for i in range(4) for j in range(4))
        assert inverse_transform(rec).output.same_data(fib)


def test_unbalanced_twists_blocked():
    F = gf(5)
    p = ProjPoint1.make(F, 1, 1)
    # d = (1, 0, 0, 0): the line would have to sit in x1 = 0, a smooth conic
    fib = FibrationSpec.diagonal(F, (1, 0, 0, 0), 0, [[1, 0, 3], [1], [1], [1]])
    lines = all_lines(fib, p)
    assert lines
    for line in lines:
        with pytest.raises(NoGradedAutomorphism):
            elementary_transform(fib, p, line)
