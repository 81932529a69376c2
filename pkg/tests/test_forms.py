import pytest
import sympy
from hypothesis import given, strategies as st

from quadrifold.errors import DegreeMismatch, InexactDivision, ZeroForm
from quadrifold.gfpoly import BinaryForm, ProjPoint1, gf, points_of_p1


def forms(p, max_degree=6):
    F = gf(p)
    return st.integers(0, max_degree).flatmap(
        lambda d: st.lists(st.integers(0, p - 1), min_size=d + 1, max_size=d + 1)
    ).map(lambda cs: BinaryForm(F, cs)).filter(lambda f: not f.is_zero())


def uv(F):
    return BinaryForm.monomial(F, 1, 0), BinaryForm.monomial(F, 0, 1)


def test_gcd_example():
    F = gf(3)
    u, v = uv(F)
    assert (u * u * v).gcd(u * v * v) == u * v


def test_squarefree_examples():
    F = gf(3)
    u, v = uv(F)
    f = u * v * (u * u - v * v)
    assert f.is_squarefree()
    roots = f.projective_roots(1)
    assert [(b.label(), m) for b, m in roots] == [("0:1", 1), ("1:0", 1), ("1:1", 1), ("1:2", 1)]
    assert not (u * u * v).is_squarefree()


def test_roots_examples():
    F3, F5 = gf(3), gf(5)
    u, v = uv(F3)
    assert [(b.label(), m) for b, m in (u * v).projective_roots(1)] == [("0:1", 1), ("1:0", 1)]
    roots = (u * u + v * v).projective_roots(2)
    assert len(roots) == 1 and roots[0][1] == 1 and roots[0][0].degree_over(F3) == 2
    u, v = uv(F5)
    assert [(b.label(), m) for b, m in (u * u + v * v).projective_roots(1)] == [("1:2", 1), ("1:3", 1)]


def test_degree_mismatch_and_zero():
    F = gf(3)
    u, v = uv(F)
    with pytest.raises(DegreeMismatch):
        _ = u + u * v
    z = BinaryForm.zero(F)
    assert z.degree is None and (z + u) == u and (z * u).is_zero()
    with pytest.raises(ZeroForm):
        z.projective_roots(1)
    with pytest.raises(InexactDivision):
        u.divide_exact(v)


@given(st.sampled_from([3, 5]).flatmap(lambda p: forms(p)))
def test_squarefree_iff_simple_roots(f):
    if f.degree == 0:
        assert f.is_squarefree()
        return
    roots = f.projective_roots(f.degree)
    assert sum(m * b.degree_over(f.field) for b, m in roots) == f.degree
    assert f.is_squarefree() == all(m == 1 for _, m in roots)


@given(st.sampled_from([3, 5]).flatmap(lambda p: st.tuples(forms(p, 4), forms(p, 4))))
def test_gcd_against_sympy(pair):
    f, g = pair
    F = f.field
    x = sympy.symbols("x")
    # dehomogenize at u = 1: coefficient of v^i is codes[i]
    pf = sympy.Poly(list(reversed(f.codes)), x, modulus=F.p)
    pg = sympy.Poly(list(reversed(g.codes)), x, modulus=F.p)
    h = f.gcd(g)
    ph = sympy.Poly(list(reversed(h.codes)), x, modulus=F.p)
    want = sympy.gcd(pf, pg)
    # the affine part must agree up to a unit; the rest is the common power of u... of v at [1:0]
    assert sympy.Poly(ph.monic(), x, modulus=F.p) == sympy.Poly(want.monic(), x, modulus=F.p)
    assert h.infinity_multiplicity() == min(f.infinity_multiplicity(), g.infinity_multiplicity())


@given(st.sampled_from([3, 5]).flatmap(lambda p: st.tuples(forms(p, 4), forms(p, 4))))
def test_product_divides(pair):
    f, g = pair
    assert (f * g).divide_exact(g) == f
    assert f.divides(f * g)


@given(st.sampled_from([3, 5]).flatmap(lambda p: forms(p, 5)))
def test_evaluation_is_homogeneous(f):
    F = f.field
    for b in points_of_p1(F):
        for t in range(1, F.p):
            scaled = f.evaluate_codes(F, F.mul(t, b.u), F.mul(t, b.v))
            assert scaled == F.mul(F.pow(t, f.degree), f.evaluate_codes(F, b.u, b.v))


def test_points_of_p1_and_normalization():
    F = gf(5)
    pts = list(points_of_p1(F))
    assert len(pts) == 6
    assert ProjPoint1.make(F, 2, 4) == ProjPoint1.make(F, 1, 2)
    assert ProjPoint1.make(F, 0, 3).coords == (0, 1)


def test_points_over_extension_lift():
    F, K = gf(3), gf(3, 2)
    b = ProjPoint1.make(F, 1, 2)
    assert b.to(K).degree_over(F) == 1
    assert b.to(K).label() == "1,0:2,0"
