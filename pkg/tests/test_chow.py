import random

import pytest
import sympy

from quadrifold.chow import ChowClass, LinearDegree, degree, multiply, verify_height_formula
from quadrifold.errors import DimensionMismatch, NotTopDimensional


def test_examples_n2():
    n = 2
    xi, e, i = ChowClass.xi(n), ChowClass.eps_e(n), ChowClass.eps_i(n)
    assert xi * xi ** 3 == -(e * xi ** 3)
    assert (e * i).is_zero()
    assert (e + 2 * xi) ** 2 == 4 * e * xi + 4 * xi ** 2
    cube = (e - i + 2 * xi) ** 3
    assert cube == 12 * e * xi ** 2 - 12 * i * xi ** 2 + 8 * xi ** 3
    assert degree(cube * (2 * xi + i)) == LinearDegree(8, -16)
    assert degree(ChowClass.zero(n)) == LinearDegree(0, 0)
    assert degree(xi ** 3 * i) == LinearDegree(0, 1)


def test_errors():
    with pytest.raises(DimensionMismatch):
        multiply(ChowClass.xi(2), ChowClass.xi(3))
    with pytest.raises(NotTopDimensional):
        degree(ChowClass.xi(2))


@pytest.mark.parametrize("n", range(1, 7))
def test_height_formula(n):
    rep = verify_height_formula(n)
    assert rep.holds
    assert rep.to_dict()["identity"] == f"{n ** n}*Delta"


def _sympy_height(n):
    """Independent expansion: truncate a polynomial in xi, E, I by the relations."""
    xi, E, I, dE, dI = sympy.symbols("xi E I degE degI")
    expr = sympy.expand((E + n * xi - I) ** (n + 1) * (2 * xi + I))
    poly = sympy.Poly(expr, xi, E, I)
    total = 0
    for (a, b, c), coef in poly.terms():
        if b + c > 1:
            continue
        if b + c == 0:
            # xi^(n+2) = -E xi^(n+1); the top power here is exactly n + 2
            assert a == n + 2
            total += -coef * dE
        elif b == 1:
            assert a == n + 1
            total += coef * dE
        else:
            assert a == n + 1
            total += coef * dI
    return sympy.expand(-total)


@pytest.mark.parametrize("n", range(1, 7))
def test_height_formula_against_sympy(n):
    dE, dI = sympy.symbols("degE degI")
    h = _sympy_height(n)
    rep = verify_height_formula(n)
    assert h == rep.height.c_e * dE + rep.height.c_i * dI
    assert sympy.expand(h - n ** n * (-2 * dE + (n + 2) * dI)) == 0


def _random_class(n, rng):
    terms = {}
    for _ in range(rng.randint(0, 4)):
        a = rng.randint(0, n + 1)
        beta = rng.choice(["1", "E", "I"])
        terms[(a, beta)] = rng.randint(-5, 5)
    return ChowClass.make(n, terms)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_ring_laws(n):
    rng = random.Random(n)
    for _ in range(100):
        a, b, c = (_random_class(n, rng) for _ in range(3))
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c


def test_degree_is_linear():
    rng = random.Random(0)
    n = 3
    xi = ChowClass.xi(n)
    for _ in range(50):
        ce, ci = rng.randint(-9, 9), rng.randint(-9, 9)
        cls = ce * ChowClass.eps_e(n) * xi ** (n + 1) + ci * ChowClass.eps_i(n) * xi ** (n + 1)
        assert degree(cls) == LinearDegree(ce, ci)
