import pytest
from hypothesis import given, settings, strategies as st

from conftest import data_path
from quadrifold.errors import (BudgetExceeded, ConstraintOffQuadric, ConstraintOnDiscriminant,
                               InvalidSection, PreconditionError)
from quadrifold.fibration import Case, FibrationSpec, fiber_at, sample_census
from quadrifold.gfpoly import BinaryForm, ProjPoint1, gf
from quadrifold.io import load_fibration
from quadrifold.sections import (PointConstraint, Section, check_stability_hypothesis,
                                 count_by_height, enumerate_brute_force, enumerate_sections,
                                 existence_bound, make_section, min_height_section,
                                 section_problems, twist_for_height, weak_approx_search,
                                 weak_approximation_bound)


def test_worked_counts(worked_f3):
    assert count_by_height(worked_f3, -3, 3) == {-3: 0, -2: 0, -1: 4, 0: 0, 1: 36, 2: 0, 3: 276}


def test_worked_section_at_minus_one(worked_f3):
    secs = enumerate_sections(worked_f3, -1)
    vecs = [tuple(s.vector()) for s in secs]
    assert (1, 0, 1, 1) in vecs
    for s in secs:
        assert s.height == -1 and not section_problems(s)


def test_min_height_worked(worked_f3):
    res = min_height_section(worked_f3)
    assert res.height == -1 and res.bound == -1 and res.within_bound
    assert tuple(res.section.vector()) == (1, 0, 1, 1)
    assert existence_bound(worked_f3) == -1


@pytest.mark.parametrize("h", [-1, 1])
def test_brute_force_oracle(worked_f3, h):
    fast = enumerate_sections(worked_f3, h)
    slow = enumerate_brute_force(worked_f3, h)
    assert [s.key() for s in fast] == [s.key() for s in slow]


@pytest.mark.parametrize("h", [-1, 1, 3])
def test_strategies_agree(worked_f3, h):
    a = enumerate_sections(worked_f3, h, strategy="direct")
    b = enumerate_sections(worked_f3, h, strategy="interpolate")
    assert [s.key() for s in a] == [s.key() for s in b]


def test_wrong_parity_is_empty(worked_f3):
    assert twist_for_height(worked_f3, 0) is None
    assert enumerate_sections(worked_f3, 2) == []


def test_section_problems(worked_f3):
    F = worked_f3.field
    one, z = BinaryForm.constant(F, 1), BinaryForm.zero(F)
    assert section_problems(Section(worked_f3, 0, (one, z, one, one))) == []
    assert section_problems(Section(worked_f3, 0, (one, one, z, z)))
    assert section_problems(Section(worked_f3, 0, (z, z, z, z)))
    u = BinaryForm.monomial(F, 1, 0)
    # u * (1, 0, 1, 1) satisfies the identity but is not saturated
    bad = Section(worked_f3, 1, (u, z, u, u))
    assert any("saturated" in p for p in section_problems(bad))
    with pytest.raises(InvalidSection):
        make_section(worked_f3, 1, [u, z, u, u])
    sec = make_section(worked_f3, 0, [[2], [], [2], [2]])
    assert tuple(sec.vector()) == (1, 0, 1, 1)


def test_budget_exceeded(worked_f3):
    with pytest.raises(BudgetExceeded) as info:
        enumerate_sections(worked_f3, 5, budget=100)
    assert info.value.needed > 100


def test_parity_of_all_heights(worked_f3, worked_f5):
    for fib in (worked_f3, worked_f5):
        for h in range(-3, 2):
            for s in enumerate_sections(fib, h):
                assert (s.height - sum(fib.d) - fib.e) % 2 == 0


def test_weak_approx_regression(worked_f5):
    F = worked_f5.field
    c = PointConstraint.make(ProjPoint1.make(F, 1, 1), [1, 2, 0, 0])
    res = weak_approx_search(worked_f5, [c])
    assert res.bound == weak_approximation_bound(worked_f5, 1) == 8
    assert res.height == 1 and res.within_bound
    assert res.section.point_at(c.b) == c.x
    assert not section_problems(res.section)


def test_weak_approx_at_quadratic_point(worked_f5):
    F = worked_f5.field
    K = F.extension(2)
    b = ProjPoint1.make(K, 1, K.from_residues([0, 1]))
    fb = fiber_at(worked_f5, b)
    from quadrifold.fibration import fiber_points
    x = fiber_points(fb)[0]
    c = PointConstraint.make(b, x)
    res = weak_approx_search(worked_f5, [c], budget=10 ** 7)
    assert res.section.point_at(b) == c.x
    assert res.bound == weak_approximation_bound(worked_f5, 2)


def test_constraint_errors(worked_f5):
    F = worked_f5.field
    with pytest.raises(ConstraintOnDiscriminant):
        weak_approx_search(worked_f5, [PointConstraint.make(ProjPoint1.make(F, 0, 1), [1, 0, 0, 0])])
    with pytest.raises(ConstraintOffQuadric):
        weak_approx_search(worked_f5, [PointConstraint.make(ProjPoint1.make(F, 1, 1), [1, 0, 0, 0])])


def test_preconditions():
    F = gf(3)
    flat = FibrationSpec.diagonal(F, (0, 0, 0, 0), 0, [[1], [1], [1], [1]])
    with pytest.raises(PreconditionError):
        min_height_section(flat)
    nonsq = FibrationSpec.diagonal(F, (1, 0, 0, 0), 0, [[1, 0, 0], [1], [1], [1]])
    with pytest.raises(PreconditionError):
        min_height_section(nonsq)


def test_stability_holds_on_worked(worked_f3):
    rep = check_stability_hypothesis(worked_f3)
    assert rep.holds and rep.threshold == -2


def test_stability_fails_with_negative_twist():
    fib = load_fibration(data_path("f5_unstable.json"))
    rep = check_stability_hypothesis(fib)
    assert not rep.holds and not rep.semistable
    assert [s.height for s in rep.offending] == [-4]
    assert tuple(rep.offending[0].vector()) == (1,)


@settings(max_examples=8)
@given(st.integers(0, 10 ** 6), st.sampled_from([Case.CASE1, Case.CASE2, Case.CASE3, Case.CASE4]))
def test_sections_of_census_samples_are_valid(seed, case):
    fib = sample_census(gf(3), case, 1, seed=seed).fib
    res = min_height_section(fib)
    assert res is not None and res.within_bound
    sec = res.section
    assert not section_problems(sec)
    F = fib.field
    for b in (ProjPoint1.make(F, 1, t) for t in range(3)):
        fb = fiber_at(fib, b)
        assert fb.value(sec.at(b)) == 0
