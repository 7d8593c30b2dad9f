import numpy as np
import pytest

from manincup import linalg as la
from manincup.mazur_tate import (PQuotient, equal_mod, kappa_precision, level_compatibility_defect,
                                 nontrivial_grid, scalar_on, specialize, star_vanishes_for_odd_alpha,
                                 theta_context, theta_element, verify_compare_identities,
                                 verify_diamond_identity, verify_distribution, verify_functional_equation)
from manincup.padic import ArithmeticCharacter, DomainError, all_characters, omega_power, ring_for

KS, SS = (2, 13, 24), (1, 12, 23)


@pytest.fixture(scope="module")
def ctx11():
    return theta_context(1, 11, 1, 4)


@pytest.mark.parametrize("N,p,r", [(1, 5, 1), (1, 5, 2), (1, 7, 1), (2, 5, 1), (1, 11, 1)])
def test_distribution_relation(N, p, r):
    res = verify_distribution(N, p, r)
    assert res.cases > 0
    assert res.ok, res.failures[:5]


def test_theta_needs_positive_r():
    with pytest.raises(DomainError):
        theta_context(11, 5, 0, 2)


def test_theta_coefficients(ctx11):
    th = theta_element(ctx11, 1)
    assert th.coeffs.shape == (ctx11.W.dim, 11)
    assert th.support == tuple(range(1, 11))
    assert not np.any(th.coefficient(0))
    Uinv = ctx11.op(("Uinv", 11))
    for j in (1, 4, 10):
        assert np.array_equal(th.coefficient(j + 11), th.coefficient(j))
        expected = la.matmul(Uinv, ctx11.xi(j, 1, False)[:, None], ctx11.q)[:, 0]
        assert np.array_equal(th.coefficient(j), expected)


def test_theta_requires_divisor():
    ctx = theta_context(1, 11, 1, 4)
    with pytest.raises(DomainError):
        theta_element(ctx, 2)


def test_diamond_identity(ctx11):
    R = ring_for(11, 4, 11)
    for a in [a for a in all_characters(11) if a.is_even()]:
        res = verify_diamond_identity(ctx11, a, 2, R, relative=True)
        assert res.cases == 10 and res.ok


def test_functional_equation(ctx11):
    grid = nontrivial_grid(ctx11, 10, seed=0, ks=KS, ss=SS + (2, 3))
    res = verify_functional_equation(ctx11, grid)
    assert res.cases == 10
    assert res.nonzero > 0
    assert res.ok, res.failures


def test_functional_equation_detects_wrong_sign(ctx11):
    # dropping the sign -chi(-1) must break the identity on nonzero cases
    th = theta_element(ctx11, 1)
    wm2 = omega_power(11, 8)
    broken = 0
    for g in nontrivial_grid(ctx11, 10, seed=0, ks=KS, ss=SS + (2, 3)):
        R = ring_for(11, 4, 11, g.alpha.modulus, g.chi.modulus)
        Pq = PQuotient(ctx11, g.alpha, g.k, R)
        m = min(th.precision, kappa_precision(1, 11, g.k - 2, g.s - 1, g.k - g.s - 1))
        lhs = specialize(th, ArithmeticCharacter(g.chi, g.s - 1), R)
        chi2 = g.alpha * g.chi.inverse() * wm2
        rhs = scalar_on(R, g.chi.value(-1, R), specialize(th, ArithmeticCharacter(chi2, g.k - g.s - 1), R))
        if not equal_mod(Pq, lhs, rhs % R.q, m):
            broken += 1
    assert broken > 0


def test_compare_identities(ctx11):
    grid = nontrivial_grid(ctx11, 6, seed=1, ks=KS, ss=SS)
    results = verify_compare_identities(ctx11, grid)
    assert [r.name for r in results] == ["star_comparison", "star_comparison_quotient", "level_comparison",
                                         "qp_functional_equation"]
    for r in results:
        assert r.cases == 6 and r.nonzero > 0
        assert r.ok, (r.name, r.failures)


def test_star_vanishes_for_odd_alpha(ctx11):
    for a in [a for a in all_characters(11) if not a.is_even()]:
        assert star_vanishes_for_odd_alpha(ctx11, a, 2, a, 1)


def test_level_compatibility_of_theta():
    d = level_compatibility_defect(3, 5, 1, 3)
    assert d.shape == (2, 15)
    assert not d.any()
