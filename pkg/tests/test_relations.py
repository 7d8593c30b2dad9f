import numpy as np
import pytest

from manincup import linalg as la
from manincup.hecke import eisenstein_quotient, parse_theta
from manincup.manin import build_symbol_space
from manincup.padic import DomainError
from manincup.relations import (conjecture_shadow_check, equivariance_defect, pairing_module, varpi,
                                verify_eisenstein_property, verify_sigma_stable, verify_varpi_well_defined)


@pytest.fixture(scope="module")
def mod37():
    return pairing_module(1, 37, 1, 2)


@pytest.fixture(scope="module")
def sp37():
    return build_symbol_space(1, 37, 1, 2, validate=False)


def test_module_at_37_is_cyclic_of_order_37(mod37):
    assert mod37.invariants == [1]


def test_symbol_relations_at_37(mod37):
    c = mod37.vec
    for u in (1, 2, 5, 17):
        assert mod37.is_zero(c(u, u))
        for v in (3, 10, 30):
            assert mod37.is_zero(c(u, v) + c(v, u))
            assert mod37.is_zero(c(u, v) - c(u, -v))
            if (u + v) % 37:
                assert mod37.is_zero(c(u, v) - c(u, u + v) - c(u + v, v))
    # the module is not killed by the relations
    assert any(not mod37.is_zero(c(1, v)) for v in range(2, 19))


def test_half_point_is_not_a_symbol(mod37):
    with pytest.raises(DomainError):
        mod37.gen(37, 1)


def test_varpi_kills_boundary_symbols(mod37, sp37):
    assert mod37.is_zero(varpi(sp37, mod37, sp37.symbol(1, 0)))
    assert mod37.is_zero(varpi(sp37, mod37, sp37.symbol(0, 1)))
    for u in (1, 4, 9):
        assert mod37.is_zero(varpi(sp37, mod37, sp37.symbol(u, u)))


def test_varpi_is_equivariant_at_37(mod37, sp37):
    # 2 generates (Z/37)^x
    assert equivariance_defect(sp37, mod37, 2)


def test_sigma_preserves_relations_at_37(mod37):
    S = mod37.sigma(2)
    assert not np.any(mod37.reduce(la.matmul(S, mod37.relations, mod37.q)))


@pytest.mark.parametrize("N,p,r", [(1, 5, 1), (1, 7, 1), (2, 5, 1)])
def test_sigma_stable_small(N, p, r):
    assert verify_sigma_stable(pairing_module(N, p, r, 2))


@pytest.mark.parametrize("N,p,r", [(1, 5, 1), (1, 5, 2), (1, 7, 1)])
def test_varpi_well_defined_small_levels(N, p, r):
    sp = build_symbol_space(N, p, r, 2, validate=False)
    mod = pairing_module(N, p, r, 2)
    checks = verify_varpi_well_defined(sp, mod)
    assert [c.name for c in checks] == ["two_term", "three_term", "sign", "plus_sign", "basis_consistency"]
    assert all(c.ok and c.cases for c in checks)


def test_regular_prime_module_vanishes():
    # no Eisenstein congruence at 5, and the symbol module is zero
    assert pairing_module(1, 5, 1, 2).invariants == []
    sp = build_symbol_space(1, 5, 1, 2, validate=False)
    res = verify_eisenstein_property(sp, pairing_module(1, 5, 1, 2), 2)
    assert res.ok and res.cases == 0


@pytest.mark.parametrize("l", [2, 3])
def test_eisenstein_property_at_37(mod37, sp37, l):
    res = verify_eisenstein_property(sp37, mod37, l)
    assert res.cases == 40
    assert res.info["nonzero_images"] > 0
    assert res.ok, res.failures


def test_eisenstein_property_detects_wrong_twist(mod37, sp37):
    # sigma_l in place of sigma_l^{-1} does not satisfy the identity
    assert not verify_eisenstein_property(sp37, mod37, 2, inverse=False).ok


def test_eisenstein_property_needs_good_prime(mod37, sp37):
    with pytest.raises(DomainError):
        verify_eisenstein_property(sp37, mod37, 37)


def test_shadow_check_vacuous_at_regular_prime():
    sp = build_symbol_space(1, 5, 1, 3)
    rows = conjecture_shadow_check(eisenstein_quotient(sp, parse_theta("w1", 1, 5)))
    assert {r["relation"] for r in rows} == {"antisymmetry", "diagonal", "sign"}
    assert all(r["status"] == "vacuous" for r in rows)
