from fractions import Fraction

import numpy as np
import pytest

from manincup import linalg as la
from manincup.hecke import (ManinDrinfeld, check_eisenstein_nontriviality, congruence_module, eisenstein_quotient,
                            m_localize, odd_primitive_characters, ordinary_projector, ordinary_space,
                            parse_theta, stabilized_power, theta_label, up_operator)
from manincup.manin import build_symbol_space
from manincup.padic import omega_power


@pytest.fixture(scope="module")
def space37():
    return build_symbol_space(1, 37, 1, 3)


@pytest.fixture(scope="module")
def quotient37(space37):
    return eisenstein_quotient(space37, parse_theta("w31", 1, 37))


def test_ordinary_projector_is_idempotent_and_central():
    sp = build_symbol_space(1, 5, 2, 2)
    q = sp.q
    e = ordinary_projector(sp).e
    assert np.array_equal(la.matmul(e, e, q), e)
    for A in (sp.T(2), sp.T(3), sp.diamond(2), sp.U(5)):
        assert not np.any((la.matmul(A, e, q) - la.matmul(e, A, q)) % q)


def test_ordinary_projector_is_limit_of_up_powers():
    sp = build_symbol_space(1, 7, 1, 2)
    e = ordinary_projector(sp).e
    assert np.array_equal(stabilized_power(up_operator(sp), sp.p, sp.K), e)


def test_up_invertible_on_ordinary_part():
    sp = build_symbol_space(3, 5, 1, 3)
    W = ordinary_space(sp)
    assert la.is_invertible(W.restrict(sp.U(5)), 5)


def test_ordinary_kills_cusps_with_p_power_denominator():
    # e (a / p^r b) = 0 when p^r !| a; the cusp 0/1 survives
    sp = build_symbol_space(1, 5, 2, 2)
    q = sp.q
    E = stabilized_power(sp.cusp_hecke(5), 5, 2)
    for a, b in [(1, 1), (2, 1), (3, 2), (7, 3), (4, 1)]:
        x = sp.cusp_vector(Fraction(a, 25 * b))
        assert not np.any(la.matmul(E, x[:, None], q))
    assert np.any(la.matmul(E, sp.cusp_vector(Fraction(0, 1))[:, None], q))


def test_ordinary_cuspidal_rank_at_37(space37):
    assert ordinary_space(space37, cuspidal=True).dim == 42


def test_manin_drinfeld_properties():
    sp = build_symbol_space(1, 11, 1, 3)
    md = ManinDrinfeld(sp)
    q = sp.q
    for k in range(sp.cuspidal.shape[1]):
        x = sp.cuspidal[:, k]
        assert np.array_equal(md.split(x) % sp.p**md.precision, x % sp.p**md.precision)
    T = sp.T(2)
    for (u, v) in sp.pairs[::9]:
        x = sp.symbol(u, v)
        lhs = md.split_scaled(la.matmul(T, x[:, None], q)[:, 0])
        rhs = la.matmul(T, md.split_scaled(x)[:, None], q)[:, 0]
        assert not np.any((lhs - rhs) % sp.p**md.precision)


def test_ordinary_symbols_with_unit_entries_are_cuspidal():
    sp = build_symbol_space(1, 11, 1, 3)
    e = ordinary_projector(sp).e
    q = sp.q
    for (u, v) in sp.pairs:
        if u % 11 and v % 11:
            x = la.matmul(e, sp.symbol(u, v)[:, None], q)[:, 0]
            assert not np.any(sp.boundary(x))


@pytest.mark.parametrize("label", ["w1", "w3"])
def test_regular_prime_has_no_eisenstein_locus(label):
    sp = build_symbol_space(1, 5, 1, 3)
    theta = parse_theta(label, 1, 5)
    assert m_localize(sp, theta).rank == 0
    w = check_eisenstein_nontriviality(1, 5, theta)
    assert (w.bernoulli_divisible, w.locus_nonzero) == (False, False)
    assert congruence_module(sp, theta).length == 0


def test_prime_seven_sweep():
    for theta in odd_primitive_characters(1, 7):
        w = check_eisenstein_nontriviality(1, 7, theta)
        assert (w.bernoulli_divisible, w.locus_nonzero) == (False, False)


def test_theta_labels_round_trip():
    for theta in odd_primitive_characters(13, 5):
        assert parse_theta(theta_label(theta, 5), 13, 5) == theta
    assert parse_theta("w31", 1, 37) == omega_power(37, 31, 37)


def test_flagship_quotient(space37, quotient37):
    theta = parse_theta("w31", 1, 37)
    w = check_eisenstein_nontriviality(1, 37, theta)
    assert (w.bernoulli_divisible, w.locus_nonzero) == (True, True)
    assert quotient37.order == 37
    cm = congruence_module(space37, theta)
    assert cm.length == quotient37.length
    assert cm.cyclic and cm.generated_by_zero_one


def test_eisenstein_generators_vanish_in_quotient(quotient37):
    Q = quotient37
    for _, g in Q.locus.generators:
        img = Q.plus.restrict(g)
        for k in range(img.shape[1]):
            assert Q.quotient.is_zero(img[:, k])


def test_quotient_annihilated_by_p_power(quotient37):
    assert all(e <= quotient37.space.K for e in quotient37.quotient.exps)


def test_xi_bar_depends_on_residues_only(quotient37):
    L = 37
    for (u, v) in [(1, 2), (3, 5), (10, 36)]:
        assert np.array_equal(quotient37.xi_bar(u, v), quotient37.xi_bar(u + L, v - 2 * L))
