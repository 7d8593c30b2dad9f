import numpy as np
import pytest
import sympy

from manincup.padic import (ArithmeticCharacter, DomainError, GroupRingElem, PadicScalar, all_characters,
                            bernoulli1, epsilon_idempotent, eval_arith_char, omega_power, ring_for,
                            specialize_star, teichmuller, trivial_character)


def test_teichmuller_examples():
    assert teichmuller(1, 7, 3) == 1
    assert teichmuller(2, 5, 2) == 7
    assert teichmuller(3, 7, 1) == 3
    with pytest.raises(DomainError):
        teichmuller(10, 5, 2)


@pytest.mark.parametrize("p", [5, 7])
@pytest.mark.parametrize("m", [1, 2, 3])
def test_teichmuller_multiplicative_exhaustive(p, m):
    q = p**m
    units = [a for a in range(1, q) if a % p]
    w = {a: teichmuller(a, p, m) for a in units}
    for a in units:
        assert w[a] % p == a % p
        assert pow(w[a], p - 1, q) == 1
        for b in units:
            assert w[(a * b) % q] == (w[a] * w[b]) % q


def test_padic_scalar_ring():
    x = PadicScalar(7, 5, 2)
    assert x * x.inverse() == 1
    assert (x + 18) == 0
    assert PadicScalar(10, 5, 2).valuation() == 1
    assert not PadicScalar(10, 5, 2).is_unit()
    with pytest.raises(ZeroDivisionError):
        PadicScalar(5, 5, 2).inverse()


def test_arith_char_examples():
    R = ring_for(5, 2, 5)
    one = trivial_character(5)
    for a in (1, 2, 3, 4, 6):
        assert np.array_equal(eval_arith_char(ArithmeticCharacter(one, 0), a, R), R.one())
    assert not eval_arith_char(ArithmeticCharacter(one, 3), 0, R).any()
    kappa1 = ArithmeticCharacter(trivial_character(1), 1)
    expected = 2 * pow(teichmuller(2, 5, 2), -1, 25) % 25
    assert R.as_int(eval_arith_char(kappa1, 2, R)) == expected


def test_kappa_at_p_is_p():
    R = ring_for(5, 3, 1)
    kappa1 = ArithmeticCharacter(trivial_character(1), 1)
    assert R.as_int(eval_arith_char(kappa1, 5, R)) == 5
    assert R.as_int(eval_arith_char(kappa1, 10, R)) == (5 * 2 * pow(teichmuller(2, 5, 3), -1, 125)) % 125


def test_bernoulli_flagship_and_regular():
    _, v37 = bernoulli1(omega_power(37, 31), 37, 3)
    assert v37 == 1
    _, v5 = bernoulli1(omega_power(5, 1), 5, 3)
    assert v5 == 0


@pytest.mark.parametrize("p", [5, 7, 11, 13, 37])
def test_bernoulli_kummer_congruence(p):
    # B_{1, omega^{k-1}} = B_k / k mod p for even 2 <= k <= p - 3
    for k in range(2, p - 2, 2):
        val, _ = bernoulli1(omega_power(p, k - 1), p, 1)
        R = ring_for(p, 1, p)
        bk = sympy.bernoulli(k) / k
        assert R.as_int(val) == int(bk.p * pow(int(bk.q), -1, p)) % p


def test_bernoulli_even_characters_vanish():
    for L in (5, 7, 13, 25, 35, 65):
        for chi in all_characters(L):
            if chi.is_even() and not chi.is_trivial():
                val, _ = bernoulli1(chi, 5 if L % 5 else 7, 2)
                assert val is not None and not np.any(val)


def test_epsilon_idempotents():
    L, p, m = 5, 5, 2
    R = ring_for(p, m, L)
    chars = all_characters(L)
    eps = [epsilon_idempotent(c, L, R) for c in chars]
    total = eps[0]
    for e in eps[1:]:
        total = total + e
    assert total == GroupRingElem.basis(L, R, 1)
    for i, a in enumerate(eps):
        assert a * a == a
        for j, b in enumerate(eps):
            if i != j:
                assert (a * b).is_zero()


def test_epsilon_projects_to_eigenvector():
    L, R = 5, ring_for(5, 2, 5)
    w = omega_power(5, 1)
    e = epsilon_idempotent(w, L, R)
    x = e * GroupRingElem.basis(L, R, 2)
    # [a] x = omega(a) x
    for a in (2, 3, 4):
        lhs = GroupRingElem.basis(L, R, a) * x
        assert lhs == x.scale(w.value(a, R))


def test_star_specialization_examples():
    L = 25
    R = ring_for(5, 2, L)
    one = GroupRingElem.basis(L, R, 1, star=True)
    for chi in all_characters(L)[:6]:
        assert np.array_equal(specialize_star(one, chi), R.one())
    chi = [c for c in all_characters(L) if c.conductor() == 25][0]
    x = GroupRingElem(L, R, star=True)
    for j in (5, 10, 15):
        x.coeffs[j] = R.one()
    assert not specialize_star(x, chi).any()


def _split_prime(L: int) -> int:
    """A prime l = 1 mod lcm(phi(d) : d | L), so every character value lies in F_l."""
    e = 1
    for d in sympy.divisors(L):
        e = sympy.ilcm(e, int(sympy.totient(d)))
    l = e + 1
    while not sympy.isprime(l) or L % l == 0:
        l += e
    return int(l)


@pytest.mark.parametrize("L", [11, 13, 15, 25, 35, 37, 49, 65])
def test_star_specialization_separates_points(L):
    # the star ring is torsion free, so injectivity over F_l (l prime to the
    # group orders) gives injectivity over Z_p
    from manincup import linalg as la
    from manincup.padic import separating_functionals
    ell = _split_prime(L)
    R = ring_for(ell, 1, L)
    assert R.dim == 1
    rows = [tab[1:, 0] for _, _, tab in separating_functionals(L, R)]
    A = np.array(rows, dtype=np.int64) % ell
    assert la.kernel(A, ell, 1).shape[1] == 0


def test_star_specialization_distinguishes_two_elements_at_25():
    from manincup.padic import separating_functionals
    L = 25
    R = ring_for(5, 2, L)
    x = GroupRingElem.basis(L, R, 5, star=True)
    y = GroupRingElem.basis(L, R, 10, star=True)
    assert any(np.any((tab[5] - tab[10]) % R.q) for _, _, tab in separating_functionals(L, R))
    assert not (x == y)
