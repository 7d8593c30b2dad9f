"""Cyclotomic S-units as a universal distribution.

At level L = N p^r the numbers 1 - zeta_d^i (d | L, d > 1, i nonzero mod d)
are modelled by the points a = i/d of (1/L)Z/Z - {0}.  The only relations
imposed are the distribution relations

    g(a) = sum_{t b = a} g(b)        (from prod_k (1 - zeta_t^k x) = 1 - x^t)

and the sign relation g(-a) = g(a), which holds once roots of unity and -1
are discarded.  Everything is additive: an exponent becomes a coefficient.
Coefficients live in a CharRing, so character-twisted products such as
prod (1 - zeta^i)^{chi(i)} are vectors over it.

This is a formal model.  Any relation among actual cyclotomic units beyond
the distribution relations is invisible here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd

import numpy as np
import sympy

from . import linalg as la
from .padic import (ArithmeticCharacter, CharRing, DirichletCharacter, DomainError, GroupRingElem,
                    eval_arith_char, ring_for)


def _vp(x: int, p: int) -> int:
    if x == 0:
        return 10**6
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


class DistModule:
    """The universal even distribution of level L over Z/p^m.

    Elements are arrays of shape (L, R.dim): row j is the coefficient of the
    point j/L (row 0 is unused).
    """

    def __init__(self, L: int, p: int, m: int):
        if L < 2:
            raise DomainError("level must be at least 2")
        self.L, self.p, self.m = L, p, m
        self.q = p**m
        self.relations = self._relations()
        self._quot = la.Quotient(self.relations[1:], p, m)

    def _relations(self) -> np.ndarray:
        L = self.L
        cols = []
        for t in sympy.divisors(L)[1:]:
            step = L // t
            # points a = j/L with a in (t/L)Z: j = t * b0, roots b0 + k/t
            for b0 in range(1, step):
                col = np.zeros(L, dtype=np.int64)
                col[(t * b0) % L] -= 1
                for k in range(t):
                    col[(b0 + k * step) % L] += 1
                cols.append(col)
        for j in range(1, L):
            if j < L - j:
                col = np.zeros(L, dtype=np.int64)
                col[j] += 1
                col[L - j] -= 1
                cols.append(col)
        return np.stack(cols, axis=1) % self.q

    def point(self, d: int, i: int) -> int:
        """Row index of g(d, i) = 1 - zeta_d^i."""
        if self.L % d or d < 2 or i % d == 0:
            raise DomainError(f"g({d}, {i}) is not a symbol at level {self.L}")
        return (i % d) * (self.L // d)

    def zero(self, R: CharRing) -> np.ndarray:
        return np.zeros((self.L, R.dim), dtype=np.int64)

    def symbol(self, d: int, i: int, R: CharRing) -> np.ndarray:
        x = self.zero(R)
        x[self.point(d, i), 0] = 1
        return x

    def push_to_max(self, d: int, i: int, R: CharRing) -> np.ndarray:
        """g(d, i) written as sum_k g(L, i + k d)."""
        self.point(d, i)
        x = self.zero(R)
        for k in range(self.L // d):
            x[(i + k * d) % self.L, 0] += 1
        return x

    def normal_form(self, x: np.ndarray) -> np.ndarray:
        """Canonical coordinates of the class of x (one column per ring coordinate)."""
        return self._quot.reduce(np.asarray(x, dtype=np.int64)[1:] % self.q)

    @property
    def exps(self) -> list[int]:
        return [e for e in self._quot.exps if e > 0]

    def equal(self, x: np.ndarray, y: np.ndarray, m: int | None = None) -> bool:
        """x = y in the module, modulo p^m."""
        d = self.normal_form(x) - self.normal_form(y)
        if m is None or m >= self.m:
            return not np.any(d % self._mods())
        mods = np.minimum(self._mods(), self.p**m)
        return not np.any(d % mods)

    def _mods(self) -> np.ndarray:
        return np.array([self.p**e for e in self.exps], dtype=np.int64)[:, None]

    def functional(self, coeffs) -> "DualFunctional":
        """The functional sum_i c_i p^(m - e_i) x_i on normal-form coordinates."""
        coeffs = list(coeffs)
        return DualFunctional(self, np.array([c * self.p**(self.m - e) for c, e in zip(coeffs, self.exps)],
                                             dtype=np.int64) % self.q)


@lru_cache(maxsize=None)
def dist_module(L: int, p: int, m: int) -> DistModule:
    return DistModule(L, p, m)


@dataclass
class DualFunctional:
    """A Z/p^m-linear functional on the distribution module, given by its
    values on normal-form coordinates."""

    module: DistModule
    weights: np.ndarray

    def values(self) -> np.ndarray:
        """phi(g(L, j)) for j = 0..L-1 (entry 0 is zero)."""
        mod = self.module
        out = np.zeros(mod.L, dtype=np.int64)
        coords = mod.normal_form(np.eye(mod.L, dtype=np.int64))
        out[1:] = la.matmul(self.weights[None, :], coords, mod.q)[0, 1:]
        return out


def check_functional(module: DistModule, values: np.ndarray):
    """First relation killed by no functional that phi fails to annihilate,
    or None.  values[j] = phi(g(L, j))."""
    v = np.asarray(values, dtype=np.int64)
    bad = np.nonzero(la.matmul(v[None, :], module.relations, module.q)[0])[0]
    if len(bad):
        col = module.relations[:, bad[0]]
        return {int(j): int(c if c <= module.q // 2 else c - module.q) for j, c in enumerate(col) if c}
    return None


def dual_pushforward(module: DistModule, values: np.ndarray, R: CharRing | None = None) -> GroupRingElem:
    """sum_i phi(g(L, i)) [i] in the star group ring of level L.

    values[j] = phi(g(L, j)) with values in Z/p^m.  phi must kill every
    distribution and sign relation."""
    witness = check_functional(module, values)
    if witness is not None:
        raise DomainError(f"functional does not kill the relation {witness}")
    R = R or ring_for(module.p, module.m, 1)
    coeffs = np.zeros((module.L, R.dim), dtype=np.int64)
    coeffs[:, 0] = np.asarray(values) % module.q
    return GroupRingElem(module.L, R, coeffs, star=True)


def restrict_functional(hi: DistModule, values: np.ndarray, lo: DistModule) -> np.ndarray:
    """A functional at level L_hi restricted to the points of level L_lo."""
    if hi.L % lo.L:
        raise DomainError("restriction needs a divisor of the level")
    out = np.zeros(lo.L, dtype=np.int64)
    e = hi.L // lo.L
    for j in range(1, lo.L):
        out[j] = values[j * e]
    return out % lo.q


def pushforward_compatibility(N: int, p: int, r: int, s: int, m: int, seed: int = 0) -> bool:
    """phi_r([i]_r) = sum_k phi_s([i + k N p^r]_s): the image of a random
    well-defined functional at level s pushes forward to the image of its
    restriction at level r."""
    import random
    hi = dist_module(N * p**s, p, m)
    lo = dist_module(N * p**r, p, m)
    rng = random.Random(seed)
    phi = hi.functional(rng.randrange(p**m) for _ in hi.exps)
    vals = phi.values()
    big = dual_pushforward(hi, vals)
    small = dual_pushforward(lo, restrict_functional(hi, vals, lo))
    return big.pushforward(lo.L) == small


# ---------------------------------------------------------------------------
# the units eta and alpha


def eta_unit(mod: DistModule, N: int, M: int, psi: DirichletCharacter, t: int, R: CharRing) -> np.ndarray:
    """prod_{(i, M) = 1} (1 - zeta_L^i)^{psi kappa^{t-1}(i)}, L = N p^r."""
    if (N * mod.p) % M:
        raise DomainError("M must divide Np")
    chi = ArithmeticCharacter(psi, t - 1)
    x = mod.zero(R)
    for i in range(1, mod.L):
        if gcd(i, M) == 1:
            x[i] = eval_arith_char(chi, i, R)
    return x % R.q


def alpha_unit(mod: DistModule, N: int, Q: int, psi: DirichletCharacter, t: int, R: CharRing) -> np.ndarray:
    """prod_{(i, Np) = 1} (1 - zeta_{Qp^r}^i)^{psi kappa^{t-1}(i)}."""
    if N % Q:
        raise DomainError("Q must divide N")
    L, p = mod.L, mod.p
    d = L // (N // Q)
    chi = ArithmeticCharacter(psi, t - 1)
    x = mod.zero(R)
    for i in range(1, L):
        if gcd(i, N * p) == 1:
            x[mod.point(d, i)] = (x[mod.point(d, i)] + eval_arith_char(chi, i, R)) % R.q
    return x


def build_unit(kind: str, mod: DistModule, N: int, index: int, psi: DirichletCharacter, t: int,
               R: CharRing) -> np.ndarray:
    """kind 'eta' (index M) or 'alpha' (index Q)."""
    if kind == "eta":
        return eta_unit(mod, N, index, psi, t, R)
    if kind == "alpha":
        return alpha_unit(mod, N, index, psi, t, R)
    raise DomainError(f"unknown unit kind {kind!r}")


def _scale(R: CharRing, c: np.ndarray, x: np.ndarray) -> np.ndarray:
    return la.matmul(x, R.mul_matrix(c).T.copy(), R.q)


def _prime_to_p_period(psi: DirichletCharacter, p: int) -> int:
    f = psi.modulus
    while f % p == 0:
        f //= p
    return f


def _euler_product(R: CharRing, chi: ArithmeticCharacter, primes) -> np.ndarray:
    c = R.one()
    for l in primes:
        c = R.mul(c, (R.one() - eval_arith_char(chi, l, R)) % R.q)
    return c


@dataclass
class UnitCheck:
    name: str
    cases: int = 0
    failures: list = field(default_factory=list)
    skipped: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {"name": self.name, "cases": self.cases, "failures": list(self.failures),
                "skipped": list(self.skipped), "ok": self.ok}


def unit_precision(r: int, p: int, t: int, m: int) -> int:
    """kappa^{t-1} is periodic mod p^(r + v_p(t-1)); the identities hold to
    that precision at level r."""
    return min(m, r + _vp(t - 1, p))


def compare_units_a(N: int, p: int, r: int, m: int, M: int, psi: DirichletCharacter, t: int):
    """Both sides of alpha = eta_M^{prod_{l | Np, l !| M} (1 - chi(l))}, and the
    precision of the comparison."""
    L = N * p**r
    mod = dist_module(L, p, m)
    R = ring_for(p, m, psi.modulus)
    chi = ArithmeticCharacter(psi, t - 1)
    lhs = alpha_unit(mod, N, N, psi, t, R)
    primes = [l for l in sympy.primefactors(N * p) if M % l]
    rhs = _scale(R, _euler_product(R, chi, primes), eta_unit(mod, N, M, psi, t, R))
    return mod, lhs, rhs, unit_precision(r, p, t, m)


def compare_units_b(N: int, p: int, r: int, m: int, Q: int, psi: DirichletCharacter, t: int):
    """Both sides of phi(N) alpha = phi(Q) prod_{l | N, l !| Q} (1 - chi(l)) alpha^Q
    (requires f_psi | Q).  The precision drops by v_p(phi(N))."""
    if Q % _prime_to_p_period(psi, p):
        raise DomainError("f_psi must divide Q")
    L = N * p**r
    mod = dist_module(L, p, m)
    R = ring_for(p, m, psi.modulus)
    chi = ArithmeticCharacter(psi, t - 1)
    lhs = (int(sympy.totient(N)) * alpha_unit(mod, N, N, psi, t, R)) % R.q
    primes = [l for l in sympy.primefactors(N) if Q % l]
    c = (int(sympy.totient(Q)) * _euler_product(R, chi, primes)) % R.q
    rhs = _scale(R, c, alpha_unit(mod, N, Q, psi, t, R))
    prec = unit_precision(r, p, t, m) - _vp(int(sympy.totient(N)), p)
    return mod, lhs, rhs, prec


def unit_grid(N: int, p: int, r: int, ts=(1, 2, 6)):
    """Even characters of modulus N p^r and of the divisors of it, with a few t."""
    from .padic import all_characters
    L = N * p**r
    out = []
    for d in sorted(sympy.divisors(L)):
        for psi in all_characters(d):
            if psi.is_even() and psi.conductor() == d:
                # primitive characters of every period; the imprimitive lifts are added below
                for t in ts:
                    out.append((psi, t))
    # a couple of imprimitive lifts, whose values at the primes of L vanish
    for psi, t in list(out[:4]):
        if psi.modulus != L:
            out.append((psi.lift(L), t))
    return out


def degenerate_case(N: int, p: int, M: int, psi: DirichletCharacter, t: int) -> bool:
    """N = 1, psi = 1, t = 1, p !| M: eta_{M,r} = p^r, so the terms do not
    converge and the Euler factor 1 - chi(p) = 0 cannot be compared."""
    return N == 1 and psi.is_trivial() and psi.modulus % p != 0 and t == 1 and M % p != 0


def alpha_vanishes(N: int, p: int, r: int, m: int, Q: int, psi: DirichletCharacter, t: int) -> bool:
    """alpha^{Q, psi} = 0 in the module (to the kappa precision) when f_psi !| Q."""
    mod = dist_module(N * p**r, p, m)
    R = ring_for(p, m, psi.modulus)
    x = alpha_unit(mod, N, Q, psi, t, R)
    return mod.equal(x, mod.zero(R), unit_precision(r, p, t, m))


def verify_unit_identities(N: int, p: int, r: int = 1, m: int = 3, sample=None) -> list[UnitCheck]:
    """Parts a (every M | Np) and b (every Q | N with f_psi | Q) over a grid."""
    sample = sample if sample is not None else unit_grid(N, p, r)
    res_a = UnitCheck("units_euler_factor")
    res_b = UnitCheck("units_change_of_modulus")
    for psi, t in sample:
        label = f"psi={psi.modulus}:{psi.exps} t={t}"
        for M in sympy.divisors(N * p):
            if degenerate_case(N, p, M, psi, t):
                res_a.skipped.append(f"M={M} {label} (degenerate)")
                continue
            mod, lhs, rhs, prec = compare_units_a(N, p, r, m, M, psi, t)
            res_a.cases += 1
            if not mod.equal(lhs, rhs, prec):
                res_a.failures.append(f"M={M} {label}")
        for Q in sympy.divisors(N):
            if Q % _prime_to_p_period(psi, p):
                res_b.skipped.append(f"Q={Q} {label}")
                continue
            mod, lhs, rhs, prec = compare_units_b(N, p, r, m, Q, psi, t)
            res_b.cases += 1
            if prec <= 0:
                res_b.skipped.append(f"Q={Q} {label} (no precision)")
                continue
            if not mod.equal(lhs, rhs, prec):
                res_b.failures.append(f"Q={Q} {label}")
    return [res_a, res_b]
