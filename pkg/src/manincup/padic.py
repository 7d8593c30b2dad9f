"""Z/p^m, rings of character values, Dirichlet and arithmetic characters,
generalized Bernoulli numbers and (star) group rings.
"""

from __future__ import annotations

from functools import lru_cache
from math import gcd

import numpy as np
import sympy

from .linalg import PrecisionError, inverse, matmul, vp


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


def check_prime(p: int) -> None:
    if p < 5 or not sympy.isprime(p):
        raise DomainError(f"p={p} must be a prime >= 5")


class PadicScalar:
    """Residue class modulo p^m."""

    __slots__ = ("residue", "p", "m")

    def __init__(self, residue: int, p: int, m: int):
        self.p, self.m = p, m
        self.residue = residue % p**m

    @property
    def modulus(self) -> int:
        return self.p**self.m

    def _coerce(self, other):
        if isinstance(other, PadicScalar):
            if (other.p, other.m) != (self.p, self.m):
                raise DomainError("scalars at different precisions")
            return other.residue
        return int(other)

    def __add__(self, other):
        return PadicScalar(self.residue + self._coerce(other), self.p, self.m)

    __radd__ = __add__

    def __sub__(self, other):
        return PadicScalar(self.residue - self._coerce(other), self.p, self.m)

    def __rsub__(self, other):
        return PadicScalar(self._coerce(other) - self.residue, self.p, self.m)

    def __mul__(self, other):
        return PadicScalar(self.residue * self._coerce(other), self.p, self.m)

    __rmul__ = __mul__

    def __neg__(self):
        return PadicScalar(-self.residue, self.p, self.m)

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return PadicScalar(pow(self.residue, e, self.modulus), self.p, self.m)

    def is_unit(self) -> bool:
        return self.residue % self.p != 0

    def inverse(self):
        if not self.is_unit():
            raise ZeroDivisionError("not a unit")
        return PadicScalar(pow(self.residue, -1, self.modulus), self.p, self.m)

    def valuation(self) -> int:
        return min(vp(self.residue, self.p), self.m)

    def __eq__(self, other):
        if isinstance(other, PadicScalar):
            return (self.p, self.m, self.residue) == (other.p, other.m, other.residue)
        if isinstance(other, int):
            return self.residue == other % self.modulus
        return NotImplemented

    def __hash__(self):
        return hash((self.residue, self.p, self.m))

    def __int__(self):
        return self.residue

    def __repr__(self):
        return f"{self.residue} mod {self.p}^{self.m}"


def teichmuller(a: int, p: int, m: int) -> int:
    """The (p-1)st root of unity in Z/p^m congruent to a mod p."""
    if a % p == 0:
        raise DomainError(f"{a} is not a unit mod {p}")
    return pow(a, p ** (m - 1), p**m)


def kappa(a: int, p: int, m: int) -> int:
    """kappa(a) = a / omega(a), extended by kappa(p) = p.  Defined on nonzero
    integers; exact modulo p^r when a is only known modulo N p^r."""
    if a == 0:
        return 0
    v = vp(a, p)
    if v >= m:
        return 0
    u = a // p**v
    q = p**m
    return (p**v * u * pow(teichmuller(u, p, m), -1, q)) % q


def multiplicative_order(a: int, n: int) -> int:
    if n == 1:
        return 1
    return int(sympy.n_order(a, n))


class CharRing:
    """Z/p^m[x, y] / (g(x), Phi_{p^s}(y)): an unramified extension of Z/p^m
    containing the prime-to-p roots of unity of order n0, tensored with the
    p^s-th cyclotomic ring when wild roots of unity are needed.

    Elements are int64 arrays of shape (dg, dy) (or flattened, length dg*dy).
    """

    def __init__(self, p: int, m: int, n: int = 1):
        self.p, self.m, self.n = p, m, n
        self.q = p**m
        s = vp(n, p) if n > 1 else 0
        n0 = n // p**s
        self.n0, self.s = n0, s
        self.f = multiplicative_order(p, n0) if n0 > 1 else 1
        self.gpoly = _residue_field_poly(p, n0)
        self.dg = len(self.gpoly) - 1
        if s:
            self.ypoly = [1 if k % p ** (s - 1) == 0 else 0 for k in range(p**s - p ** (s - 1), -1, -1)]
        else:
            self.ypoly = [1, -1]
        self.dy = len(self.ypoly) - 1
        self.dim = self.dg * self.dy
        self._table = self._mult_table()
        self._zeta = self._make_zeta()

    def key(self):
        return (self.p, self.m, self.n)

    def __eq__(self, other):
        return isinstance(other, CharRing) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"CharRing(p={self.p}, m={self.m}, n={self.n})"

    # --- internal construction ---
    def _reduce_poly(self, coeffs: list[int], mod: list[int]) -> list[int]:
        """Reduce a polynomial (lowest degree first) modulo a monic polynomial
        given highest degree first."""
        d = len(mod) - 1
        c = list(coeffs)
        low = mod[::-1]
        for k in range(len(c) - 1, d - 1, -1):
            t = c[k]
            if t:
                for i in range(d + 1):
                    c[k - d + i] -= t * low[i]
        c = c[:d] + [0] * max(0, d - len(c))
        return [x % self.q for x in c]

    def _mult_table(self) -> np.ndarray:
        dg, dy = self.dg, self.dy
        D = dg * dy
        T = np.zeros((D, D, D), dtype=np.int64)
        xred = [self._reduce_poly([0] * k + [1], self.gpoly) for k in range(2 * dg - 1)]
        yred = [self._reduce_poly([0] * k + [1], self.ypoly) for k in range(2 * dy - 1)]
        for a in range(dg):
            for b in range(dy):
                for c in range(dg):
                    for d in range(dy):
                        vx = xred[a + c]
                        vy = yred[b + d]
                        out = np.outer(vx, vy) % self.q
                        T[a * dy + b, c * dy + d] = out.reshape(-1)
        return T

    def _make_zeta(self) -> np.ndarray:
        """Canonical primitive n-th root of unity: the Teichmuller lift of x
        (or of a primitive root when the residue field is F_p), times y."""
        if self.n0 == 1:
            z0 = self.one()
        elif self.dg == 1:
            z0 = self.scalar(teichmuller(_primitive_root_of_order(self.p, self.n0), self.p, self.m))
        else:
            x = self.zero()
            x[self.dy] = 1
            z0 = self.pow(x, (self.p**self.f) ** (self.m - 1))
        if self.s:
            y = self.zero()
            y[1] = 1
            z0 = self.mul(z0, y)
        return z0

    # --- element helpers ---
    def zero(self) -> np.ndarray:
        return np.zeros(self.dim, dtype=np.int64)

    def one(self) -> np.ndarray:
        return self.scalar(1)

    def scalar(self, a: int) -> np.ndarray:
        z = self.zero()
        z[0] = a % self.q
        return z

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.dim == 1:
            return (a * b) % self.q
        return matmul(self.mul_matrix(a), (b % self.q)[:, None], self.q)[:, 0]

    def mul_matrix(self, a: np.ndarray) -> np.ndarray:
        """Matrix of multiplication by a on the Z/p^m-basis (column convention)."""
        D = self.dim
        if D == 1:
            return np.array([[int(a[0]) % self.q]], dtype=np.int64)
        rows = matmul((a % self.q)[None, :], self._table.reshape(D, D * D), self.q)
        # rows[0, j*D + k] = coefficient of e_k in a * e_j
        return rows.reshape(D, D).T.copy()

    def pow(self, a: np.ndarray, e: int) -> np.ndarray:
        if e < 0:
            return self.pow(self.inv(a), -e)
        result = self.one()
        base = a % self.q
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result

    def is_unit(self, a: np.ndarray) -> bool:
        try:
            self.inv(a)
            return True
        except ZeroDivisionError:
            return False

    def inv(self, a: np.ndarray) -> np.ndarray:
        A = self.mul_matrix(a)
        Ainv = inverse(A, self.p, self.m)
        return Ainv[:, 0] % self.q

    def zeta(self, k: int) -> np.ndarray:
        """Primitive k-th root of unity (k | n), compatible: zeta(k) = zeta(n)^(n/k)."""
        if self.n % k:
            raise DomainError(f"ring does not contain the {k}-th roots of unity")
        return self.pow(self._zeta, self.n // k)

    def valuation(self, a: np.ndarray) -> int:
        """p-adic valuation, valid for unramified rings (no wild part)."""
        if self.s:
            raise DomainError("valuation is only defined on the unramified part")
        nz = [vp(int(c), self.p) for c in a if c % self.q]
        return min(nz) if nz else self.m

    def reduce_to(self, a: np.ndarray, m: int) -> np.ndarray:
        return a % (self.p**m)

    def at_precision(self, m: int) -> "CharRing":
        return char_ring(self.p, m, self.n)

    def as_int(self, a: np.ndarray) -> int:
        if np.any(a[1:] % self.q):
            raise DomainError("element is not a rational residue")
        return int(a[0]) % self.q


@lru_cache(maxsize=None)
def char_ring(p: int, m: int, n: int = 1) -> CharRing:
    return CharRing(p, m, n)


@lru_cache(maxsize=None)
def _residue_field_poly(p: int, n0: int) -> list[int]:
    """A monic irreducible factor of Phi_n0 mod p of least lexicographic order,
    highest degree first; linear factors give the trivial extension."""
    if n0 <= 1:
        return [1, -1]
    x = sympy.Symbol("x")
    poly = sympy.Poly(sympy.cyclotomic_poly(n0, x), x, modulus=p)
    factors = [f for f, _ in poly.factor_list()[1]]
    reps = []
    for f in factors:
        c = [int(a) % p for a in f.all_coeffs()]
        reps.append(c)
    reps.sort(key=lambda c: (len(c), c))
    best = reps[0]
    if len(best) == 2:
        return [1, -1]
    return best


def _primitive_root_of_order(p: int, k: int) -> int:
    g = int(sympy.primitive_root(p))
    return pow(g, (p - 1) // k, p)


# ---------------------------------------------------------------------------
# Dirichlet characters


@lru_cache(maxsize=None)
def unit_group(L: int):
    """Generators and orders of cyclic factors of (Z/L)^x, and the discrete
    logarithm table: logs[a] = exponent vector of a (None for non-units)."""
    if L == 1:
        return (), (), {0: ()}
    gens, orders = [], []
    for ell, a in sorted(sympy.factorint(L).items()):
        pe = ell**a
        rest = L // pe
        def lift(x):
            # x mod pe, 1 mod rest
            return (x * rest * pow(rest, -1, pe) + pe * pow(pe, -1, rest)) % L if rest > 1 else x % L
        if ell == 2:
            if a >= 2:
                gens.append(lift(pe - 1))
                orders.append(2)
            if a >= 3:
                gens.append(lift(5))
                orders.append(pe // 4)
        else:
            g = int(sympy.primitive_root(pe))
            gens.append(lift(g))
            orders.append(pe - pe // ell)
    logs = {}
    # breadth-first enumeration of the group
    elems = {1 % L: tuple(0 for _ in gens)}
    for i, (g, o) in enumerate(zip(gens, orders)):
        new = {}
        for a, e in elems.items():
            x = a
            for k in range(o):
                ee = list(e)
                ee[i] = k
                new[x] = tuple(ee)
                x = (x * g) % L
        elems = new
    logs = elems
    return tuple(gens), tuple(orders), logs


def group_exponent(L: int) -> int:
    _, orders, _ = unit_group(L)
    e = 1
    for o in orders:
        e = e * o // gcd(e, o)
    return e


class DirichletCharacter:
    """A Dirichlet character mod L, given by exponents on the generators of
    (Z/L)^x: chi(g_i) = zeta_{o_i}^{e_i}.  Values are computed in any CharRing
    containing the required roots of unity."""

    def __init__(self, modulus: int, exps):
        self.modulus = modulus
        gens, orders, _ = unit_group(modulus)
        exps = tuple(int(e) % o for e, o in zip(exps, orders))
        if len(exps) != len(orders):
            raise DomainError("exponent vector has the wrong length")
        self.exps = exps
        self.orders = orders

    def __eq__(self, other):
        return isinstance(other, DirichletCharacter) and (self.modulus, self.exps) == (other.modulus, other.exps)

    def __hash__(self):
        return hash((self.modulus, self.exps))

    def __repr__(self):
        return f"DirichletCharacter({self.modulus}, {self.exps})"

    @property
    def order(self) -> int:
        o = 1
        for e, n in zip(self.exps, self.orders):
            k = n // gcd(n, e) if e else 1
            o = o * k // gcd(o, k)
        return o

    def log_value(self, a: int):
        """chi(a) as a fraction k/order of a full turn, or None off the support."""
        _, _, logs = unit_group(self.modulus)
        e = logs.get(a % self.modulus)
        if e is None:
            return None
        from fractions import Fraction
        return sum((Fraction(x * y, o) for x, y, o in zip(e, self.exps, self.orders)), Fraction(0)) % 1

    def value(self, a: int, R: CharRing) -> np.ndarray:
        t = self.log_value(a)
        if t is None:
            return R.zero()
        if t == 0:
            return R.one()
        den = t.denominator
        return R.pow(R.zeta(den), t.numerator)

    def table(self, R: CharRing, length: int | None = None) -> np.ndarray:
        """Values at 0..length-1 (default one period) as an array (length, dim)."""
        L = self.modulus
        base = np.stack([self.value(a, R) for a in range(L)]) if L > 1 else R.one()[None, :]
        if length is None:
            return base
        reps = -(-length // L)
        return np.tile(base, (reps, 1))[:length]

    def __mul__(self, other: "DirichletCharacter") -> "DirichletCharacter":
        L = self.modulus * other.modulus // gcd(self.modulus, other.modulus)
        return character_from_function(L, lambda a: (self.log_value(a) or 0) + (other.log_value(a) or 0))

    def inverse(self) -> "DirichletCharacter":
        return DirichletCharacter(self.modulus, tuple(-e for e in self.exps))

    def lift(self, L: int) -> "DirichletCharacter":
        """The induced character modulo a multiple L of the modulus."""
        if L % self.modulus:
            raise DomainError("can only lift to a multiple of the modulus")
        return character_from_function(L, lambda a: self.log_value(a))

    def is_even(self) -> bool:
        return self.log_value(-1) == 0

    def conductor(self) -> int:
        L = self.modulus
        for d in sorted(sympy.divisors(L)):
            if all(self.log_value(a) == 0 for a in range(1, L) if gcd(a, L) == 1 and a % d == 1 % d):
                return d
        return L

    def is_primitive(self) -> bool:
        return self.conductor() == self.modulus

    def primitive(self) -> "DirichletCharacter":
        f = self.conductor()
        return character_from_function(f, lambda a: self._value_on_class(a, f))

    def _value_on_class(self, a: int, f: int):
        L = self.modulus
        for b in range(a % f if f > 1 else 0, L, f):
            if gcd(b, L) == 1:
                return self.log_value(b)
        return None

    def is_trivial(self) -> bool:
        return all(e == 0 for e in self.exps)


def character_from_function(L: int, fn) -> DirichletCharacter:
    """Build a character mod L from a function giving its value on units as a
    fraction of a full turn."""
    gens, orders, _ = unit_group(L)
    exps = []
    for g, o in zip(gens, orders):
        t = fn(g)
        if t is None:
            raise DomainError("function vanishes on a unit")
        k = t * o
        if k.denominator != 1:
            raise DomainError("values are not roots of unity of the right order")
        exps.append(int(k) % o)
    return DirichletCharacter(L, exps)


def trivial_character(L: int = 1) -> DirichletCharacter:
    return DirichletCharacter(L, tuple(0 for _ in unit_group(L)[1]))


def all_characters(L: int) -> list[DirichletCharacter]:
    _, orders, _ = unit_group(L)
    import itertools
    return [DirichletCharacter(L, e) for e in itertools.product(*[range(o) for o in orders])]


def omega_power(p: int, k: int, L: int | None = None) -> DirichletCharacter:
    """omega^k as a character mod p (or lifted to mod L)."""
    g = int(sympy.primitive_root(p))
    from fractions import Fraction
    base = character_from_function(p, lambda a: Fraction(k * _dlog(a, g, p), p - 1) % 1)
    return base if L is None or L == p else base.lift(L)


def _dlog(a: int, g: int, p: int) -> int:
    x = 1
    for k in range(p - 1):
        if x == a % p:
            return k
        x = x * g % p
    raise DomainError("not a unit")


def omega_exponent(chi: DirichletCharacter, p: int) -> int:
    """k with chi = omega^k, for chi of modulus p."""
    for k in range(p - 1):
        if omega_power(p, k).lift(chi.modulus) == chi if chi.modulus != p else omega_power(p, k) == chi:
            return k
    raise DomainError("not a power of omega")


def galois_orbit(chi: DirichletCharacter, p: int) -> list[DirichletCharacter]:
    """Orbit of chi under chi -> chi^p (the Frobenius action on values)."""
    orbit = [chi]
    cur = DirichletCharacter(chi.modulus, tuple(e * p for e in chi.exps))
    while cur != chi:
        orbit.append(cur)
        cur = DirichletCharacter(cur.modulus, tuple(e * p for e in cur.exps))
    return orbit


def orbit_representative(chi: DirichletCharacter, p: int) -> DirichletCharacter:
    return min(galois_orbit(chi, p), key=lambda c: c.exps)


def ring_for(p: int, m: int, *moduli: int) -> CharRing:
    n = 1
    for L in moduli:
        e = group_exponent(L)
        n = n * e // gcd(n, e)
    return char_ring(p, m, n)


# ---------------------------------------------------------------------------
# arithmetic characters


class ArithmeticCharacter:
    """psi * kappa^t: a finite Dirichlet character times a power of kappa."""

    def __init__(self, finite_part: DirichletCharacter, t: int = 0):
        self.finite_part = finite_part
        self.t = t

    def __repr__(self):
        return f"ArithmeticCharacter({self.finite_part!r}, t={self.t})"

    def __mul__(self, other: "ArithmeticCharacter") -> "ArithmeticCharacter":
        return ArithmeticCharacter(self.finite_part * other.finite_part, self.t + other.t)

    def inverse(self) -> "ArithmeticCharacter":
        return ArithmeticCharacter(self.finite_part.inverse(), -self.t)

    def value(self, a: int, R: CharRing) -> np.ndarray:
        return eval_arith_char(self, a, R)

    def is_finite(self) -> bool:
        return self.t == 0


def eval_arith_char(chi: ArithmeticCharacter, a: int, R: CharRing) -> np.ndarray:
    """chi(a) = psi(a) kappa(a)^t, with chi(0) = 0."""
    if a == 0:
        return R.zero()
    fv = chi.finite_part.value(a, R)
    if chi.t == 0 or not fv.any():
        return fv
    k = kappa(a, R.p, R.m)
    if k % R.p == 0:
        if chi.t < 0:
            raise DomainError("negative power of kappa at a non-unit")
        if k == 0:
            return R.zero()
    kt = pow(k, chi.t, R.q) if chi.t >= 0 else pow(pow(k, -1, R.q), -chi.t, R.q)
    return (fv * kt) % R.q


# ---------------------------------------------------------------------------
# Bernoulli numbers


def bernoulli1(theta: DirichletCharacter, p: int, m: int, R: CharRing | None = None):
    """B_{1,theta} = (1/f) sum_{a=1}^{f} theta(a) a, in R (precision m), together
    with its p-adic valuation.  When p | f the numerator is computed at raised
    precision and divided."""
    f = theta.modulus
    v = vp(f, p)
    if R is None:
        R = ring_for(p, m, f)
    Rhi = R.at_precision(m + v + 1)
    num = Rhi.zero()
    for a in range(1, f + 1):
        val = theta.value(a, Rhi)
        if val.any():
            num = (num + a * val) % Rhi.q
    if v:
        if np.any(num % p**v):
            # the true value has negative valuation (only for theta = omega^{-1}-type)
            val = Rhi.valuation(num) - v
            return None, val
        num = num // p**v
    fu = f // p**v
    out = (num * pow(fu, -1, R.q)) % R.q
    return out, (R.valuation(out) if not R.s else None)


def bernoulli1_valuation(theta: DirichletCharacter, p: int, m: int = 4) -> int:
    _, val = bernoulli1(theta, p, m)
    return val


# ---------------------------------------------------------------------------
# group rings


class GroupRingElem:
    """Element of R[(Z/L)^x] (star=False) or of the star ring R[(Z/L)^*]
    (star=True: all residues, with [0] identified with zero).

    coeffs: array of shape (L, R.dim), indexed by residue.
    """

    def __init__(self, L: int, R: CharRing, coeffs: np.ndarray | None = None, star: bool = False):
        self.L, self.R, self.star = L, R, star
        self.coeffs = np.zeros((L, R.dim), dtype=np.int64) if coeffs is None else np.asarray(coeffs, dtype=np.int64) % R.q
        self._normalize()

    def _normalize(self):
        if self.star:
            self.coeffs[0] = 0
        else:
            for a in range(self.L):
                if gcd(a, self.L) != 1:
                    self.coeffs[a] = 0

    @classmethod
    def basis(cls, L, R, j, star=False):
        x = cls(L, R, star=star)
        x.coeffs[j % L] = R.one()
        x._normalize()
        return x

    def __add__(self, other):
        return GroupRingElem(self.L, self.R, self.coeffs + other.coeffs, self.star)

    def __sub__(self, other):
        return GroupRingElem(self.L, self.R, self.coeffs - other.coeffs, self.star)

    def __neg__(self):
        return GroupRingElem(self.L, self.R, -self.coeffs, self.star)

    def scale(self, c: np.ndarray) -> "GroupRingElem":
        return GroupRingElem(self.L, self.R, np.stack([self.R.mul(c, x) for x in self.coeffs]), self.star)

    def __eq__(self, other):
        return self.L == other.L and np.array_equal(self.coeffs % self.R.q, other.coeffs % self.R.q)

    def is_zero(self) -> bool:
        return not np.any(self.coeffs % self.R.q)

    def __mul__(self, other: "GroupRingElem") -> "GroupRingElem":
        """Product; other may be a star element, self must be a group element."""
        if self.star:
            raise DomainError("the star ring is a module, not a ring")
        out = np.zeros_like(other.coeffs)
        for a in np.nonzero(self.coeffs.any(axis=1))[0]:
            for b in np.nonzero(other.coeffs.any(axis=1))[0]:
                c = (int(a) * int(b)) % self.L
                out[c] = (out[c] + self.R.mul(self.coeffs[a], other.coeffs[b])) % self.R.q
        return GroupRingElem(self.L, self.R, out, other.star)

    def pushforward(self, L2: int) -> "GroupRingElem":
        if self.L % L2:
            raise DomainError("pushforward needs a divisor of the level")
        out = np.zeros((L2, self.R.dim), dtype=np.int64)
        for a in range(self.L):
            out[a % L2] += self.coeffs[a]
        return GroupRingElem(L2, self.R, out, self.star)

    def specialize(self, chi, R: CharRing | None = None) -> np.ndarray:
        return specialize_star(self, chi)

    def support(self) -> list[int]:
        return [int(a) for a in np.nonzero(self.coeffs.any(axis=1))[0]]


def character_values(chi, L: int, R: CharRing) -> np.ndarray:
    """Table of chi(j) for j = 0..L-1 (arithmetic or Dirichlet)."""
    if isinstance(chi, DirichletCharacter):
        chi = ArithmeticCharacter(chi, 0)
    return np.stack([eval_arith_char(chi, j, R) for j in range(L)])


def specialize_star(x: GroupRingElem, chi) -> np.ndarray:
    """Linear extension of [j] -> chi(j)."""
    R = x.R
    vals = character_values(chi, x.L, R)
    out = R.zero()
    for j in x.support():
        out = (out + R.mul(x.coeffs[j], vals[j])) % R.q
    return out


def epsilon_idempotent(chi: DirichletCharacter, L: int, R: CharRing) -> GroupRingElem:
    """eps_chi = (1/phi(L)) sum_i chi(i)^{-1} [i] in R[(Z/L)^x]."""
    units = [a for a in range(L) if gcd(a, L) == 1]
    n = len(units)
    if n % R.p == 0:
        raise DomainError("group order is divisible by p")
    inv_n = pow(n, -1, R.q)
    coeffs = np.zeros((L, R.dim), dtype=np.int64)
    for a in units:
        coeffs[a] = (chi.value(pow(a, -1, L), R) * inv_n) % R.q
    return GroupRingElem(L, R, coeffs)


def orbit_idempotent(chi: DirichletCharacter, L: int, p: int, m: int) -> np.ndarray:
    """Z/p^m-valued idempotent of Z/p^m[(Z/L)^x] attached to the Galois orbit of
    chi: the sum of eps over the orbit, as a table indexed by residue."""
    R = ring_for(p, m, L, chi.modulus)
    total = np.zeros((L, R.dim), dtype=np.int64)
    for c in galois_orbit(chi.lift(L) if chi.modulus != L else chi, p):
        total = (total + epsilon_idempotent(c, L, R).coeffs) % R.q
    if np.any(total[:, 1:] % R.q):
        raise ArithmeticError("orbit idempotent is not rational")
    return total[:, 0] % R.q


def separating_functionals(L: int, R: CharRing):
    """Functionals on the star ring at level L built from characters: for each
    proper divisor g of L and character chi mod L/g, j -> chi(j/g) when
    gcd(j, L) = g.  Yields (g, chi, table)."""
    for g in sorted(sympy.divisors(L)):
        if g == L:
            continue
        for chi in all_characters(L // g):
            tab = np.zeros((L, R.dim), dtype=np.int64)
            for j in range(1, L):
                if gcd(j, L) == g:
                    tab[j] = chi.value(j // g, R)
            yield g, chi, tab


__all__ = [
    "ArithmeticCharacter", "CharRing", "DirichletCharacter", "DomainError", "GroupRingElem",
    "PadicScalar", "PrecisionError", "all_characters", "bernoulli1", "bernoulli1_valuation",
    "char_ring", "character_values", "epsilon_idempotent", "eval_arith_char", "galois_orbit",
    "kappa", "omega_power", "orbit_idempotent", "ring_for", "separating_functionals",
    "specialize_star", "teichmuller", "trivial_character", "unit_group",
]
