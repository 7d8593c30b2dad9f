"""Relative homology of X_1(M) presented by Manin symbols.

Convention: the symbol [u:v] is the path {b/(dM), a/(cM)} with ad - bc = 1,
a = u and b = v mod M.  Under w(z) = -1/(Mz) it goes to the classical path
g{0, oo} for g in SL_2(Z) with bottom row (u, v).  In particular
[1:0] = {0, oo} and the boundary of [1:0] is (oo) - (0).

Operators act on paths on the left by fractional linear transformations:
<j> by any matrix of Gamma_0(M) with lower-right entry j, U_t by
sum_k (1 k; 0 t), T_l by sum_k (1 k; 0 l) + <l>(l 0; 0 1), the star involution
by z -> -conj(z) and w_M by z -> -1/(Mz).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd

import numpy as np
import sympy

from . import linalg as la
from .padic import DomainError, check_prime

INF = None  # the cusp at infinity


def xgcd(a: int, b: int):
    """(g, x, y) with x*a + y*b = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        t = a // b
        a, b = b, a - t * b
        x0, x1 = x1, x0 - t * x1
        y0, y1 = y1, y0 - t * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def lift_to_sl2(u: int, v: int, M: int):
    """Integers (a, b, c, d) with ad - bc = 1, a = u and b = v mod M."""
    u, v = u % M, v % M
    if gcd(gcd(u, v), M) != 1:
        raise DomainError(f"({u}, {v}) does not generate Z/{M}")
    a = u if u else M
    b = v
    while gcd(a, b) != 1:
        b += M
    g, x, y = xgcd(a, b)
    # x a + y b = 1  ->  d = x, c = -y
    return a, b, -y, x


def sl2_with_bottom_row(c: int, d: int):
    """A matrix (a b; c d) in SL_2(Z) for coprime integers c, d."""
    g, x, y = xgcd(c, d)
    if g != 1:
        raise DomainError("bottom row entries must be coprime")
    # x c + y d = 1 -> a d - b c = 1 with a = y, b = -x
    return y, -x, c, d


def act(g, z):
    """Fractional linear action on P^1(Q); None stands for infinity."""
    a, b, c, d = g
    if z is INF:
        return INF if c == 0 else Fraction(a, c)
    num = a * z.numerator + b * z.denominator
    den = c * z.numerator + d * z.denominator
    return INF if den == 0 else Fraction(num, den)


def classical_path_expansion(x):
    """Decompose {oo, x} as a signed sum of classical paths g{0, oo}; returns
    the bottom rows (c, d) of the g's (continued fraction convergents)."""
    if x is INF:
        return []
    rows = []
    # p_{-2}/q_{-2} = 0/1, p_{-1}/q_{-1} = 1/0
    pm1, qm1 = 1, 0
    pm2, qm2 = 0, 1
    num, den = x.numerator, x.denominator
    k = 0
    while True:
        a = num // den
        pk, qk = a * pm1 + pm2, a * qm1 + qm2
        sgn = 1 if (k - 1) % 2 == 0 else -1
        rows.append((qk, sgn * qm1))
        pm2, qm2, pm1, qm1 = pm1, qm1, pk, qk
        num, den = den, num - a * den
        k += 1
        if den == 0:
            break
    return rows


def cusp_key(x, M: int):
    """Canonical label of the Gamma_1(M)-class of the cusp x: the pair
    (c mod M, a mod gcd(c, M)) up to a common sign, where x = a/c reduced."""
    if x is INF:
        a, c = 1, 0
    else:
        a, c = x.numerator, x.denominator
    best = None
    for s in (1, -1):
        cc = (s * c) % M
        g = gcd(cc, M)
        key = (cc, (s * a) % g if g else 0)
        if best is None or key < best:
            best = key
    return best


def count_pairs(M: int) -> int:
    n = M * M
    for ell in sympy.factorint(M):
        n = n * (ell * ell - 1) // (ell * ell)
    return n


def genus_x1(M: int) -> int:
    """Genus of X_1(M) for M >= 5, from the standard index/cusp formula."""
    mu = Fraction(M * M, 2)
    for ell in sympy.factorint(M):
        mu *= 1 - Fraction(1, ell * ell)
    return int(1 + mu / 12 - Fraction(count_cusps(M), 2))


def count_cusps(M: int) -> int:
    """Number of cusps of X_1(M), M >= 5."""
    tot = 0
    for d in sympy.divisors(M):
        tot += sympy.totient(d) * sympy.totient(M // d)
    return int(tot // 2)


def p1_size(M: int) -> int:
    n = M
    for ell in sympy.factorint(M):
        n = n * (ell + 1) // ell
    return n


def _sparse_eliminate(rows, ncols, p, q):
    """Reduce sparse relation rows (dicts col -> coeff mod q) with unit pivots.
    Returns (solved, free): solved maps a pivot column to a dict expressing it
    in free columns."""
    solved: dict[int, dict[int, int]] = {}
    uses: dict[int, set[int]] = {}

    def reduce(row):
        out: dict[int, int] = {}
        for c, v in row.items():
            if c in solved:
                for c2, v2 in solved[c].items():
                    out[c2] = (out.get(c2, 0) + v * v2) % q
            else:
                out[c] = (out.get(c, 0) + v) % q
        return {c: v for c, v in out.items() if v}

    pending = list(rows)
    while True:
        deferred = []
        progress = False
        for row in pending:
            row = reduce(row)
            if not row:
                continue
            units = [c for c, v in row.items() if v % p]
            if not units:
                deferred.append(row)
                continue
            piv = max(units)
            inv = pow(row[piv], -1, q)
            expr = {c: (-v * inv) % q for c, v in row.items() if c != piv}
            # substitute into existing expressions that mention piv
            for c in list(uses.get(piv, ())):
                e = solved[c]
                coef = e.pop(piv, 0)
                if coef:
                    for c2, v2 in expr.items():
                        nv = (e.get(c2, 0) + coef * v2) % q
                        if nv:
                            e[c2] = nv
                            uses.setdefault(c2, set()).add(c)
                        else:
                            e.pop(c2, None)
            uses.pop(piv, None)
            solved[piv] = expr
            for c2 in expr:
                uses.setdefault(c2, set()).add(piv)
            progress = True
        if not deferred:
            break
        if not progress:
            raise la.PrecisionError("relations are not saturated: torsion in the presentation")
        pending = deferred
    free = [c for c in range(ncols) if c not in solved]
    return solved, free


class SymbolSpace:
    """H_1(X_1(M), cusps; Z/p^K) with M = N p^r, presented by Manin symbols."""

    def __init__(self, N: int, p: int, r: int, K: int, validate: bool = True):
        check_prime(p)
        if N % p == 0:
            raise DomainError("N must be prime to p")
        if validate and int(sympy.totient(N)) % p == 0:
            raise DomainError("p must not divide phi(N)")
        if r < 0:
            raise DomainError("r must be nonnegative")
        self.N, self.p, self.r, self.K = N, p, r, K
        self.M = M = N * p**r
        if M < 5:
            raise DomainError("level must be at least 5")
        self.q = la.check_modulus(p, K)
        self.pairs = [(u, v) for u in range(M) for v in range(M) if gcd(gcd(u, v), M) == 1]
        self.index = {uv: i for i, uv in enumerate(self.pairs)}
        self._build_presentation()
        self._build_boundary()
        self._ops: dict = {}

    # ------------------------------------------------------------------
    # presentation
    def _build_presentation(self):
        M, q, p = self.M, self.q, self.p
        npairs = len(self.pairs)
        # two-term relations: orbits under S: (u,v) -> (-v,u), with signs
        cls = [-1] * npairs
        sign = [0] * npairs
        reps = []
        zero = set()
        for i, (u, v) in enumerate(self.pairs):
            if cls[i] >= 0:
                continue
            c = len(reps)
            reps.append(i)
            orbit = [((u, v), 1), ((-v % M, u), -1), ((-u % M, -v % M), 1), ((v, -u % M), -1)]
            for uv, s in orbit:
                j = self.index[uv]
                if cls[j] >= 0 and cls[j] == c and sign[j] != s:
                    zero.add(c)
                cls[j], sign[j] = c, s
        ncls = len(reps)
        rows = [{c: 1} for c in sorted(zero)]
        seen = set()
        for i, (u, v) in enumerate(self.pairs):
            # [u:v] - [u:u+v] - [u+v:v] = 0
            row: dict[int, int] = {}
            for uv, s in (((u, v), 1), ((u, (u + v) % M), -1), (((u + v) % M, v), -1)):
                j = self.index[uv]
                c = cls[j]
                row[c] = (row.get(c, 0) + s * sign[j]) % q
            row = {c: x for c, x in row.items() if x}
            key = tuple(sorted(row.items()))
            if row and key not in seen:
                seen.add(key)
                rows.append(row)
        solved, free = _sparse_eliminate(rows, ncls, p, q)
        self.rank = len(free)
        pos = {c: k for k, c in enumerate(free)}
        cls_coords = np.zeros((ncls, self.rank), dtype=np.int64)
        for c in range(ncls):
            if c in solved:
                for c2, x in solved[c].items():
                    cls_coords[c, pos[c2]] = x
            else:
                cls_coords[c, pos[c]] = 1
        E = np.zeros((self.rank, npairs), dtype=np.int64)
        for i in range(npairs):
            E[:, i] = (sign[i] * cls_coords[cls[i]]) % q
        self.E = E
        self.basis_pairs = [self.pairs[reps[c]] for c in free]

    def symbol(self, u: int, v: int) -> np.ndarray:
        """Coordinates of [u:v]."""
        M = self.M
        return self.E[:, self.index[(u % M, v % M)]].copy()

    def symbols_matrix(self, uvs) -> np.ndarray:
        M = self.M
        return self.E[:, [self.index[(u % M, v % M)] for u, v in uvs]]

    # ------------------------------------------------------------------
    # paths
    def path_terms(self, alpha, beta):
        """{alpha, beta} as a list of (sign, (u, v)) Manin symbols."""
        M = self.M
        w = (0, -1, M, 0)
        wa, wb = act(w, alpha), act(w, beta)
        terms = []
        for c, d in classical_path_expansion(wb):
            terms.append((1, (c % M, d % M)))
        for c, d in classical_path_expansion(wa):
            terms.append((-1, (c % M, d % M)))
        return terms

    def path(self, alpha, beta) -> np.ndarray:
        out = np.zeros(self.rank, dtype=np.int64)
        for s, uv in self.path_terms(alpha, beta):
            out += s * self.E[:, self.index[uv]]
        return out % self.q

    def symbol_endpoints(self, u: int, v: int):
        a, b, c, d = lift_to_sl2(u, v, self.M)
        M = self.M
        start = Fraction(b, d * M) if d else INF
        end = Fraction(a, c * M) if c else INF
        return start, end

    def _matrix_from_path_map(self, fn) -> np.ndarray:
        """Matrix of the operator sending each basis symbol's path {s, e} to
        sum of paths fn(s, e)."""
        cols = []
        for (u, v) in self.basis_pairs:
            s, e = self.symbol_endpoints(u, v)
            col = np.zeros(self.rank, dtype=np.int64)
            for sign, (a, b) in fn(s, e):
                col = (col + sign * self.path(a, b)) % self.q
            cols.append(col)
        return np.stack(cols, axis=1) if cols else np.zeros((0, 0), dtype=np.int64)

    # ------------------------------------------------------------------
    # boundary
    def _build_boundary(self):
        M = self.M
        keys = {}
        cols = []
        for (u, v) in self.basis_pairs:
            s, e = self.symbol_endpoints(u, v)
            ks, ke = cusp_key(s, M), cusp_key(e, M)
            for k in (ks, ke):
                if k not in keys:
                    keys[k] = None
            cols.append((ks, ke))
        # every cusp is an endpoint of some Manin symbol
        self.cusps = sorted(keys)
        self.cusp_index = {k: i for i, k in enumerate(self.cusps)}
        D = np.zeros((len(self.cusps), self.rank), dtype=np.int64)
        for j, (ks, ke) in enumerate(cols):
            D[self.cusp_index[ke], j] += 1
            D[self.cusp_index[ks], j] -= 1
        self.delta = D % self.q

    def boundary(self, x: np.ndarray) -> np.ndarray:
        if x.ndim == 1:
            return la.matmul(self.delta, x[:, None], self.q)[:, 0]
        return la.matmul(self.delta, x, self.q)

    def cusp_vector(self, x) -> np.ndarray:
        out = np.zeros(len(self.cusps), dtype=np.int64)
        out[self.cusp_index[cusp_key(x, self.M)]] = 1
        return out

    def cusp_of_pair(self, a: int, c: int) -> int:
        """Index of the cusp class of a/c, for integers with (a, c, M) = 1
        (extended by cusp equivalence as needed)."""
        M = self.M
        a0, c0 = a % M, c % M
        # find coprime integer representatives congruent mod M
        if c0 == 0:
            c1 = M
        else:
            c1 = c0
        a1 = a0 if a0 else M
        while gcd(a1, c1) != 1:
            a1 += M
        return self.cusp_index[cusp_key(Fraction(a1, c1), M)]

    @property
    def cuspidal(self) -> np.ndarray:
        """Basis (columns) of the cuspidal subspace ker(delta)."""
        if "cuspidal" not in self._ops:
            self._ops["cuspidal"] = la.kernel(self.delta, self.p, self.K)
        return self._ops["cuspidal"]

    # ------------------------------------------------------------------
    # operators
    def diamond(self, j: int) -> np.ndarray:
        """<j>: [u:v] -> [j^-1 u : j^-1 v]."""
        M = self.M
        j %= M
        if gcd(j, M) != 1:
            raise DomainError(f"{j} is not a unit mod {M}")
        key = ("diamond", j)
        if key not in self._ops:
            ji = pow(j, -1, M)
            self._ops[key] = self.symbols_matrix([(ji * u, ji * v) for u, v in self.basis_pairs])
        return self._ops[key]

    def star(self) -> np.ndarray:
        """The involution z -> -conj(z): [u:v] -> [u:-v]."""
        if "star" not in self._ops:
            self._ops["star"] = self.symbols_matrix([(u, -v) for u, v in self.basis_pairs])
        return self._ops["star"]

    def atkin_lehner(self) -> np.ndarray:
        """w_M: z -> -1/(Mz)."""
        if "w" not in self._ops:
            w = (0, -1, self.M, 0)
            self._ops["w"] = self._matrix_from_path_map(lambda s, e: [(1, (act(w, s), act(w, e)))])
        return self._ops["w"]

    def _gamma0_with_diagonal(self, j: int):
        """A matrix of SL_2(Z) congruent to diag(j^-1, j) mod M."""
        M = self.M
        jm = j % M
        d = jm
        c = M
        while gcd(c, d) != 1:
            d += M
        a, b, c, d = sl2_with_bottom_row(c, d)
        return a, b, c, d

    def hecke_matrices(self, l: int):
        """The integer matrices whose sum defines T_l (l prime to M) or U_l."""
        M = self.M
        if not sympy.isprime(l):
            raise DomainError("Hecke operators are indexed by primes")
        mats = [(1, k, 0, l) for k in range(l)]
        if M % l:
            a, b, c, d = self._gamma0_with_diagonal(l)
            mats.append((a * l, b, c * l, d))
        return mats

    def hecke(self, l: int) -> np.ndarray:
        """T_l for l prime to M, U_l for l | M."""
        key = ("hecke", l)
        if key not in self._ops:
            mats = self.hecke_matrices(l)
            self._ops[key] = self._matrix_from_path_map(
                lambda s, e: [(1, (act(g, s), act(g, e))) for g in mats])
        return self._ops[key]

    def T(self, l: int) -> np.ndarray:
        if self.M % l == 0:
            raise DomainError(f"T_{l} is not defined at level {self.M}; use U_{l}")
        return self.hecke(l)

    def U(self, l: int) -> np.ndarray:
        if self.M % l:
            raise DomainError(f"U_{l} needs {l} | {self.M}; use T_{l}")
        return self.hecke(l)

    def U_t(self, t: int) -> np.ndarray:
        """U_t = prod U_l^{v_l(t)} for t | M (t supported on primes of M)."""
        out = np.eye(self.rank, dtype=np.int64)
        for ell, e in sympy.factorint(t).items():
            for _ in range(e):
                out = la.matmul(self.U(ell), out, self.q)
        return out

    def operator(self, name) -> np.ndarray:
        """Lookup by name: ('T', l), ('U', l), ('diamond', j), 'star', 'w'."""
        if name == "star":
            return self.star()
        if name == "w":
            return self.atkin_lehner()
        kind, arg = name
        return {"T": self.T, "U": self.U, "diamond": self.diamond, "Ut": self.U_t}[kind](arg)

    def plus_projector(self) -> np.ndarray:
        inv2 = pow(2, -1, self.q)
        return ((np.eye(self.rank, dtype=np.int64) + self.star()) * inv2) % self.q

    def minus_projector(self) -> np.ndarray:
        inv2 = pow(2, -1, self.q)
        return ((np.eye(self.rank, dtype=np.int64) - self.star()) * inv2) % self.q

    def sign_subspace(self, sign: int) -> np.ndarray:
        P = self.plus_projector() if sign > 0 else self.minus_projector()
        return la.image(P, self.p, self.K)

    # ------------------------------------------------------------------
    # cusp module actions
    def cusp_diamond(self, j: int) -> np.ndarray:
        """Permutation of cusp classes induced by <j>."""
        M = self.M
        g = self._gamma0_with_diagonal(j)
        P = np.zeros((len(self.cusps), len(self.cusps)), dtype=np.int64)
        for i, (cc, aa) in enumerate(self.cusps):
            x = self._cusp_rep(cc, aa)
            P[self.cusp_index[cusp_key(act(g, x), M)], i] = 1
        return P

    def _cusp_rep(self, cc: int, aa: int):
        M = self.M
        if cc == 0:
            c = M
        else:
            c = cc
        g = gcd(c, M)
        a = aa if aa else g
        while gcd(a, c) != 1:
            a += g
        return Fraction(a, c)

    def cusp_hecke(self, l: int) -> np.ndarray:
        """Action of T_l / U_l on cusp divisors (degree-zero part is what
        matters), from the same matrices as on paths."""
        M = self.M
        mats = self.hecke_matrices(l)
        n = len(self.cusps)
        P = np.zeros((n, n), dtype=np.int64)
        for i, (cc, aa) in enumerate(self.cusps):
            x = self._cusp_rep(cc, aa)
            for g in mats:
                P[self.cusp_index[cusp_key(act(g, x), M)], i] += 1
        return P % self.q

    def pushforward_matrix(self, lower: "SymbolSpace") -> np.ndarray:
        """Natural map H_1(X_1(M), C) -> H_1(X_1(M'), C) for M' | M."""
        if self.M % lower.M:
            raise DomainError("pushforward needs a divisor of the level")
        if lower.K != self.K or lower.p != self.p:
            raise DomainError("spaces must share p and precision")
        cols = []
        for (u, v) in self.basis_pairs:
            s, e = self.symbol_endpoints(u, v)
            cols.append(lower.path(s, e))
        return np.stack(cols, axis=1)

    def describe(self) -> dict:
        return {
            "N": self.N, "p": self.p, "r": self.r, "M": self.M, "K": self.K,
            "p1_size": p1_size(self.M), "pairs": len(self.pairs), "rank": self.rank,
            "cusps": len(self.cusps), "cuspidal_rank": int(self.cuspidal.shape[1]),
            "genus": genus_x1(self.M),
        }


@lru_cache(maxsize=32)
def build_symbol_space(N: int, p: int, r: int, K: int, validate: bool = True) -> SymbolSpace:
    """Cached construction.  validate=False admits levels with p | phi(N),
    which are fine for the homology itself but not for the Eisenstein theory."""
    return SymbolSpace(N, p, r, K, validate)


def path_to_symbols(space: SymbolSpace, alpha, beta) -> np.ndarray:
    return space.path(alpha, beta)
