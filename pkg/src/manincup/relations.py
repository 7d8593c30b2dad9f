"""The universal module of symbols c(u, v) and the map varpi.

c(u, v) stands for the cup product of 1 - zeta^u and 1 - zeta^v at level
L = N p^r.  The relations imposed are the ones every such pairing
satisfies:

  * c(u, v) = c(u, -v) = c(-u, -v)            (torsion pairs to zero)
  * c(u, v) + c(v, u) = 0                      (antisymmetry)
  * c(u, v) = c(u, u + v) + c(u + v, v)        (Steinberg, u + v != 0)
  * bilinearity against the distribution relations among the 1 - zeta^a.

Galois acts by sigma_j c(u, v) = c(ju, jv).  Because of the first two
relations a generator is determined up to sign by an unordered pair of
classes {+-a}, {+-b} with a != +-b, and that is how the module is indexed.

varpi sends [u:v]^+ to c(u, v) (and to 0 if u or v vanishes).

Points are taken at level 2L by default.  The Steinberg relation for
1 - zeta^u and 1 - zeta^v involves 1 - zeta^u = -zeta^u (1 - zeta^-u), and
over Z/p^m the factor -zeta^u is only harmless once 1 + zeta^w is available
as the symbol of the point (2w + L)/2L.  The point 1/2 itself (the number 2)
is excluded.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd

import numpy as np
import sympy

from . import linalg as la
from .hecke import EisensteinQuotient, odd_primitive_characters, _prime_to_p_section
from .manin import SymbolSpace
from .padic import DomainError, all_characters, omega_power, ring_for
from .units import dist_module


def _pm(a: int, L: int) -> int:
    a %= L
    return min(a, L - a)


class PairingSymbolModule:
    """Symbols c(u, v) at level L = N p^r over Z/p^m."""

    def __init__(self, N: int, p: int, r: int, m: int, with_sign_twist: bool = True):
        self.N, self.p, self.r, self.m = N, p, r, m
        self.L = L = N * p**r
        self.q = p**m
        # points live at level P; with the sign twist P = 2L, so that the
        # numbers 1 + zeta^w = 1 - zeta_{2L}^{2w + L} are symbols too
        self.with_sign_twist = with_sign_twist
        self.P = P = 2 * L if with_sign_twist else L
        self.scale = P // L
        self.half = L if with_sign_twist else None  # 1 - (-1) = 2 is not an S-unit
        reps = sorted({_pm(a, P) for a in range(1, P)} - {self.half})
        self.reps = reps
        self.classes: dict = {}
        for i, a in enumerate(reps):
            for b in reps[i + 1:]:
                self.classes[(a, b)] = len(self.classes)
        self.dim = len(self.classes)
        rows = self._relation_rows()
        G = np.zeros((self.dim, len(rows)), dtype=np.int64)
        for k, row in enumerate(rows):
            for c, x in row.items():
                G[c, k] = x % self.q
        self.relations = G
        self._quot = la.Quotient(G, p, m)

    def gen(self, a: int, b: int) -> dict:
        """The symbol of the points a/P, b/P as {class: sign}; empty if it
        vanishes identically."""
        a, b = _pm(a, self.P), _pm(b, self.P)
        if a == 0 or b == 0 or a == b:
            return {}
        if self.half in (a, b):
            raise DomainError("2 is not an S-unit")
        if a < b:
            return {self.classes[(a, b)]: 1}
        return {self.classes[(b, a)]: -1}

    def vec(self, u: int, v: int) -> np.ndarray:
        """c(u, v) for u, v modulo L."""
        x = np.zeros(self.dim, dtype=np.int64)
        for c, s in self.gen(self.scale * u, self.scale * v).items():
            x[c] = s % self.q
        return x

    def _relation_rows(self) -> list[dict]:
        P, half = self.P, self.half
        rows: list[dict] = []

        def add(terms):
            row: dict = {}
            for s, a, b in terms:
                for c, t in self.gen(a, b).items():
                    row[c] = row.get(c, 0) + s * t
            row = {c: x for c, x in row.items() if x % self.q}
            if row:
                rows.append(row)

        for a in range(1, P):
            for b in range(1, P):
                if (a + b) % P and half not in (_pm(a, P), _pm(b, P), _pm(a + b, P)):
                    add([(1, a, b), (-1, a, a + b), (-1, a + b, b)])
        # distribution relations among the 1 - zeta_P^a, in the first slot
        dm = dist_module(P, self.p, 1)
        D = dm.relations
        for k in range(D.shape[1]):
            col = D[:, k]
            terms = [(int(c) if c < dm.q // 2 else int(c) - dm.q, a) for a, c in enumerate(col) if c]
            terms = [(s, a) for s, a in terms if _pm(a, P) != half]
            if not terms:
                continue
            if len(terms) == 2 and terms[0][0] == -terms[1][0] and (terms[0][1] + terms[1][1]) % P == 0:
                continue  # sign relation, built in
            for b in self.reps:
                add([(s, a, b) for s, a in terms])
        return rows

    def reduce(self, x: np.ndarray) -> np.ndarray:
        return self._quot.reduce(x % self.q)

    def is_zero(self, x: np.ndarray) -> bool:
        return self._quot.is_zero(x % self.q)

    @property
    def invariants(self) -> list[int]:
        return self._quot.invariants

    def sigma(self, j: int) -> np.ndarray:
        """Matrix of sigma_j: c(u, v) -> c(ju, jv)."""
        S = np.zeros((self.dim, self.dim), dtype=np.int64)
        j = j % self.L
        if self.with_sign_twist and j % 2 == 0:
            j += self.L  # the same Galois element, odd so that it acts on mu_2L
        for (a, b), c in self.classes.items():
            for d, s in self.gen(j * a, j * b).items():
                S[d, c] = (S[d, c] + s) % self.q
        return S

    def sector_projector(self) -> np.ndarray:
        """Idempotent onto the sum of the omega theta^{-1} components, theta odd
        primitive of conductor Np, for the prime-to-p part of the Galois group."""
        N, p = self.N, self.p
        Np = N * p
        R = ring_for(p, self.m, Np)
        n = int(sympy.totient(Np))
        w = omega_power(p, 1, Np)
        chars = {(w * th.inverse()) for th in odd_primitive_characters(N, p)}
        section = _tame_section(N, p, self.r)
        coeff: dict = {}
        for chi in chars:
            for a in section:
                v = chi.value(pow(a, -1, Np), R)
                coeff[a] = (coeff.get(a, R.zero()) + v) % R.q
        P = np.zeros((self.dim, self.dim), dtype=np.int64)
        inv_n = pow(n, -1, self.q)
        for a, v in coeff.items():
            if np.any(v[1:] % self.q):
                raise ArithmeticError("sector idempotent is not rational")
            c0 = int(v[0]) * inv_n % self.q
            if c0:
                P = (P + c0 * self.sigma(section[a])) % self.q
        return P

    def describe(self) -> dict:
        return {"level": self.L, "p": self.p, "m": self.m, "generators": self.dim,
                "relations": int(self.relations.shape[1]), "invariants": self.invariants}


def _tame_section(N: int, p: int, r: int) -> dict:
    class _S:
        pass
    s = _S()
    s.M, s.p, s.N, s.r = N * p**r, p, N, r
    return _prime_to_p_section(s)


@lru_cache(maxsize=None)
def pairing_module(N: int, p: int, r: int, m: int) -> PairingSymbolModule:
    return PairingSymbolModule(N, p, r, m)


def build_pairing_module(N: int, p: int, r: int, m: int) -> PairingSymbolModule:
    return pairing_module(N, p, r, m)


# ---------------------------------------------------------------------------
# varpi


def varpi_matrix(space: SymbolSpace, module: PairingSymbolModule) -> np.ndarray:
    """Columns: varpi of the basis symbols of relative homology."""
    if space.M != module.L:
        raise DomainError("levels differ")
    V = np.zeros((module.dim, space.rank), dtype=np.int64)
    for j, (u, v) in enumerate(space.basis_pairs):
        V[:, j] = module.vec(u, v)
    return V


def varpi(space: SymbolSpace, module: PairingSymbolModule, x: np.ndarray) -> np.ndarray:
    """varpi of a relative class (taken through its plus part)."""
    V = varpi_matrix(space, module)
    xp = la.matmul(space.plus_projector(), x[:, None] if x.ndim == 1 else x, space.q) % module.q
    out = la.matmul(V, xp, module.q)
    return out[:, 0] if x.ndim == 1 else out


@dataclass
class RelationCheck:
    name: str
    cases: int = 0
    failures: list = field(default_factory=list)
    info: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {"name": self.name, "cases": self.cases, "failures": [str(f) for f in self.failures],
                "ok": self.ok, **self.info}


def verify_varpi_well_defined(space: SymbolSpace, module: PairingSymbolModule) -> list[RelationCheck]:
    """Every Manin relation (two-term, three-term, sign, plus-sign) maps to
    zero, including the cases where a coordinate vanishes; and varpi computed
    through the basis of relative homology agrees with c(u, v) on every
    symbol."""
    L = module.L
    pairs = space.pairs

    def c(u, v):
        return module.vec(u, v)

    checks = {name: RelationCheck(name) for name in
              ("two_term", "three_term", "sign", "plus_sign", "basis_consistency")}
    for (u, v) in pairs:
        for name, x in (("two_term", c(u, v) + c(-v, u)),
                        ("three_term", c(u, v) - c(u, u + v) - c(u + v, v)),
                        ("sign", c(-u, -v) - c(u, v)),
                        ("plus_sign", c(-u, v) - c(u, v))):
            checks[name].cases += 1
            if not module.is_zero(x):
                checks[name].failures.append((u, v))
    V = varpi_matrix(space, module)
    P = la.matmul(V, space.E % module.q, module.q)
    for i, (u, v) in enumerate(pairs):
        checks["basis_consistency"].cases += 1
        if not module.is_zero(P[:, i] - c(u, v)):
            checks["basis_consistency"].failures.append((u, v))
    return list(checks.values())


def equivariance_defect(space: SymbolSpace, module: PairingSymbolModule, j: int) -> bool:
    """varpi <j> = sigma_j^{-1} varpi on all of relative homology."""
    V = varpi_matrix(space, module)
    q = module.q
    lhs = la.matmul(V, space.diamond(j) % q, q)
    rhs = la.matmul(module.sigma(pow(j, -1, module.L)), V, q)
    return module.is_zero(lhs - rhs)


def plus_cuspidal_basis(space: SymbolSpace) -> np.ndarray:
    """Generators of the plus part of cuspidal homology."""
    P = space.plus_projector()
    return la.image(la.matmul(P, space.cuspidal, space.q), space.p, space.K)


def verify_eisenstein_property(space: SymbolSpace, module: PairingSymbolModule, l: int,
                               inverse: bool = True) -> RelationCheck:
    """varpi(T_l x) = (1 + l sigma_l^{-1}) varpi(x) in the sector part, for x in
    a basis of plus cuspidal homology (l prime to Np)."""
    if (space.N * space.p) % l == 0:
        raise DomainError("T_l needs l prime to Np")
    q = module.q
    B = plus_cuspidal_basis(space) % q
    V = varpi_matrix(space, module)
    E = module.sector_projector()
    sig = module.sigma(pow(l, -1, module.L) if inverse else l)
    lhs = la.matmul(V, la.matmul(space.T(l) % q, B, q), q)
    base = la.matmul(V, B, q)
    rhs = (base + l * la.matmul(sig, base, q)) % q
    D = la.matmul(E, (lhs - rhs) % q, q)
    res = RelationCheck(f"eisenstein_T{l}", cases=B.shape[1])
    for k in range(B.shape[1]):
        if not module.is_zero(D[:, k]):
            res.failures.append(k)
    res.info["nonzero_images"] = int(sum(not module.is_zero(la.matmul(E, base, q)[:, k]) for k in range(B.shape[1])))
    return res


def verify_sigma_stable(module: PairingSymbolModule) -> bool:
    """Applying sigma_j to the relations gives relations."""
    for j in range(2, module.L):
        if gcd(j, module.L) != 1:
            continue
        S = module.sigma(j)
        if np.any(module.reduce(la.matmul(S, module.relations, module.q))):
            return False
    return True


# ---------------------------------------------------------------------------
# conjecture shadows on xi-bar


def conjecture_shadow_check(quotient: EisensteinQuotient) -> list[dict]:
    """Findings for xi(u:v) + xi(v:u) = 0, xi(u:u) = 0 and
    xi(u:v) = xi(u:-v) = xi(-u:-v) in the Eisenstein quotient, over all u, v
    in the domain.  Each finding is {relation, uv, level, sector, status}."""
    space = quotient.space
    L, Np = space.M, space.N * space.p
    from .hecke import theta_label
    sector = theta_label(quotient.theta, space.p)
    findings = []
    counts = {"antisymmetry": [0, 0], "diagonal": [0, 0], "sign": [0, 0]}
    if quotient.length == 0:
        return [{"relation": name, "cases": 0, "failures": 0, "level": L, "sector": sector,
                 "status": "vacuous"} for name in counts]
    mods = np.array([space.p**e for e in quotient.quotient.exps if e > 0], dtype=np.int64)
    cache: dict = {}

    def xb(u, v):
        key = (u % L, v % L)
        if key not in cache:
            cache[key] = quotient.xi_bar(*key)
        return cache[key]

    def zero(x):
        return not np.any(x % mods)

    for u in range(1, L):
        for v in range(1, L):
            if gcd(gcd(u, v), Np) != 1:
                continue
            checks = []
            if u == v:
                checks.append(("diagonal", xb(u, u)))
            checks.append(("antisymmetry", xb(u, v) + xb(v, u)))
            checks.append(("sign", xb(u, v) - xb(u, -v)))
            checks.append(("sign", xb(u, v) - xb(-u, -v)))
            for name, x in checks:
                counts[name][0] += 1
                if not zero(x):
                    counts[name][1] += 1
                    findings.append({"relation": name, "uv": [u, v], "level": L, "sector": sector,
                                     "status": "fail"})
    summary = [{"relation": name, "cases": c, "failures": f, "level": L, "sector": sector,
                "status": "pass" if f == 0 else "fail"} for name, (c, f) in counts.items()]
    return summary + findings
