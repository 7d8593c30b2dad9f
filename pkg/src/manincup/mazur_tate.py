"""Mazur-Tate elements at level N p^r and their character specializations.

A ThetaElement at level r stores the coefficients U_p^{-r} xi_r(j:M) of

    sum_j U_p^{-r} xi_r(j:M) [j]_r,      1 <= j < N p^r, (j, C) = 1,

where C = Np gives L_{N,M}, C = M the star variant (and j = 0 is dropped),
and C = Qp the auxiliary element used for the comparison with smaller M.
Coefficients live in the ordinary cuspidal part W of level N p^r, in
coordinates of a fixed basis of W.  For j prime to p, xi_r(j:M) = e [j:M]
is already cuspidal; otherwise the Manin-Drinfeld splitting is used and the
whole element is scaled by p^f.

Specializing at an arithmetic character chi kappa^t uses the representative
j in [1, N p^r).  kappa^t is periodic modulo p^(r + v_p(t)) only, so
identities that hold for the inverse limit are checked at finite level
modulo the corresponding effective precision.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

import numpy as np
import sympy

from . import linalg as la
from .hecke import ManinDrinfeld, Subspace, ordinary_projector, ordinary_space
from .manin import SymbolSpace, build_symbol_space
from .padic import (ArithmeticCharacter, CharRing, DirichletCharacter, DomainError,
                    eval_arith_char, omega_power, ring_for, unit_group)

INFINITE = 10**6  # stands for v_p(0)


def _vp(x: int, p: int) -> int:
    return la.vp(x, p) if x else INFINITE


def prime_factors(n: int) -> list[int]:
    return sorted(sympy.factorint(n)) if n > 1 else []


# ---------------------------------------------------------------------------
# theta elements


@dataclass
class ThetaElement:
    """Coefficient map j -> U_p^{-r} xi_r(j:M) (scaled by p^scale) at level r.

    coeffs has shape (dim W, N p^r); column j is zero off the support."""

    N: int
    p: int
    r: int
    M: int
    C: int
    star: bool
    K: int
    coeffs: np.ndarray
    scale: int
    precision: int
    normalized: bool = True
    support: tuple = field(default=())

    @property
    def level(self) -> int:
        return self.N * self.p**self.r

    def coefficient(self, j: int) -> np.ndarray:
        """Coefficient at the residue class of j (zero off the support)."""
        return self.coeffs[:, j % self.level]


class ThetaContext:
    """Everything at a fixed level that theta elements and their
    specializations need: the space, the ordinary cuspidal part W and the
    Hecke operators restricted to it."""

    def __init__(self, N: int, p: int, r: int, K: int):
        if r < 1:
            raise DomainError("theta elements need r >= 1")
        self.N, self.p, self.r, self.K = N, p, r, K
        self.space = build_symbol_space(N, p, r, K)
        self.q = self.space.q
        self.W = ordinary_space(self.space, cuspidal=True)
        self._md = None
        self._ops: dict = {}

    @property
    def level(self) -> int:
        return self.space.M

    @property
    def md(self) -> ManinDrinfeld:
        if self._md is None:
            e = ordinary_projector(self.space)
            self._md = ManinDrinfeld(self.space, Subspace(e.unit_basis, self.p, self.K))
        return self._md

    def op(self, name) -> np.ndarray:
        """Operator restricted to W: ('U', l), ('diamond', a), ('Uinv', p)."""
        if name not in self._ops:
            if name[0] == "Uinv":
                self._ops[name] = la.inverse(self.op(("U", name[1])), self.p, self.K)
            else:
                self._ops[name] = self.W.restrict(self.space.operator(name))
        return self._ops[name]

    def U_prod(self, t: int) -> np.ndarray:
        """U_t on W for t supported on primes dividing N p."""
        out = np.eye(self.W.dim, dtype=np.int64)
        for l, e in sympy.factorint(t).items():
            for _ in range(e):
                out = la.matmul(self.op(("U", l)), out, self.q)
        return out

    def xi(self, u: int, v: int, need_split: bool) -> np.ndarray:
        """xi_r(u:v) in W coordinates (scaled by p^f when need_split)."""
        sp = self.space
        e = ordinary_projector(sp).e
        x = la.matmul(e, sp.symbol(u, v)[:, None], self.q)[:, 0]
        if need_split:
            x = self.md.split_scaled(x)
        return self.W.coords(x)


_CTX: dict = {}


def theta_context(N: int, p: int, r: int, K: int) -> ThetaContext:
    key = (N, p, r, K)
    if key not in _CTX:
        _CTX[key] = ThetaContext(N, p, r, K)
    return _CTX[key]


def theta_element(ctx: ThetaContext, M: int = 1, star: bool = False, C: int | None = None) -> ThetaElement:
    """L_{N,M} (star=False), L*_{N,M} (star=True) or the variant summing over
    (j, C) = 1 for an explicit C, at the level of ctx."""
    N, p, r = ctx.N, ctx.p, ctx.r
    if N % M:
        raise DomainError("M must divide N")
    L = ctx.level
    if C is None:
        C = M if star else N * p
    need = [j for j in range(1, L) if gcd(j, C) == 1]
    split = any(j % p**r == 0 for j in need)
    f = ctx.md.f if split else 0
    precision = ctx.md.precision if split else ctx.K
    pf = p**f
    Uinv_r = la.matpow(ctx.op(("Uinv", p)), r, ctx.q)
    cols = np.zeros((ctx.W.dim, L), dtype=np.int64)
    for j in need:
        if j % p**r == 0:
            cols[:, j] = ctx.xi(j, M, True)
        else:
            cols[:, j] = (pf * ctx.xi(j, M, False)) % ctx.q
    cols = la.matmul(Uinv_r, cols, ctx.q)
    return ThetaElement(N=N, p=p, r=r, M=M, C=C, star=star, K=ctx.K, coeffs=cols, scale=f,
                        precision=precision, support=tuple(need))


def pushforward_theta(hi: ThetaElement, ctx_hi: ThetaContext, ctx_lo: ThetaContext) -> np.ndarray:
    """Image of a level-s element at level r < s: coefficients
    sum_k pi(c_{i + k N p^r}) at each residue i mod N p^r (W_lo coordinates),
    with the normalization U_p^{-s} kept as U_p^{-s} at level r."""
    lo_L = ctx_lo.level
    P = ctx_hi.space.pushforward_matrix(ctx_lo.space)
    amb = la.matmul(ctx_hi.W.B, hi.coeffs, ctx_hi.q)
    img = la.matmul(P, amb, ctx_lo.q)
    agg = np.zeros((ctx_lo.space.rank, lo_L), dtype=np.int64)
    for j in range(hi.coeffs.shape[1]):
        agg[:, j % lo_L] += img[:, j]
    agg %= ctx_lo.q
    return ctx_lo.W.coords(agg)


def level_compatibility_defect(N: int, p: int, r: int, K: int, M: int = 1) -> np.ndarray:
    """Pushforward of the level-(r+1) element minus the level-r element, at
    level r.  The aggregation identity says this vanishes:
    sum_k pi(U_p^{-r-1} xi_{r+1}(i + k N p^r : M)) = U_p^{-r} xi_r(i : M)."""
    hi = theta_context(N, p, r + 1, K)
    lo = theta_context(N, p, r, K)
    th_hi = theta_element(hi, M)
    th_lo = theta_element(lo, M)
    img = pushforward_theta(th_hi, hi, lo)
    return (img - th_lo.coeffs) % lo.q


# ---------------------------------------------------------------------------
# module W (x) R and the quotients P_chi


def op_on(ctx: ThetaContext, A: np.ndarray, X: np.ndarray) -> np.ndarray:
    """A Hecke operator (W coordinates) applied to X in W (x) R, shape (n, dim)."""
    return la.matmul(A, X, ctx.q)


def scalar_on(R: CharRing, c: np.ndarray, X: np.ndarray) -> np.ndarray:
    """Multiply every row of X (n, dim) by the ring element c."""
    if X.shape[0] == 0:
        return X
    return la.matmul(X, R.mul_matrix(c).T.copy(), R.q)


def arith(psi: DirichletCharacter, t: int = 0) -> ArithmeticCharacter:
    return ArithmeticCharacter(psi, t)


def specialize(theta: ThetaElement, chi: ArithmeticCharacter, R: CharRing) -> np.ndarray:
    """chi~(theta) = sum_j chi(j) c_j in W (x) R, shape (dim W, R.dim)."""
    L = theta.level
    vals = np.zeros((L, R.dim), dtype=np.int64)
    for j in theta.support:
        vals[j] = eval_arith_char(chi, j, R)
    # (n x L) @ (L x dim) with ring multiplication only on the scalar side
    return la.matmul(theta.coeffs, vals, R.q)


def diamond_target(alpha: DirichletCharacter, k: int, p: int, a: int, R: CharRing) -> np.ndarray:
    """alpha kappa^{k-2} omega^{-2}(a): the scalar by which <a> acts after P_{alpha kappa^k}."""
    w = omega_power(p, (-2) % (p - 1))
    chi = ArithmeticCharacter(alpha * w, k - 2)
    return eval_arith_char(chi, a, R)


class PQuotient:
    """(W (x) R) / (<a> - alpha kappa^{k-2} omega^{-2}(a)) at level r, with a
    running over (Z/N p^r)^x (represented in [1, N p^r)).

    Comparisons are made modulo p^m with m <= r + v_p(k - 2), where the
    target is a character of (Z/N p^r)^x, so the relations for generators of
    the unit group suffice.  If multiplicativity fails at some precision,
    every unit contributes its relation instead."""

    def __init__(self, ctx: ThetaContext, alpha: DirichletCharacter, k: int, R: CharRing):
        self.ctx, self.alpha, self.k, self.R = ctx, alpha, k, R
        L = ctx.level
        self.units = [a for a in range(1, L) if gcd(a, L) == 1]
        self.targets = {a: diamond_target(alpha, k, ctx.p, a, R) for a in self.units}
        self.gens, _, self.logs = unit_group(L)
        self.default_precision = min(ctx.K, kappa_precision(ctx.r, ctx.p, k - 2))
        self._quots: dict = {}
        self.multiplicative: dict = {}

    def _is_multiplicative(self, m: int) -> bool:
        R, L, q = self.R, self.ctx.level, self.ctx.p**m
        for a in self.units:
            prod = R.one()
            for g, e in zip(self.gens, self.logs[a]):
                prod = R.mul(prod, R.pow(self.targets[int(g) % L], e))
            if np.any((prod - self.targets[a]) % q):
                return False
        return True

    def quotient(self, m: int | None = None) -> la.Quotient:
        m = self.default_precision if m is None else m
        if m not in self._quots:
            ctx, R = self.ctx, self.R
            n, dim, q = ctx.W.dim, R.dim, ctx.p**m
            mult = self._is_multiplicative(m)
            self.multiplicative[m] = mult
            rel_units = [int(g) % ctx.level for g in self.gens] if mult else self.units
            eye_d = np.eye(dim, dtype=np.int64)
            G = np.zeros((n * dim, 0), dtype=np.int64)
            for a in rel_units:
                D = ctx.op(("diamond", a)) % q
                A = (np.kron(D, eye_d) - np.kron(np.eye(n, dtype=np.int64), R.mul_matrix(self.targets[a]))) % q
                G = np.concatenate([G, A], axis=1)
                if G.shape[1] > 2 * G.shape[0] and G.shape[0]:
                    G = la.image(G, ctx.p, m, strict=False)
            self._quots[m] = la.Quotient(G, ctx.p, m)
        return self._quots[m]

    def reduce(self, X: np.ndarray, m: int | None = None) -> np.ndarray:
        Q = self.quotient(m)
        return Q.reduce(X.reshape(-1) % Q.q)

    @property
    def length(self) -> int:
        """Length of the quotient at the default precision."""
        return self.quotient().length


def equal_mod(Pq: PQuotient, X: np.ndarray, Y: np.ndarray, m: int) -> bool:
    """X = Y in the P-quotient modulo p^m."""
    if m <= 0:
        return True
    return not np.any(Pq.reduce((X - Y) % Pq.R.q, m))


def specialized_L(ctx: ThetaContext, theta: ThetaElement, alpha: DirichletCharacter, k: int,
                  chi: DirichletCharacter, s: int, R: CharRing) -> "SpecializedL":
    """L_{p,M}(xi, alpha, k, chi, s) (or the star / Qp variant, following
    theta): P_{alpha kappa^k}(chi kappa^{s-1}~(theta))."""
    vec = specialize(theta, ArithmeticCharacter(chi, s - 1), R)
    return SpecializedL(alpha=alpha, k=k, chi=chi, s=s, value=vec, source=(theta.M, theta.C, theta.star),
                        scale=theta.scale)


@dataclass
class SpecializedL:
    alpha: DirichletCharacter
    k: int
    chi: DirichletCharacter
    s: int
    value: np.ndarray      # representative in W (x) R before the quotient
    source: tuple          # (M, C, star) of the theta element it came from
    scale: int = 0

    def reduced(self, Pq: PQuotient) -> np.ndarray:
        return Pq.reduce(self.value)


# ---------------------------------------------------------------------------
# verification of the identities


@dataclass
class CheckResult:
    name: str
    cases: int
    failures: list
    skipped: list = field(default_factory=list)
    precision: dict = field(default_factory=dict)
    nonzero: int = 0  # cases where the compared values are not both zero

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {"name": self.name, "cases": self.cases, "nonzero": self.nonzero,
                "failures": [str(f) for f in self.failures],
                "skipped": [str(s) for s in self.skipped], "ok": self.ok}


def _compare(res: CheckResult, Pq: "PQuotient", X: np.ndarray, Y: np.ndarray, m: int, label: str):
    res.cases += 1
    if m > 0 and np.any(Pq.reduce(X % Pq.R.q, m)):
        res.nonzero += 1
    if not equal_mod(Pq, X, Y, m):
        res.failures.append(label)


def verify_distribution(N: int, p: int, r: int, K: int = 2, ts=None) -> CheckResult:
    """U_t [tu:v]_r = sum_{k<t} [u + kQ : v]_r (Q = N p^r / t) in relative
    homology for every divisor t of N p^r and all 1 <= u, v < N p^r with
    (tu, v, Np) = 1.  Applying e_r s_r gives the same identity for xi_r."""
    sp = build_symbol_space(N, p, r, K, validate=False)
    L, q = sp.M, sp.q
    ts = ts or sympy.divisors(L)
    failures = []
    cases = 0
    for t in ts:
        Q = L // t
        Ut = sp.U_t(t) if t > 1 else np.eye(sp.rank, dtype=np.int64)
        UE = la.matmul(Ut, sp.E, q)
        for u in range(1, L):
            for v in range(1, L):
                if gcd(gcd(t * u, v), N * p) != 1:
                    continue
                cases += 1
                lhs = UE[:, sp.index[((t * u) % L, v % L)]]
                rhs = np.zeros(sp.rank, dtype=np.int64)
                for k in range(t):
                    rhs += sp.E[:, sp.index[((u + k * Q) % L, v % L)]]
                if np.any((lhs - rhs) % q):
                    failures.append((t, u, v))
    return CheckResult("distribution_relation", cases, failures)


def verify_diamond_identity(ctx: ThetaContext, alpha: DirichletCharacter, k: int, R: CharRing,
                     relative: bool = True) -> CheckResult:
    """P(xi_r(j:1)) = -alpha^{-1} omega^2 kappa^{2-k}(j) P(xi_r(-j^{-1}:1)) for
    every j prime to Np.  With relative=True the identity is checked on
    Manin symbols in the ordinary part of relative homology (where the
    P-quotient is taken for the diamond action there); otherwise on the
    ordinary cuspidal part through the theta context."""
    p, r, L = ctx.p, ctx.r, ctx.level
    m = min(ctx.K, r + _vp(k - 2, p))
    if relative:
        sp = ctx.space
        e = ordinary_projector(sp)
        Wrel = Subspace(e.unit_basis, p, ctx.K)
        sub = _RelativeContext(ctx, Wrel)
        Pq = PQuotient(sub, alpha, k, R)
        def cls(u, v):
            x = la.matmul(e.e, sp.symbol(u, v)[:, None], ctx.q)[:, 0]
            return _embed(Wrel.coords(x), R)
    else:
        Pq = PQuotient(ctx, alpha, k, R)
        def cls(u, v):
            return _embed(ctx.xi(u, v, False), R)
    w2 = omega_power(p, 2 % (p - 1))
    res = CheckResult("diamond_identity", 0, [], precision={"m": m})
    for j in range(1, L):
        if gcd(j, ctx.N * p) != 1:
            continue
        jinv = (-pow(j, -1, L)) % L
        c = eval_arith_char(ArithmeticCharacter(alpha.inverse() * w2, 2 - k), j, R)
        lhs = cls(j, 1)
        rhs = (-scalar_on(R, c, cls(jinv, 1))) % R.q
        _compare(res, Pq, lhs, rhs, m, str(j))
    return res


class _RelativeContext:
    """A ThetaContext look-alike whose W is the full ordinary relative part."""

    def __init__(self, ctx: ThetaContext, W: Subspace):
        self.N, self.p, self.r, self.K, self.q = ctx.N, ctx.p, ctx.r, ctx.K, ctx.q
        self.space = ctx.space
        self.W = W
        self._ops: dict = {}

    @property
    def level(self):
        return self.space.M

    def op(self, name):
        if name not in self._ops:
            self._ops[name] = self.W.restrict(self.space.operator(name))
        return self._ops[name]


def _embed(x: np.ndarray, R: CharRing) -> np.ndarray:
    """x in W (integer coordinates) as an element of W (x) R."""
    out = np.zeros((x.shape[0], R.dim), dtype=np.int64)
    out[:, 0] = x % R.q
    return out


@dataclass
class GridPoint:
    alpha: DirichletCharacter
    k: int
    chi: DirichletCharacter
    s: int

    def label(self) -> str:
        return f"alpha={self.alpha.modulus}:{self.alpha.exps} k={self.k} chi={self.chi.modulus}:{self.chi.exps} s={self.s}"


def default_grid(N: int, p: int, r: int, size: int, seed: int = 0, even_alpha: bool = True,
                 ks=(2,), ss=(1,)) -> list[GridPoint]:
    """A reproducible sample of (alpha, k, chi, s) with alpha, chi characters
    of modulus N p^r (alpha even)."""
    import random
    L = N * p**r
    from .padic import all_characters
    chars = all_characters(L)
    alphas = [a for a in chars if a.is_even()] if even_alpha else chars
    rng = random.Random(seed)
    out = []
    for _ in range(size):
        out.append(GridPoint(rng.choice(alphas), rng.choice(list(ks)), rng.choice(chars), rng.choice(list(ss))))
    return out


def nontrivial_grid(ctx: ThetaContext, size: int, seed: int = 0, ks=(2,), ss=(1,),
                    chi_moduli=None) -> list[GridPoint]:
    """A reproducible sample whose alpha (even, modulus N p^r) has a nonzero
    P_{alpha kappa^k} quotient; chi ranges over characters of the given moduli
    (default: the divisors N p^r, N, p, 1)."""
    import random
    from .padic import all_characters
    N, p, L = ctx.N, ctx.p, ctx.level
    moduli = chi_moduli or sorted({L, N, p, 1})
    chars = [c for d in moduli for c in all_characters(d)]
    rng = random.Random(seed)
    pool = {}
    for k in ks:
        R = ring_for(p, ctx.K, L)
        pool[k] = [a for a in all_characters(L) if a.is_even() and PQuotient(ctx, a, k, R).length]
    out = []
    for _ in range(size):
        k = rng.choice(list(ks))
        if not pool[k]:
            continue
        out.append(GridPoint(rng.choice(pool[k]), k, rng.choice(chars), rng.choice(list(ss))))
    return out


def kappa_precision(r: int, p: int, *exponents: int) -> int:
    """Precision to which the kappa powers appearing are periodic at level r."""
    return min(r + _vp(t, p) for t in exponents) if exponents else INFINITE


def verify_functional_equation(ctx: ThetaContext, grid: list[GridPoint]) -> CheckResult:
    """L_p(alpha, k, chi, s) = -chi(-1) L_p(alpha, k, alpha chi^{-1} omega^{-2}, k - s)
    in the P_{alpha kappa^k} quotient."""
    p, r = ctx.p, ctx.r
    th = theta_element(ctx, 1)
    res = CheckResult("functional_equation", 0, [])
    wm2 = omega_power(p, (-2) % (p - 1))
    for g in grid:
        R = ring_for(p, ctx.K, ctx.level, g.alpha.modulus, g.chi.modulus)
        Pq = PQuotient(ctx, g.alpha, g.k, R)
        m = min(th.precision, kappa_precision(r, p, g.k - 2, g.s - 1, g.k - g.s - 1))
        lhs = specialize(th, ArithmeticCharacter(g.chi, g.s - 1), R)
        chi2 = g.alpha * g.chi.inverse() * wm2
        rhs = specialize(th, ArithmeticCharacter(chi2, g.k - g.s - 1), R)
        sign = g.chi.value(-1, R)
        rhs = (-scalar_on(R, sign, rhs)) % R.q
        _compare(res, Pq, lhs, rhs, m, g.label())
    return res


def _U_minus(ctx: ThetaContext, l: int, c: np.ndarray, R: CharRing, X: np.ndarray) -> np.ndarray:
    """(U_l - c) X on W (x) R."""
    return (op_on(ctx, ctx.op(("U", l)), X) - scalar_on(R, c, X)) % R.q


def compare_L(ctx: ThetaContext, M: int, chi: ArithmeticCharacter, R: CharRing):
    """Both sides of U_D chi~(L_{N,M}) = prod_{l | Np, l !| M} (U_l - chi(l)) chi~(L*_{N,M})."""
    N, p = ctx.N, ctx.p
    primes = [l for l in prime_factors(N * p) if M % l]
    D = 1
    for l in primes:
        D *= l
    th = theta_element(ctx, M)
    ths = theta_element(ctx, M, star=True)
    lhs = op_on(ctx, ctx.U_prod(D), specialize(th, chi, R))
    if ths.scale > th.scale:
        lhs = (lhs * p ** (ths.scale - th.scale)) % R.q
    rhs = specialize(ths, chi, R)
    for l in primes:
        rhs = _U_minus(ctx, l, eval_arith_char(chi, l, R), R, rhs)
    return lhs, rhs, min(th.precision, ths.precision)


def verify_compare_identities(ctx: ThetaContext, grid: list[GridPoint], Ms=None) -> list[CheckResult]:
    """Over the grid: the comparison of L with L* (before and after the
    P_{alpha kappa^k} quotient), the comparison of L_p with L_{p,M}, and the
    functional equation relating L_p^{Qp} to U_M L_{p,M} used on the way.
    Cases where Q = N/M is not divisible by the prime-to-p conductor of
    alpha chi^{-1} are skipped."""
    N, p, r = ctx.N, ctx.p, ctx.r
    Ms = Ms or sympy.divisors(N)
    res_L = CheckResult("star_comparison", 0, [])
    res_Lp = CheckResult("star_comparison_quotient", 0, [])
    res_LM = CheckResult("level_comparison", 0, [])
    res_fnl = CheckResult("qp_functional_equation", 0, [])
    wm2 = omega_power(p, (-2) % (p - 1))
    th1 = theta_element(ctx, 1)
    for g in grid:
        R = ring_for(p, ctx.K, ctx.level, g.alpha.modulus, g.chi.modulus)
        Pq = PQuotient(ctx, g.alpha, g.k, R)
        chi_s = ArithmeticCharacter(g.chi, g.s - 1)
        for M in Ms:
            lhs, rhs, prec = compare_L(ctx, M, chi_s, R)
            m = min(prec, kappa_precision(r, p, g.s - 1))
            res_L.cases += 1
            if np.any(lhs % p**m):
                res_L.nonzero += 1
            if np.any((lhs - rhs) % p**m):
                res_L.failures.append(f"M={M} {g.label()}")
            m2 = min(m, kappa_precision(r, p, g.k - 2))
            _compare(res_Lp, Pq, lhs, rhs, m2, f"M={M} {g.label()}")
            # the comparison of levels and the L_p^{Qp} identity
            Q = N // M
            beta = g.alpha * g.chi.inverse()
            if Q % _prime_to_p_conductor(beta, p):
                res_LM.skipped.append(f"M={M} {g.label()}")
                continue
            chi2 = (beta * wm2).primitive()
            t2 = g.k - g.s - 1
            m3 = min(ctx.K, kappa_precision(r, p, g.k - 2, g.s - 1, t2))
            thM = theta_element(ctx, M)
            LpM = specialize(thM, chi_s, R)
            ratio = Fraction_mod(sympy.totient(Q), sympy.totient(N), R.q)
            UM = ctx.U_prod(M) if M > 1 else np.eye(ctx.W.dim, dtype=np.int64)
            D = 1
            prod_primes = [l for l in prime_factors(N) if Q % l]
            for l in prod_primes:
                D *= l
            right = (ratio * op_on(ctx, UM, LpM)) % R.q
            # L_p^{Qp}(alpha, k, chi2, k - s) = -chi(-1) (phi(Q)/phi(N)) U_M L_{p,M}
            thQ = theta_element(ctx, 1, C=Q * p)
            LQp = specialize(thQ, ArithmeticCharacter(chi2, t2), R)
            sign = g.chi.value(-1, R)
            _compare(res_fnl, Pq, LQp, (-scalar_on(R, sign, right)) % R.q, m3, f"M={M} {g.label()}")
            for l in prod_primes:
                right = _U_minus(ctx, l, eval_arith_char(ArithmeticCharacter(chi2, t2), l, R), R, right)
            Lp = specialize(th1, chi_s, R)
            left = op_on(ctx, ctx.U_prod(D), Lp) if D > 1 else Lp
            _compare(res_LM, Pq, left, right, m3, f"M={M} {g.label()}")
    return [res_L, res_Lp, res_LM, res_fnl]


def Fraction_mod(a: int, b: int, q: int) -> int:
    return int(a) * pow(int(b), -1, q) % q


def _prime_to_p_conductor(chi: DirichletCharacter, p: int) -> int:
    f = chi.conductor()
    while f % p == 0:
        f //= p
    return f


def star_vanishes_for_odd_alpha(ctx: ThetaContext, alpha: DirichletCharacter, k: int,
                                chi: DirichletCharacter, s: int, M: int = 1) -> bool:
    """L*_{p,M}(alpha, k, chi, s) = 0 in the P quotient for odd alpha."""
    R = ring_for(ctx.p, ctx.K, ctx.level, alpha.modulus, chi.modulus)
    Pq = PQuotient(ctx, alpha, k, R)
    th = theta_element(ctx, M, star=True)
    v = specialize(th, ArithmeticCharacter(chi, s - 1), R)
    m = min(th.precision, kappa_precision(ctx.r, ctx.p, s - 1, k - 2))
    return equal_mod(Pq, v, np.zeros_like(v), m)
