"""Ordinary projector, Manin-Drinfeld splitting, Eisenstein sectors,
localization and Eisenstein quotients on a SymbolSpace.

Subspaces are carried as column bases inside the coordinates of the ambient
relative homology.  Localization at the Eisenstein ideal is the intersection
of the generalized kernels (Fitting nil parts) of its generators.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

import numpy as np
import sympy

from . import linalg as la
from .manin import SymbolSpace, build_symbol_space
from .padic import (DirichletCharacter, DomainError, bernoulli1, galois_orbit, omega_power,
                    ring_for)

DEFAULT_HECKE_BOUND = 23


# ---------------------------------------------------------------------------
# subspaces and Fitting decomposition


@dataclass
class Subspace:
    """A direct summand of (Z/p^K)^n with basis B (columns) and a left inverse."""

    B: np.ndarray
    p: int
    K: int
    L: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.L is None:
            self.L = la.left_inverse(self.B, self.p, self.K)

    @property
    def q(self):
        return self.p**self.K

    @property
    def dim(self) -> int:
        return self.B.shape[1]

    def restrict(self, op: np.ndarray) -> np.ndarray:
        return la.restrict(op, self.B, self.p, self.K, self.L)

    def coords(self, x: np.ndarray) -> np.ndarray:
        """Coordinates of ambient vectors (columns) lying in the subspace."""
        x = np.asarray(x, dtype=np.int64)
        vec = x.ndim == 1
        X = x[:, None] if vec else x
        c = la.matmul(self.L, X, self.q)
        if np.any((la.matmul(self.B, c, self.q) - X) % self.q):
            raise ValueError("vector does not lie in the subspace")
        return c[:, 0] if vec else c

    def sub(self, C: np.ndarray) -> "Subspace":
        """Subspace spanned by B @ C for a summand basis C of coordinates."""
        return Subspace(la.matmul(self.B, C, self.q) if C.size else np.zeros((self.B.shape[0], 0), dtype=np.int64), self.p, self.K)

    def contains(self, x: np.ndarray) -> bool:
        X = x[:, None] if x.ndim == 1 else x
        c = la.matmul(self.L, X, self.q)
        return not np.any((la.matmul(self.B, c, self.q) - X) % self.q)


def fitting(A: np.ndarray, p: int, K: int):
    """Fitting decomposition of an endomorphism of (Z/p^K)^n: bases of the
    unit part (where A is invertible) and the nilpotent part."""
    n = A.shape[0]
    q = p**K
    if n == 0:
        z = np.zeros((0, 0), dtype=np.int64)
        return z, z
    e = 1
    while e < n * K:
        e *= 2
    G = la.matpow(A % q, e, q)
    unit = la.image(G, p, K) if G.any() else np.zeros((n, 0), dtype=np.int64)
    nil = la.kernel(G, p, K)
    if unit.shape[1] + nil.shape[1] != n:
        raise la.PrecisionError("Fitting decomposition failed")
    return unit, nil


def projector_onto(first: np.ndarray, second: np.ndarray, p: int, K: int) -> np.ndarray:
    """Projection onto span(first) along span(second) (complementary summands)."""
    q = p**K
    B = np.concatenate([first, second], axis=1)
    Binv = la.inverse(B, p, K)
    k = first.shape[1]
    return la.matmul(first, Binv[:k], q)


# ---------------------------------------------------------------------------
# ordinary projector


@dataclass
class OrdinaryProjector:
    e: np.ndarray
    unit_basis: np.ndarray
    nil_basis: np.ndarray
    operator: str
    exponent: int

    @property
    def rank(self) -> int:
        return self.unit_basis.shape[1]


_ORD_CACHE: dict = {}


def up_operator(space: SymbolSpace) -> np.ndarray:
    """U_p if p | M, otherwise T_p (level prime to p)."""
    return space.U(space.p) if space.M % space.p == 0 else space.T(space.p)


def ordinary_projector(space: SymbolSpace) -> OrdinaryProjector:
    """Hida's idempotent on relative homology: the projection onto the part
    where U_p is invertible, along the part where it is topologically
    nilpotent.  Equal to lim U_p^{n!} (checked in tests)."""
    key = (space.N, space.p, space.r, space.K)
    if key in _ORD_CACHE:
        return _ORD_CACHE[key]
    U = up_operator(space)
    unit, nil = fitting(U, space.p, space.K)
    e = projector_onto(unit, nil, space.p, space.K)
    n = space.rank
    exp = 1
    while exp < n * space.K:
        exp *= 2
    res = OrdinaryProjector(e=e, unit_basis=unit, nil_basis=nil,
                            operator=("U" if space.M % space.p == 0 else "T") + str(space.p), exponent=exp)
    _ORD_CACHE[key] = res
    return res


def stabilized_power(U: np.ndarray, p: int, K: int, max_rounds: int = 64) -> np.ndarray:
    """lim U^{n!}: X_k = X_{k-1}^k = U^{k!}, stopped once idempotent."""
    q = p**K
    X = U % q
    for k in range(2, max_rounds):
        X = la.matpow(X, k, q)
        if not np.any((la.matmul(X, X, q) - X) % q):
            return X
    raise la.PrecisionError("power of U_p did not stabilize")


def ordinary_space(space: SymbolSpace, cuspidal: bool = False) -> Subspace:
    e = ordinary_projector(space)
    if not cuspidal:
        return Subspace(e.unit_basis, space.p, space.K)
    C = Subspace(space.cuspidal, space.p, space.K)
    eC = la.matmul(e.e, C.B, space.q)
    return Subspace(la.image(eC, space.p, space.K), space.p, space.K)


# ---------------------------------------------------------------------------
# Manin-Drinfeld splitting


def _auxiliary_primes(M: int, count: int = 4) -> list[int]:
    """Primes l >= 7 prime to M: Eisenstein eigenvalues of T_l have absolute
    value at least l - 1 > 2 sqrt(l), so f(T_l) is invertible on cusp forms
    over Q."""
    out = []
    l = 7
    while len(out) < count:
        if M % l:
            out.append(l)
        l = int(sympy.nextprime(l))
    return out


class ManinDrinfeld:
    """The Hecke-equivariant splitting s of W -> W_c = W cap ker(delta) for a
    Hecke-stable summand W of relative homology.

    The Eisenstein complement E is the common kernel of f_l(T_l) for a few
    auxiliary primes l, f_l the characteristic polynomial of T_l on W / W_c;
    s is the projection onto W_c along E.  p^f s is integral, where p^f is the
    exponent of W / (W_c + E), and its values are known modulo
    p^(K - f - d), p^d being the largest finite elementary divisor of the
    stacked f_l(T_l).
    """

    def __init__(self, space: SymbolSpace, W: Subspace | None = None, aux_primes=None):
        p, K, q = space.p, space.K, space.q
        self.space = space
        if W is None:
            W = Subspace(np.eye(space.rank, dtype=np.int64), p, K)
        self.W = W
        dW = la.matmul(space.delta, W.B, q)
        Kc = la.kernel(dW, p, K)  # coordinates in W
        self.Wc = W.sub(Kc)
        kc = Kc.shape[1]
        comp = la.complement(Kc, p, K)
        basis = np.concatenate([Kc, comp], axis=1)
        binv = la.inverse(basis, p, K)
        self.aux_primes = list(aux_primes or _auxiliary_primes(space.M))
        Fs = []
        for l in self.aux_primes:
            T = W.restrict(space.T(l))
            Tb = la.matmul(binv, la.matmul(T, basis, q), q)
            if np.any(Tb[kc:, :kc] % q):
                raise ValueError("cuspidal subspace is not T-stable")
            f = la.charpoly(Tb[kc:, kc:], q)
            Fs.append(la.polyval_matrix(f, T, q))
        stacked = np.concatenate(Fs, axis=0) if Fs else np.zeros((0, W.dim), dtype=np.int64)
        St = la.smith(stacked, p, K, track_u=False)
        finite = [e for e in St.exps if e < K]
        self.d = max(finite, default=0)
        keep = [i for i, e in enumerate(St.exps) if e >= K] + list(range(St.rank, W.dim))
        E = St.V[:, keep] % q
        if E.shape[1] != W.dim - kc:
            raise la.PrecisionError("Eisenstein complement not resolved at this precision")
        self.E = W.sub(E)
        S = la.smith(np.concatenate([Kc, E], axis=1), p, K)
        if S.rank < W.dim or max(S.exps, default=0) >= K:
            raise la.PrecisionError("precision exhausted in the Manin-Drinfeld splitting")
        self.f = max(S.exps, default=0)
        if self.f + self.d >= K:
            raise la.PrecisionError("precision exhausted in the Manin-Drinfeld splitting")
        scale = np.array([p ** (self.f - e) for e in S.exps], dtype=np.int64)
        # p^f [Kc | E]^{-1} = V diag(p^{f - e}) U; its first kc rows give W_c coordinates
        inv_scaled = la.matmul(S.V * scale[None, :], S.U, q)
        self.scaled = inv_scaled[:kc] % q  # W coords -> W_c coords, times p^f
        self.precision = K - self.f - self.d

    def split_scaled(self, x: np.ndarray) -> np.ndarray:
        """p^f s(x) as an ambient vector, valid modulo p^precision; x ambient in W."""
        c = self.W.coords(x)
        y = la.matmul(self.scaled, c[:, None] if c.ndim == 1 else c, self.space.q)
        out = la.matmul(self.Wc.B, y, self.space.q)
        return out[:, 0] if c.ndim == 1 else out

    def split(self, x: np.ndarray) -> np.ndarray:
        """s(x) when it is integral (denominator exponent 0 on x)."""
        y = self.split_scaled(x)
        pf = self.space.p**self.f
        if np.any(y % pf):
            raise la.PrecisionError("s(x) is not integral")
        return (y // pf) % (self.space.p ** self.precision)


def manin_drinfeld_split(space: SymbolSpace, x: np.ndarray, W: Subspace | None = None):
    """(p^f s(x), f); see ManinDrinfeld for the precision."""
    md = ManinDrinfeld(space, W)
    return md.split_scaled(x), md.f


# ---------------------------------------------------------------------------
# Eisenstein sectors


def diamond_character(theta: DirichletCharacter, p: int) -> DirichletCharacter:
    """theta * omega^{-1}, the character by which diamonds act on the locus."""
    L = theta.modulus
    return theta * omega_power(p, -1 % (p - 1), L)


def sector_projector(space: SymbolSpace, chi: DirichletCharacter) -> np.ndarray:
    """Z/p^K-rational idempotent attached to the Galois orbit of chi (a
    character of (Z/Np)^x) acting through the diamond operators."""
    p, K, q = space.p, space.K, space.q
    Np = space.N * p
    if chi.modulus != Np:
        chi = chi.lift(Np)
    R = ring_for(p, K, Np)
    n = int(sympy.totient(Np))
    inv_n = pow(n, -1, q)
    # j_of[a]: element of (Z/M)^x of prime-to-p order reducing to a mod Np
    j_of = _prime_to_p_section(space)
    P = np.zeros((space.rank, space.rank), dtype=np.int64)
    coeff = {}
    for c in galois_orbit(chi, p):
        for a in j_of:
            v = c.value(pow(a, -1, Np), R)
            coeff[a] = (coeff.get(a, R.zero()) + v) % R.q
    for a, v in coeff.items():
        if np.any(v[1:] % q):
            raise ArithmeticError("orbit idempotent is not rational")
        c0 = int(v[0]) * inv_n % q
        if c0:
            P = (P + c0 * space.diamond(j_of[a])) % q
    return P


def _prime_to_p_section(space: SymbolSpace) -> dict:
    """Map a in (Z/Np)^x to the unique element of (Z/M)^x of order prime to p
    reducing to a modulo Np."""
    M, p, N = space.M, space.p, space.N
    Np = N * p
    out = {}
    if space.r <= 1:
        for a in range(Np):
            if gcd(a, Np) == 1:
                out[a] = a % M
        return out
    group_order = int(sympy.totient(M))
    pp = p ** (space.r - 1)
    tame = group_order // pp  # order of the prime-to-p part
    # projector onto the prime-to-p part: x -> x^(pp * inverse of pp mod tame)
    e = pp * pow(pp, -1, tame)
    for a in range(Np):
        if gcd(a, Np) != 1:
            continue
        b = a
        while gcd(b, M) != 1:
            b += Np
        out[a] = pow(b, e, M)
    return out


def eisenstein_generators(space: SymbolSpace, bound: int = DEFAULT_HECKE_BOUND):
    """(name, matrix) pairs for T_l - 1 - l<l> (l prime to Np, l <= bound) and
    U_l - 1 (l | Np)."""
    M, q = space.M, space.q
    Np = space.N * space.p
    eye = np.eye(space.rank, dtype=np.int64)
    gens = []
    for l in sympy.primerange(2, bound + 1):
        if Np % l == 0:
            continue
        g = (space.T(l) - eye - l * space.diamond(l)) % q
        gens.append((f"T{l}-1-{l}<{l}>", g))
    for l in sorted(sympy.factorint(Np)):
        gens.append((f"U{l}-1", (space.U(l) - eye) % q))
    return gens


def localize(sub: Subspace, gens) -> Subspace:
    """Intersection of the generalized kernels of the generators on sub."""
    cur = sub
    for _, g in gens:
        if cur.dim == 0:
            break
        A = cur.restrict(g)
        _, nil = fitting(A, cur.p, cur.K)
        cur = cur.sub(nil)
    return cur


def odd_primitive_characters(N: int, p: int) -> list[DirichletCharacter]:
    """Representatives (one per Galois orbit) of odd primitive characters mod Np."""
    from .padic import all_characters, orbit_representative
    Np = N * p
    seen = set()
    out = []
    for chi in all_characters(Np):
        if chi.is_even() or not chi.is_primitive():
            continue
        rep = orbit_representative(chi, p)
        if rep.exps in seen:
            continue
        seen.add(rep.exps)
        out.append(rep)
    return out


def theta_label(theta: DirichletCharacter, p: int) -> str:
    if theta.modulus == p:
        from .padic import omega_exponent
        return f"w{omega_exponent(theta, p)}"
    return f"chi{theta.modulus}_" + "_".join(str(e) for e in theta.exps)


def parse_theta(label: str, N: int, p: int) -> DirichletCharacter:
    """'w31' -> omega^31 (N = 1); 'chi65_1_3' -> exponent vector mod Np.
    The character must be odd and primitive of modulus Np."""
    try:
        if label.startswith("w"):
            theta = omega_power(p, int(label[1:]), N * p)
        elif label.startswith("chi"):
            mod, *exps = label[3:].split("_")
            theta = DirichletCharacter(int(mod), tuple(int(e) for e in exps))
        else:
            raise ValueError
    except ValueError:
        raise DomainError(f"cannot parse character label {label!r}") from None
    if theta.modulus != N * p or theta.is_even() or not theta.is_primitive():
        raise DomainError(f"{label} is not an odd primitive character of modulus {N * p}")
    return theta


_LOCAL_CACHE: dict = {}


def local_sector(space: SymbolSpace, theta: DirichletCharacter, bound: int = DEFAULT_HECKE_BOUND,
                 sign: int = 0):
    """The theta-sector of ordinary relative homology (optionally a star
    eigenspace), localized at the Eisenstein ideal, with the Hecke-equivariant
    projection onto it (kernel = all complementary generalized eigenspaces).
    Returns (Subspace, projection matrix on ambient coordinates)."""
    key = (space.N, space.p, space.r, space.K, theta, bound, sign)
    if key in _LOCAL_CACHE:
        return _LOCAL_CACHE[key]
    p, K, q = space.p, space.K, space.q
    e = ordinary_projector(space).e
    P = sector_projector(space, diamond_character(theta, p))
    base = la.matmul(P, e, q)
    if sign:
        S = space.plus_projector() if sign > 0 else space.minus_projector()
        base = la.matmul(S, base, q)
    if not base.any():
        res = (Subspace(np.zeros((space.rank, 0), dtype=np.int64), p, K), np.zeros_like(base))
        _LOCAL_CACHE[key] = res
        return res
    cur = Subspace(la.image(base, p, K), p, K)
    proj = la.matmul(cur.L, base, q)  # ambient -> coordinates in cur
    for _, g in eisenstein_generators(space, bound):
        if cur.dim == 0:
            break
        A = cur.restrict(g)
        unit, nil = fitting(A, p, K)
        if unit.shape[1] == 0:
            continue
        Pn = projector_onto(nil, unit, p, K)
        nil_sub = Subspace(nil, p, K)
        proj = la.matmul(nil_sub.L, la.matmul(Pn, proj, q), q)
        cur = cur.sub(nil)
    Pi = la.matmul(cur.B, proj, q) if cur.dim else np.zeros((space.rank, space.rank), dtype=np.int64)
    res = (cur, Pi)
    _LOCAL_CACHE[key] = res
    return res


def cuspidal_part(space: SymbolSpace, W: Subspace) -> Subspace:
    """W cap ker(delta)."""
    if W.dim == 0:
        return W
    dW = la.matmul(space.delta, W.B, space.q)
    return W.sub(la.kernel(dW, space.p, space.K))


@dataclass
class EisensteinLocus:
    space: SymbolSpace
    theta: DirichletCharacter
    sector: Subspace          # ordinary cuspidal theta-sector (before localization)
    local: Subspace           # localized ordinary cuspidal theta-sector
    relative: Subspace        # localized ordinary relative theta-sector
    projection: np.ndarray    # ambient projection onto `relative`
    generators: list

    @property
    def rank(self) -> int:
        return self.local.dim


def m_localize(space: SymbolSpace, theta: DirichletCharacter, bound: int = DEFAULT_HECKE_BOUND,
               sign: int = 0) -> EisensteinLocus:
    """theta-sector of the ordinary cuspidal homology (diamonds acting through
    theta*omega^-1), localized at the Eisenstein ideal.  sign = +1/-1 restricts
    to a star eigenspace."""
    p, K, q = space.p, space.K, space.q
    rel, Pi = local_sector(space, theta, bound, sign)
    local = cuspidal_part(space, rel)
    base = ordinary_space(space, cuspidal=True)
    P = sector_projector(space, diamond_character(theta, p))
    if sign:
        P = la.matmul(space.plus_projector() if sign > 0 else space.minus_projector(), P, q)
    img = la.matmul(P, base.B, q)
    sector = Subspace(la.image(img, p, K), p, K) if img.any() else Subspace(np.zeros((space.rank, 0), dtype=np.int64), p, K)
    return EisensteinLocus(space=space, theta=theta, sector=sector, local=local, relative=rel,
                           projection=Pi, generators=eisenstein_generators(space, bound))


class EisensteinQuotient:
    """(localized ordinary cuspidal plus theta-sector) / (Eisenstein ideal),
    with the map (u, v) -> image of xi(u:v)^+."""

    def __init__(self, space: SymbolSpace, theta: DirichletCharacter, bound: int = DEFAULT_HECKE_BOUND):
        self.space = space
        self.theta = theta
        self.locus = m_localize(space, theta, bound, sign=+1)
        self.plus = self.locus.local
        p, K = space.p, space.K
        cols = [self.plus.restrict(g) for _, g in self.locus.generators] if self.plus.dim else []
        G = np.concatenate(cols, axis=1) if cols else np.zeros((self.plus.dim, 0), dtype=np.int64)
        self.quotient = la.Quotient(G, p, K)
        self._md = None

    @property
    def length(self) -> int:
        return self.quotient.length

    @property
    def order(self) -> int:
        return self.space.p ** self.length

    @property
    def md(self) -> "ManinDrinfeld":
        if self._md is None:
            self._md = ManinDrinfeld(self.space, self.locus.relative)
        return self._md

    def project(self, x: np.ndarray) -> np.ndarray:
        """Class in the quotient of an ambient cuspidal vector."""
        y = la.matmul(self.locus.projection, x[:, None], self.space.q)[:, 0]
        return self.quotient.reduce(self.plus.coords(y))

    def xi_plus(self, u: int, v: int) -> np.ndarray:
        """Projection of xi(u:v) = e s [u:v] to the localized plus sector
        (an ambient cuspidal vector)."""
        space = self.space
        q, p = space.q, space.p
        x = la.matmul(self.locus.projection, space.symbol(u, v)[:, None], q)[:, 0]
        if not self.plus.contains(x):
            md = self.md
            y = md.split_scaled(x)
            pf = p**md.f
            if np.any(y % pf):
                raise la.PrecisionError("xi(u:v) is not integral in this sector")
            x = (y // pf) % q
        return x

    def xi_bar(self, u: int, v: int) -> np.ndarray:
        """Image of xi(u:v)^+ in the quotient, for u, v nonzero mod Np^r with
        (u, v, Np) = 1."""
        M = self.space.M
        if u % M == 0 or v % M == 0 or gcd(gcd(u, v), self.space.N * self.space.p) != 1:
            raise DomainError(f"xi_bar({u}:{v}) is outside its domain at level {M}")
        if self.plus.dim == 0:
            return np.zeros(0, dtype=np.int64)
        return self.quotient.reduce(self.plus.coords(self.xi_plus(u, v)))


def eisenstein_quotient(space: SymbolSpace, theta: DirichletCharacter,
                        bound: int = DEFAULT_HECKE_BOUND) -> EisensteinQuotient:
    return EisensteinQuotient(space, theta, bound)


def hecke_span(vectors: np.ndarray, ops, p: int, K: int) -> np.ndarray:
    """Basis-free generating set of the smallest submodule containing the
    given columns and stable under the operators (Krylov closure)."""
    q = p**K
    cur = vectors % q
    length = -1
    while True:
        Q = la.Quotient(cur, p, K)
        # length of the span = total length minus length of the cokernel
        span_len = cur.shape[0] * K - Q.length
        if span_len == length:
            return cur
        length = span_len
        new = [cur] + [la.matmul(op, cur, q) for op in ops]
        cur = np.concatenate(new, axis=1)
        # compress: keep a generating set of the span
        S = la.smith(cur, p, K, track_v=False)
        Uinv = la.inverse(S.U, p, K)
        cols = [i for i, e in enumerate(S.exps) if e < K]
        cur = (Uinv[:, cols] * np.array([p**S.exps[i] for i in cols], dtype=np.int64)[None, :]) % q


@dataclass
class CongruenceModule:
    length: int
    invariants: list
    cyclic: bool
    generated_by_zero_one: bool
    cusp_module_length: int
    cusp_generated_by_zero_one: bool
    denominator_exponent: int

    @property
    def order_exponent(self) -> int:
        return self.length


def congruence_module(space: SymbolSpace, theta: DirichletCharacter,
                      bound: int = DEFAULT_HECKE_BOUND) -> CongruenceModule:
    """(s(W) + W_c) / W_c for W the localized ordinary plus theta-sector of
    relative homology, and whether the class of s of the projection of [0:1]
    generates it (as a Hecke module)."""
    p, K, q = space.p, space.K, space.q
    W, Pi = local_sector(space, theta, bound, +1)
    if W.dim == 0:
        return CongruenceModule(0, [], True, True, 0, True, 0)
    md = ManinDrinfeld(space, W)
    f = md.f
    Kp = md.precision
    if Kp <= f:
        raise la.PrecisionError("raise the precision to resolve the congruence module")
    qp = p**Kp
    kc = md.Wc.dim
    Sp = md.scaled % qp  # W coords -> W_c coords, scaled by p^f
    eye = (p**f) * np.eye(kc, dtype=np.int64)
    Q = la.Quotient(np.concatenate([Sp, eye], axis=1), p, Kp)
    length = kc * f - Q.length
    inv = sorted(f - e for e in Q.exps if e < f) if f else []
    inv = [x for x in inv if x > 0]
    # Hecke module generated by the class of s(x0)
    x0 = la.matmul(Pi, space.symbol(0, 1)[:, None], q)[:, 0]
    ops = [W.restrict(g) for _, g in eisenstein_generators(space, bound)]
    ops += [W.restrict(space.diamond(j)) for j in _diamond_generators(space)]
    span = hecke_span(W.coords(x0)[:, None], ops, p, K)
    Q0 = la.Quotient(np.concatenate([la.matmul(md.scaled, span, q) % qp, eye], axis=1), p, Kp)
    gen_len = kc * f - Q0.length
    # localized cusp module and the boundary of x0
    dW = la.matmul(space.delta, W.B, q)
    cusp_all = hecke_span(dW, [], p, K)
    cusp_len = la.Quotient(cusp_all, p, K)
    total_cusp = dW.shape[0] * K - cusp_len.length
    d0 = la.matmul(dW, hecke_span(W.coords(x0)[:, None], ops, p, K), q)
    gen_cusp = dW.shape[0] * K - la.Quotient(d0, p, K).length
    return CongruenceModule(length=int(length), invariants=inv, cyclic=len(inv) <= 1,
                            generated_by_zero_one=(gen_len == length),
                            cusp_module_length=int(total_cusp),
                            cusp_generated_by_zero_one=(gen_cusp == total_cusp),
                            denominator_exponent=f)


def _diamond_generators(space: SymbolSpace) -> list[int]:
    from .padic import unit_group
    gens, _, _ = unit_group(space.M)
    return [int(g) for g in gens]


@dataclass
class NontrivialityWitness:
    theta: str
    bernoulli_valuation: int
    bernoulli_divisible: bool
    locus_rank: int
    locus_nonzero: bool

    @property
    def agree(self) -> bool:
        return self.bernoulli_divisible == self.locus_nonzero


def check_eisenstein_nontriviality(N: int, p: int, theta: DirichletCharacter, K: int = 3,
                                   r: int = 1, bound: int = DEFAULT_HECKE_BOUND) -> NontrivialityWitness:
    space = build_symbol_space(N, p, r, K)
    _, val = bernoulli1(theta, p, K)
    locus = m_localize(space, theta, bound)
    return NontrivialityWitness(theta=theta_label(theta, p), bernoulli_valuation=int(val),
                                bernoulli_divisible=val > 0, locus_rank=locus.rank,
                                locus_nonzero=locus.rank > 0)
