"""Intersection pairing on H_1(X_1(M)) and the pairings built from it.

The Farey tessellation descends to a triangulation of X_1(M): vertices are
cusps, oriented edges are Manin symbols X(c, d) = g{0, oo} (g with bottom row
(c, d)), and reversing an edge is X(c, d) -> X(d, -c).  For an edge e from
alpha = g(0) to beta = g(oo) the triangle on its left is g(0, oo, -1), whose
counterclockwise boundary is

    X(c, d) [alpha -> beta], X(c - d, c) [beta -> g(-1)], X(-d, c - d) [g(-1) -> alpha],

and the triangle on its right is the left triangle of the reversed edge.

The dual graph has one vertex per triangle and one edge per unoriented
primal edge, crossing it from right to left.  A dual cycle z meets a
relative class x in sum_e x_e z_e, which is the Lefschetz pairing
H_1(X, cusps) x H_1(X - cusps).  To pair two cuspidal classes x, y we lift y
to a dual cycle: each dual edge is pushed onto primal edges inside its two
triangles (from a chosen corner of the right triangle to a chosen corner of
the left one), which gives a linear map J from dual chains to relative
homology, and we solve J z = y with z a dual cycle.  With these orientations
an edge crossed from right to left counts +1; this fixes the global sign.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

import numpy as np

from . import linalg as la
from .hecke import Subspace, ordinary_space
from .manin import SymbolSpace, build_symbol_space
from .padic import DomainError, GroupRingElem, char_ring


def _norm(c: int, d: int, M: int):
    """Key of an oriented edge: (c, d) and (-c, -d) are the same edge."""
    a = (c % M, d % M)
    b = (-c % M, -d % M)
    return min(a, b)


def _next_ccw(c: int, d: int, M: int):
    return _norm(c - d, c, M)


class Triangulation:
    """Edges, triangles and the dual-graph lift for a SymbolSpace."""

    def __init__(self, space: SymbolSpace):
        self.space = space
        M = space.M
        q = space.q
        edges: dict = {}  # oriented key -> (edge index, sign)
        reps = []
        for (u, v) in space.pairs:
            k = _norm(u, v, M)
            if k in edges:
                continue
            rk = _norm(v, -u, M)
            i = len(reps)
            reps.append(k)
            edges[k] = (i, 1)
            edges.setdefault(rk, (i, -1))
        self.edges = edges
        self.edge_reps = reps
        faces: dict = {}  # canonical oriented edge of a triangle -> face index
        face_of: dict = {}  # oriented edge -> face on its left
        for k in list(edges):
            if k in face_of:
                continue
            k1 = _next_ccw(*k, M)
            k2 = _next_ccw(*k1, M)
            canon = min(k, k1, k2)
            f = faces.setdefault(canon, len(faces))
            for kk in (k, k1, k2):
                face_of[kk] = f
        self.faces = faces
        self.face_of = face_of
        self.face_canon = {f: k for k, f in faces.items()}
        ne, nf = len(reps), len(faces)
        # dual boundary: dual edge of e goes from right(e) to left(e)
        D = np.zeros((nf, ne), dtype=np.int64)
        J = np.zeros((space.rank, ne), dtype=np.int64)
        E = space.E
        idx = space.index

        def sym(key):
            return E[:, idx[key]]

        for i, (c, d) in enumerate(reps):
            left = face_of[(c, d)]
            right = face_of[_norm(d, -c, M)]
            D[left, i] += 1
            D[right, i] -= 1
            col = np.zeros(space.rank, dtype=np.int64)
            # right triangle: alpha -> gR [X(c+d, d)], gR -> beta [X(c, c+d)], beta -> alpha [X(d, -c)]
            e1, e2, e0 = _norm(c + d, d, M), _norm(c, c + d, M), _norm(d, -c, M)
            cr = self.face_canon[right]
            if cr == e0:  # corner beta: go beta -> alpha
                col += sym(e0)
            elif cr == e2:  # corner gR: go back along alpha -> gR
                col -= sym(e1)
            # left triangle: alpha -> beta [X(c, d)], beta -> gL [X(c-d, c)], gL -> alpha [X(-d, c-d)]
            f0, f1, f2 = _norm(c, d, M), _norm(c - d, c, M), _norm(-d, c - d, M)
            cl = self.face_canon[left]
            if cl == f1:  # corner beta
                col += sym(f0)
            elif cl == f2:  # corner gL
                col -= sym(f2)
            J[:, i] = col % q
        self.dual_boundary = D % q
        self.J = J
        # chain of each basis symbol on the edge set
        X = np.zeros((ne, space.rank), dtype=np.int64)
        for j, (u, v) in enumerate(space.basis_pairs):
            i, s = edges[_norm(u, v, M)]
            X[i, j] = s
        self.basis_chains = X % q
        self._solver = None

    def chain(self, x: np.ndarray) -> np.ndarray:
        """An edge chain representing the relative class x."""
        return la.matmul(self.basis_chains, x, self.space.q)

    def dual_lift(self, Y: np.ndarray) -> np.ndarray:
        """Dual cycles z with J z = y for each cuspidal column y of Y."""
        sp = self.space
        if self._solver is None:
            A = np.concatenate([self.J, self.dual_boundary], axis=0)
            self._solver = la.Solver(A, sp.p, sp.K)
        rhs = np.concatenate([Y, np.zeros((self.dual_boundary.shape[0], Y.shape[1]), dtype=np.int64)], axis=0)
        z = self._solver(rhs)
        if z is None:
            raise DomainError("class is not cuspidal")
        return z


_TRI: dict = {}


def triangulation(space: SymbolSpace) -> Triangulation:
    key = (space.N, space.p, space.r, space.K)
    if key not in _TRI:
        _TRI[key] = Triangulation(space)
    return _TRI[key]


def intersection_matrix(space: SymbolSpace, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """I(x_i, y_j) for cuspidal columns x_i of X and y_j of Y, mod p^K."""
    t = triangulation(space)
    q = space.q
    for Z in (X, Y):
        if np.any(la.matmul(space.delta, Z, q)):
            raise DomainError("intersection pairing needs cuspidal classes")
    z = t.dual_lift(Y)
    return la.matmul(t.chain(X).T.copy(), z, q)


def intersection_pairing(space: SymbolSpace, x: np.ndarray, y: np.ndarray) -> int:
    return int(intersection_matrix(space, x[:, None], y[:, None])[0, 0])


@dataclass
class PairingMatrix:
    """Gram matrix of a pairing on a basis; twist records the operators
    applied to the second argument."""

    gram: np.ndarray
    basis: np.ndarray
    p: int
    K: int
    twist: tuple = field(default=())

    @property
    def det_valuation(self) -> int:
        if self.gram.shape[0] == 0:
            return 0
        return la.det_valuation(self.gram, self.p, self.K)

    @property
    def perfect(self) -> bool:
        return self.gram.shape[0] == 0 or la.is_invertible(self.gram, self.p)

    def to_dict(self) -> dict:
        return {"gram": self.gram.tolist(), "p": self.p, "K": self.K, "twist": list(self.twist),
                "perfect": self.perfect}


def cuspidal_gram(space: SymbolSpace) -> PairingMatrix:
    C = space.cuspidal
    return PairingMatrix(intersection_matrix(space, C, C), C, space.p, space.K)


def twist_operator(space: SymbolSpace, r: int | None = None) -> np.ndarray:
    """w_M U_p^r, the operator applied to the second argument of (x, y)_r."""
    r = space.r if r is None else r
    q = space.q
    op = space.atkin_lehner()
    if r:
        op = la.matmul(op, la.matpow(space.U(space.p), r, q), q)
    return op


def twisted_pairing_matrix(space: SymbolSpace, X: np.ndarray, Y: np.ndarray, r: int | None = None) -> np.ndarray:
    """(x_i, y_j)_r = I(x_i, w_M U_p^r y_j)."""
    return intersection_matrix(space, X, la.matmul(twist_operator(space, r), Y, space.q))


def twisted_pairing(space: SymbolSpace, x: np.ndarray, y: np.ndarray, r: int | None = None) -> int:
    return int(twisted_pairing_matrix(space, x[:, None], y[:, None], r)[0, 0])


def ordinary_gram(space: SymbolSpace, r: int | None = None) -> PairingMatrix:
    """Twisted pairing on a basis of the ordinary cuspidal part."""
    W = ordinary_space(space, cuspidal=True)
    r = space.r if r is None else r
    G = twisted_pairing_matrix(space, W.B, W.B, r)
    return PairingMatrix(G, W.B, space.p, space.K, twist=("w", f"U{space.p}^{r}"))


def adjointness_defect(space: SymbolSpace, op: np.ndarray, W: Subspace | None = None,
                       r: int | None = None) -> np.ndarray:
    """(T x, y)_r - (x, T y)_r on a basis of W (default: ordinary cuspidal)."""
    if W is None:
        W = ordinary_space(space, cuspidal=True)
    q = space.q
    TB = la.matmul(op, W.B, q)
    return (twisted_pairing_matrix(space, TB, W.B, r) - twisted_pairing_matrix(space, W.B, TB, r)) % q


def lambda_layer_pairing(space: SymbolSpace, x: np.ndarray, y: np.ndarray) -> GroupRingElem:
    """sum over j in (Z/M)^x of (x, <j^-1> y)_r [j], an element of
    Z/p^K[(Z/M)^x] (coefficient of [j] at position j)."""
    M, q = space.M, space.q
    R = char_ring(space.p, space.K, 1)
    coeffs = np.zeros((M, R.dim), dtype=np.int64)
    units = [j for j in range(1, M) if gcd(j, M) == 1]
    Ys = np.stack([la.matmul(space.diamond(pow(j, -1, M)), y[:, None], q)[:, 0] for j in units], axis=1)
    vals = twisted_pairing_matrix(space, x[:, None], Ys)[0]
    for j, v in zip(units, vals):
        coeffs[j, 0] = v
    return GroupRingElem(M, R, coeffs, star=False)


def level_compatibility(N: int, p: int, r: int, K: int, validate: bool = True):
    """Both sides of (x_{r+1}, sum_k <1 + k N p^r> y_{r+1})_{r+1} = (x_r, y_r)_r
    on a basis of the ordinary cuspidal part at level N p^(r+1), where x_r is
    the image of x_{r+1} at level N p^r.  Returns (lhs, rhs) Gram matrices."""
    hi = build_symbol_space(N, p, r + 1, K, validate)
    lo = build_symbol_space(N, p, r, K, validate)
    q = hi.q
    W = ordinary_space(hi, cuspidal=True).B
    S = np.zeros((hi.rank, hi.rank), dtype=np.int64)
    for k in range(p):
        S = (S + hi.diamond(1 + k * N * p**r)) % q
    lhs = twisted_pairing_matrix(hi, W, la.matmul(S, W, q), r + 1)
    P = hi.pushforward_matrix(lo)
    PW = la.matmul(P, W, q)
    rhs = twisted_pairing_matrix(lo, PW, PW, r)
    return lhs, rhs
