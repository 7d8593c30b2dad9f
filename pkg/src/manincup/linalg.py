"""Dense exact linear algebra over Z/p^K.

Matrices are numpy int64 arrays with entries in [0, q), q = p^K < 2^31, so
elementwise products fit in a signed 64-bit word.  Matrix products split the
left factor into 16-bit limbs to keep the accumulated sums exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_MODULUS = 2**31


class PrecisionError(ArithmeticError):
    """Raised when a computation needs more p-adic digits than are available."""


def check_modulus(p: int, K: int) -> int:
    q = p**K
    if q >= MAX_MODULUS:
        raise PrecisionError(f"modulus {p}^{K} exceeds the machine-word budget")
    return q


def vp(x: int, p: int) -> int:
    """p-adic valuation of a nonzero integer (None-free: 0 maps to a large value)."""
    if x == 0:
        return 10**9
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def matmul(A: np.ndarray, B: np.ndarray, q: int) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64) % q
    B = np.asarray(B, dtype=np.int64) % q
    lo = A & 0xFFFF
    hi = A >> 16
    out = (lo @ B) % q
    if hi.any():
        out = (out + ((hi @ B) % q) * 65536) % q
    return out


def matpow(A: np.ndarray, n: int, q: int) -> np.ndarray:
    d = A.shape[0]
    result = np.eye(d, dtype=np.int64)
    base = A % q
    while n:
        if n & 1:
            result = matmul(result, base, q)
        n >>= 1
        if n:
            base = matmul(base, base, q)
    return result


def _valuation_array(A: np.ndarray, p: int, K: int) -> np.ndarray:
    """Entrywise p-adic valuation capped at K (zero entries get K)."""
    v = np.zeros(A.shape, dtype=np.int64)
    cur = A.copy()
    mask = cur != 0
    v[~mask] = K
    for _ in range(K):
        div = mask & (cur % p == 0)
        if not div.any():
            break
        v[div] += 1
        cur[div] //= p
        mask = div
    return v


@dataclass
class Smith:
    """U @ A @ V = diag(p^e_0, ..., p^e_{rank-1}, 0, ...) over Z/p^K."""

    U: np.ndarray
    V: np.ndarray
    exps: list[int]
    p: int
    K: int

    @property
    def rank(self) -> int:
        return len(self.exps)

    @property
    def q(self) -> int:
        return self.p**self.K


def smith(A: np.ndarray, p: int, K: int, track_u: bool = True, track_v: bool = True) -> Smith:
    q = p**K
    A = np.array(A, dtype=np.int64) % q
    n, k = A.shape
    U = np.eye(n, dtype=np.int64) if track_u else None
    V = np.eye(k, dtype=np.int64) if track_v else None
    exps: list[int] = []
    t = 0
    while t < min(n, k):
        sub = A[t:, t:]
        if not sub.any():
            break
        units = np.flatnonzero(sub % p)
        if len(units):
            i, j = divmod(int(units[0]), sub.shape[1])
            v = 0
        else:
            val = _valuation_array(sub, p, K)
            idx = int(np.argmin(val))
            i, j = divmod(idx, sub.shape[1])
            v = int(val[i, j])
        i += t
        j += t
        if i != t:
            A[[t, i]] = A[[i, t]]
            if U is not None:
                U[[t, i]] = U[[i, t]]
        if j != t:
            A[:, [t, j]] = A[:, [j, t]]
            if V is not None:
                V[:, [t, j]] = V[:, [j, t]]
        pv = p**v
        unit = int(A[t, t]) // pv
        uinv = pow(unit, -1, q)
        A[t] = (A[t] * uinv) % q
        if U is not None:
            U[t] = (U[t] * uinv) % q
        col = A[t + 1:, t]
        nz = np.nonzero(col)[0]
        if len(nz):
            f = (col[nz] // pv) % q
            rows = nz + t + 1
            A[rows] = (A[rows] - (f[:, None] * A[t][None, :]) % q) % q
            if U is not None:
                U[rows] = (U[rows] - (f[:, None] * U[t][None, :]) % q) % q
        row = A[t, t + 1:]
        nzc = np.nonzero(row)[0]
        if len(nzc) and V is not None:
            g = (row[nzc] // pv) % q
            cols = nzc + t + 1
            V[:, cols] = (V[:, cols] - (V[:, [t]] * g[None, :]) % q) % q
        A[t, t + 1:] = 0
        exps.append(v)
        t += 1
    return Smith(U=U, V=V, exps=exps, p=p, K=K)


def inverse(A: np.ndarray, p: int, K: int) -> np.ndarray:
    """Inverse of a square matrix invertible over Z/p^K."""
    q = p**K
    n = A.shape[0]
    M = np.concatenate([np.array(A, dtype=np.int64) % q, np.eye(n, dtype=np.int64)], axis=1)
    for c in range(n):
        piv = None
        for r in range(c, n):
            if M[r, c] % p:
                piv = r
                break
        if piv is None:
            raise ZeroDivisionError("matrix is not invertible modulo p")
        if piv != c:
            M[[c, piv]] = M[[piv, c]]
        M[c] = (M[c] * pow(int(M[c, c]), -1, q)) % q
        f = M[:, c].copy()
        f[c] = 0
        nz = np.nonzero(f)[0]
        if len(nz):
            M[nz] = (M[nz] - (f[nz, None] * M[c][None, :]) % q) % q
    return M[:, n:]


def is_invertible(A: np.ndarray, p: int) -> bool:
    if A.shape[0] != A.shape[1]:
        return False
    if A.shape[0] == 0:
        return True
    return smith(A % p, p, 1, track_u=False, track_v=False).rank == A.shape[0]


def det_valuation(A: np.ndarray, p: int, K: int) -> int:
    """p-adic valuation of det(A), capped at K (K means 'zero at this precision')."""
    if A.shape[0] == 0:
        return 0
    S = smith(A, p, K, track_u=False, track_v=False)
    if S.rank < A.shape[0]:
        return K
    return min(K, sum(S.exps))


def kernel(A: np.ndarray, p: int, K: int, strict: bool = True) -> np.ndarray:
    """Basis (columns) of the free part of ker A.  With strict=True the
    kernel must be a direct summand (all nonzero elementary divisors units)."""
    S = smith(A, p, K, track_u=False)
    if strict and any(e > 0 for e in S.exps):
        raise PrecisionError("kernel is not saturated at this precision")
    keep = [i for i, e in enumerate(S.exps) if e >= K] + list(range(S.rank, A.shape[1]))
    return S.V[:, keep] % (p**K)


def image(A: np.ndarray, p: int, K: int, strict: bool = True) -> np.ndarray:
    """Basis (columns) of the column span of A, which must be a direct summand."""
    q = p**K
    S = smith(A, p, K, track_v=False)
    if strict and any(e > 0 for e in S.exps):
        raise PrecisionError("image is not saturated at this precision")
    Uinv = inverse(S.U, p, K)
    cols = [i for i, e in enumerate(S.exps) if e < K]
    return (Uinv[:, cols] * np.array([p**S.exps[i] for i in cols], dtype=np.int64)[None, :]) % q


def left_inverse(B: np.ndarray, p: int, K: int) -> np.ndarray:
    """L with L @ B = I for a basis B of a direct summand."""
    q = p**K
    n, k = B.shape
    if k == 0:
        return np.zeros((0, n), dtype=np.int64)
    S = smith(B, p, K)
    if S.rank < k or any(e > 0 for e in S.exps):
        raise PrecisionError("columns do not span a direct summand")
    # U B V = [I; 0]  =>  (V [I 0] U) B = I
    return matmul(S.V, S.U[:k], q)


def complement(B: np.ndarray, p: int, K: int) -> np.ndarray:
    """Columns C such that [B | C] is invertible (B a summand basis)."""
    q = p**K
    n, k = B.shape
    if k == 0:
        return np.eye(n, dtype=np.int64)
    S = smith(B, p, K, track_v=False)
    if S.rank < k or any(e > 0 for e in S.exps):
        raise PrecisionError("columns do not span a direct summand")
    Uinv = inverse(S.U, p, K)
    return Uinv[:, k:] % q


class Solver:
    """Reusable solver for A x = b built from one Smith decomposition."""

    def __init__(self, A: np.ndarray, p: int, K: int):
        self.p, self.K, self.q = p, K, p**K
        self.ncols = A.shape[1]
        self.S = smith(A, p, K)

    def __call__(self, b: np.ndarray):
        """One solution x of A x = b (b may be a matrix), or None."""
        S, q = self.S, self.q
        b2 = np.asarray(b, dtype=np.int64)
        vec = b2.ndim == 1
        if vec:
            b2 = b2[:, None]
        y = matmul(S.U, b2, q)
        x = np.zeros((self.ncols, b2.shape[1]), dtype=np.int64)
        for i, e in enumerate(S.exps):
            pe = self.p**e
            if np.any(y[i] % pe):
                return None
            x[i] = (y[i] // pe) % q
        if np.any(y[S.rank:]):
            return None
        x = matmul(S.V, x, q)
        return x[:, 0] if vec else x


def solve(A: np.ndarray, b: np.ndarray, p: int, K: int):
    """One solution x of A x = b (b may be a matrix), or None."""
    return Solver(A, p, K)(b)


def restrict(op: np.ndarray, B: np.ndarray, p: int, K: int, L: np.ndarray | None = None) -> np.ndarray:
    """Matrix of op on the invariant summand spanned by the columns of B."""
    q = p**K
    if L is None:
        L = left_inverse(B, p, K)
    img = matmul(op, B, q)
    R = matmul(L, img, q)
    if np.any((matmul(B, R, q) - img) % q):
        raise ValueError("subspace is not invariant under the operator")
    return R


def charpoly(A: np.ndarray, q: int) -> list[int]:
    """Characteristic polynomial det(xI - A) mod q, coefficients from x^n down
    (division-free Berkowitz algorithm, valid over any commutative ring)."""
    A = np.asarray(A, dtype=np.int64) % q
    n = A.shape[0]
    if n == 0:
        return [1]
    # vect holds the charpoly of the leading (k x k) block, highest degree first
    vect = [1, (-int(A[0, 0])) % q]
    for k in range(1, n):
        R = A[k, :k]
        C = A[:k, k]
        Ak = A[:k, :k]
        a = int(A[k, k])
        # Toeplitz column: [1, -a, -R C, -R A C, ..., -R A^{k-1} C]
        col = [1, (-a) % q]
        vec = C.copy()
        for _ in range(k):
            col.append((-_dot(R, vec, q)) % q)
            vec = matmul(Ak, vec[:, None], q)[:, 0]
        # multiply lower-triangular Toeplitz (k+2) x (k+1) by vect
        new = []
        for i in range(k + 2):
            s = 0
            for j in range(min(i, k) + 1):
                s += col[i - j] * vect[j]
            new.append(s % q)
        vect = new
    return vect


def _dot(a: np.ndarray, b: np.ndarray, q: int) -> int:
    return int(matmul(a[None, :], b[:, None], q)[0, 0])


def polyval_matrix(coeffs: list[int], A: np.ndarray, q: int) -> np.ndarray:
    """Horner evaluation of a polynomial (highest degree first) at a matrix."""
    n = A.shape[0]
    out = np.zeros((n, n), dtype=np.int64)
    eye = np.eye(n, dtype=np.int64)
    for c in coeffs:
        out = (matmul(out, A, q) + c * eye) % q
    return out


class Quotient:
    """The quotient of (Z/p^K)^n by the column span of G, with canonical
    representatives for its elements."""

    def __init__(self, G: np.ndarray, p: int, K: int):
        self.p, self.K = p, K
        self.q = p**K
        n = G.shape[0]
        if G.shape[1] == 0:
            G = np.zeros((n, 1), dtype=np.int64)
        self._S = smith(G, p, K, track_v=False)
        self.n = n
        self.exps = list(self._S.exps) + [K] * (n - self._S.rank)
        self.mods = np.array([p**e for e in self.exps], dtype=np.int64)

    @property
    def length(self) -> int:
        """log_p of the order of the quotient."""
        return int(sum(self.exps))

    @property
    def invariants(self) -> list[int]:
        return sorted(e for e in self.exps if e > 0)

    def reduce(self, x: np.ndarray) -> np.ndarray:
        """Canonical coordinates of the class of x (vector or matrix of columns)."""
        x = np.asarray(x, dtype=np.int64)
        vec = x.ndim == 1
        y = matmul(self._S.U, x[:, None] if vec else x, self.q)
        y = y % self.mods[:, None]
        keep = [i for i, e in enumerate(self.exps) if e > 0]
        y = y[keep]
        return y[:, 0] if vec else y

    def is_zero(self, x: np.ndarray) -> bool:
        return not np.any(self.reduce(x))
