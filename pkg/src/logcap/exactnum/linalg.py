"""Integer linear algebra: Smith and Hermite normal forms, kernels, determinants.

Matrices are plain lists of rows of Python ints.  Everything is exact; the
modular SNF works over ℤ/ℓ^N with pivots of minimal valuation.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .padic import vp

Matrix = list  # list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(M: Matrix) -> Matrix:
    return [list(r) for r in zip(*M)] if M else []


def matmul(A: Matrix, B: Matrix) -> Matrix:
    Bt = transpose(B)
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def copy(M: Matrix) -> Matrix:
    return [list(r) for r in M]


# ---------------------------------------------------------------------------
# Smith normal form over ℤ
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SNFResult:
    """``left · M · right == diag(diagonal)`` (padded with zeros)."""

    diagonal: tuple
    left: tuple
    right: tuple
    modulus: int | None = None

    @property
    def nontrivial(self) -> tuple:
        """Elementary divisors different from 1 (and from 0 mod the modulus)."""
        return tuple(d for d in self.diagonal if d != 1)


def _row_op(M, i, j, a, b, c, d):
    """(row_i, row_j) <- (a·row_i + b·row_j, c·row_i + d·row_j)."""
    ri, rj = M[i], M[j]
    M[i] = [a * x + b * y for x, y in zip(ri, rj)]
    M[j] = [c * x + d * y for x, y in zip(ri, rj)]


def _col_op(M, i, j, a, b, c, d):
    for r in M:
        x, y = r[i], r[j]
        r[i] = a * x + b * y
        r[j] = c * x + d * y


def _xgcd(a: int, b: int):
    """(g, s, t) with s·a + t·b = g = gcd(a, b) ≥ 0.

    When a | b the trivial combination (±1, 0) is returned, so that pivot
    elimination never swaps equal-size entries back and forth.
    """
    if a and b % a == 0:
        return (abs(a), 1 if a > 0 else -1, 0)
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def smith_normal_form(M: Matrix, modulus: int | None = None, transforms: bool = True) -> SNFResult:
    """Smith normal form of an integer matrix.

    With ``modulus = ℓ^N`` the computation runs over ℤ/ℓ^N: diagonal entries
    are powers of ℓ, and an entry equal to the modulus stands for "0 at this
    precision".  The transforms are then unimodular mod ℓ^N.
    """
    if modulus is not None:
        return _snf_mod(M, modulus, transforms)
    m = len(M)
    n = len(M[0]) if m else 0
    A = copy(M)
    L = identity(m)
    R = identity(n)
    t = 0
    while t < min(m, n):
        # pivot: smallest nonzero absolute value in the remaining block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (best is None or abs(A[i][j]) < best[0]):
                    best = (abs(A[i][j]), i, j)
        if best is None:
            break
        _, i, j = best
        A[t], A[i] = A[i], A[t]
        L[t], L[i] = L[i], L[t]
        for r in A:
            r[t], r[j] = r[j], r[t]
        for r in R:
            r[t], r[j] = r[j], r[t]
        while True:
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    g, s, u = _xgcd(A[t][t], A[i][t])
                    a, b = A[t][t] // g, A[i][t] // g
                    _row_op(A, t, i, s, u, -b, a)
                    _row_op(L, t, i, s, u, -b, a)
            for j in range(t + 1, n):
                if A[t][j]:
                    g, s, u = _xgcd(A[t][t], A[t][j])
                    a, b = A[t][t] // g, A[t][j] // g
                    _col_op(A, t, j, s, u, -b, a)
                    _col_op(R, t, j, s, u, -b, a)
                    done = False
            if any(A[i][t] for i in range(t + 1, m)):
                continue
            if done:
                # divisibility: fold in any entry not divisible by the pivot
                p = A[t][t]
                bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p), None)
                if bad is None:
                    break
                i, _ = bad
                A[t] = [x + y for x, y in zip(A[t], A[i])]
                L[t] = [x + y for x, y in zip(L[t], L[i])]
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            L[t] = [-x for x in L[t]]
        t += 1
    diag = tuple(A[i][i] for i in range(min(m, n)))
    if not transforms:
        return SNFResult(diag, (), ())
    return SNFResult(diag, tuple(map(tuple, L)), tuple(map(tuple, R)))


def _snf_mod(M: Matrix, mod: int, transforms: bool) -> SNFResult:
    p = _prime_of(mod)
    m = len(M)
    n = len(M[0]) if m else 0
    A = [[x % mod for x in r] for r in M]
    L = identity(m)
    R = identity(n)
    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j]:
                    v = vp(A[i][j], p)
                    if best is None or v < best[0]:
                        best = (v, i, j)
                        if v == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        v, i, j = best
        A[t], A[i] = A[i], A[t]
        L[t], L[i] = L[i], L[t]
        for r in A:
            r[t], r[j] = r[j], r[t]
        for r in R:
            r[t], r[j] = r[j], r[t]
        piv = A[t][t]
        pv = p ** v
        inv = pow(piv // pv, -1, mod)
        # normalise pivot to p^v
        A[t] = [x * inv % mod for x in A[t]]
        L[t] = [x * inv % mod for x in L[t]]
        for i in range(t + 1, m):
            if A[i][t]:
                c = A[i][t] // pv
                A[i] = [(x - c * y) % mod for x, y in zip(A[i], A[t])]
                L[i] = [(x - c * y) % mod for x, y in zip(L[i], L[t])]
        for j in range(t + 1, n):
            if A[t][j]:
                c = A[t][j] // pv
                for r in A:
                    r[j] = (r[j] - c * r[t]) % mod
                for r in R:
                    r[j] = (r[j] - c * r[t]) % mod
    diag = []
    for i in range(min(m, n)):
        d = A[i][i] % mod
        diag.append(mod if d == 0 else p ** vp(d, p))
    if not transforms:
        return SNFResult(tuple(diag), (), (), mod)
    return SNFResult(tuple(diag), tuple(map(tuple, L)), tuple(map(tuple, R)), mod)


def _prime_of(mod: int) -> int:
    p = 2
    while mod % p:
        p += 1
    q = mod
    while q % p == 0:
        q //= p
    if q != 1:
        raise ValueError("modulus must be a prime power")
    return p


def elementary_divisors(M: Matrix, ncols: int | None = None) -> list:
    """Invariant factors of the cokernel ℤ^ncols / rowspan(M), including zeros."""
    ncols = ncols if ncols is not None else (len(M[0]) if M else 0)
    if not M:
        return [0] * ncols
    d = list(smith_normal_form(M, transforms=False).diagonal)
    d += [0] * (ncols - len(d))
    return d


# ---------------------------------------------------------------------------
# Hermite normal form and kernels
# ---------------------------------------------------------------------------

def hnf_rows(M: Matrix, ncols: int | None = None) -> Matrix:
    """Row-style Hermite normal form (upper triangular, nonzero rows only)."""
    ncols = ncols if ncols is not None else (len(M[0]) if M else 0)
    A = [list(r) for r in M if any(r)]
    out = []
    col = 0
    while A and col < ncols:
        nz = [r for r in A if r[col]]
        if not nz:
            col += 1
            continue
        rest = [r for r in A if not r[col]]
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            new = [piv]
            for r in nz[1:]:
                q = r[col] // piv[col]
                r2 = [x - q * y for x, y in zip(r, piv)]
                if r2[col]:
                    new.append(r2)
                elif any(r2):
                    rest.append(r2)
            nz = new
        piv = nz[0]
        if piv[col] < 0:
            piv = [-x for x in piv]
        out.append(piv)
        A = rest
        col += 1
    # reduce above-pivot entries
    for i, r in enumerate(out):
        c = next(j for j, x in enumerate(r) if x)
        for k in range(i):
            q = out[k][c] // r[c]
            if q:
                out[k] = [x - q * y for x, y in zip(out[k], r)]
    return out


def integer_kernel(M: Matrix) -> Matrix:
    """Basis (as rows) of {x ∈ ℤ^m : x · M = 0} for an m×n matrix M."""
    m = len(M)
    if m == 0:
        return []
    n = len(M[0])
    aug = [list(M[i]) + [int(i == j) for j in range(m)] for i in range(m)]
    H = hnf_rows(aug, n + m)
    return [r[n:] for r in H if not any(r[:n])]


def kernel_mod_p(M: Matrix, p: int) -> Matrix:
    """Basis of the right kernel {x : M x = 0} over F_p, as a list of vectors."""
    rows = [[x % p for x in r] for r in M]
    n = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(n):
        k = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if k is None:
            continue
        rows[r], rows[k] = rows[k], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [x * inv % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * n
        v[fc] = 1
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][fc] % p
        basis.append(v)
    return basis


def rank_mod_p(M: Matrix, p: int) -> int:
    if not M:
        return 0
    return len(M[0]) - len(kernel_mod_p(M, p))


def solve_mod_p(M: Matrix, b: list, p: int):
    """One solution x of M x = b over F_p, or None."""
    n = len(M[0])
    aug = [list(r) + [bi] for r, bi in zip(M, b)]
    ker = kernel_mod_p(aug, p)
    for v in ker:
        if v[n] % p:
            inv = pow(-v[n], -1, p)
            return [x * inv % p for x in v[:n]]
    return None


def det(M: Matrix) -> int:
    """Determinant by fraction-free Bareiss elimination."""
    n = len(M)
    if n == 0:
        return 1
    A = copy(M)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            s = next((i for i in range(k + 1, n) if A[i][k]), None)
            if s is None:
                return 0
            A[k], A[s] = A[s], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def minor_gcds(M: Matrix) -> list:
    """d_k = gcd of all k×k minors (brute force; small matrices only)."""
    from itertools import combinations

    m = len(M)
    n = len(M[0]) if m else 0
    out = []
    for k in range(1, min(m, n) + 1):
        g = 0
        for rs in combinations(range(m), k):
            for cs in combinations(range(n), k):
                g = gcd(g, det([[M[i][j] for j in cs] for i in rs]))
        out.append(g)
    return out


def inverse_rational(M: Matrix) -> Matrix:
    """Inverse over ℚ (Fractions) by Gauss–Jordan."""
    from fractions import Fraction

    n = len(M)
    A = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(M)]
    for c in range(n):
        k = next((i for i in range(c, n) if A[i][c]), None)
        if k is None:
            raise ZeroDivisionError("singular matrix")
        A[c], A[k] = A[k], A[c]
        piv = A[c][c]
        A[c] = [x / piv for x in A[c]]
        for i in range(n):
            if i != c and A[i][c]:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    return [r[n:] for r in A]


def inverse_mod(M: Matrix, mod: int) -> Matrix:
    """Inverse of a matrix invertible over ℤ/mod (mod a prime power)."""
    p = _prime_of(mod)
    n = len(M)
    A = [[x % mod for x in r] + [int(i == j) for j in range(n)] for i, r in enumerate(M)]
    for c in range(n):
        k = next((i for i in range(c, n) if A[i][c] % p), None)
        if k is None:
            raise ZeroDivisionError("matrix not invertible modulo the modulus")
        A[c], A[k] = A[k], A[c]
        inv = pow(A[c][c], -1, mod)
        A[c] = [x * inv % mod for x in A[c]]
        for i in range(n):
            if i != c and A[i][c]:
                f = A[i][c]
                A[i] = [(x - f * y) % mod for x, y in zip(A[i], A[c])]
    return [r[n:] for r in A]


def left_kernel_mod_p(M: Matrix, p: int) -> Matrix:
    """Basis of {x : x · M = 0} over F_p."""
    if not M:
        return []
    if not M[0]:
        return identity(len(M))
    return kernel_mod_p(transpose(M), p)
