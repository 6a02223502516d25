"""Small-element search in O_K: LLL reduction for T2 and Fincke–Pohst enumeration."""
from __future__ import annotations

import math

import mpmath
from sympy import ZZ
from sympy.polys.matrices import DomainMatrix

SCALE_BITS = 48


def minkowski_rows(K, rows, dps: int = 40) -> list:
    """Real Minkowski images (length n) of integral ω-coordinate vectors.

    Complex places contribute √2·Re and √2·Im, so the squared length is T2.
    """
    M = K.basis_embeddings(dps)
    r1 = K.signature[0]
    out = []
    with mpmath.workdps(dps):
        s2 = mpmath.sqrt(2)
        for v in rows:
            vals = [sum(mpmath.mpf(c) * w for c, w in zip(v, emb) if c) for emb in M]
            row = [mpmath.re(z) for z in vals[:r1]]
            for z in vals[r1:]:
                row += [s2 * mpmath.re(z), s2 * mpmath.im(z)]
            out.append(row)
    return out


def lll_reduce(K, rows) -> list:
    """LLL-reduce a ℤ-basis (ω coordinates) of a full-rank lattice in O_K for T2.

    The embedding is rounded to SCALE_BITS bits; the transform is unimodular
    whatever the rounding, so the output always spans the same lattice.
    """
    n = len(rows)
    if n == 1:
        return [list(rows[0])]
    emb = minkowski_rows(K, rows)
    scale = 2 ** SCALE_BITS
    norms = [max(abs(x) for x in r) for r in emb]
    top = max(norms)
    s = scale / float(top) if top > 0 else scale
    ints = [[int(mpmath.nint(x * s)) for x in r] for r in emb]
    A = DomainMatrix([[ZZ(x) for x in r] for r in ints], (n, n), ZZ)
    _, T = A.lll_transform()
    Tm = [[int(x) for x in r] for r in T.to_Matrix().tolist()]
    return [[sum(Tm[i][k] * rows[k][j] for k in range(n)) for j in range(len(rows[0]))] for i in range(n)]


def gram_matrix(K, rows) -> list:
    emb = minkowski_rows(K, rows)
    n = len(rows)
    return [[float(sum(a * b for a, b in zip(emb[i], emb[j]))) for j in range(n)] for i in range(n)]


def _cholesky_q(G):
    """Quadratic-form decomposition q_ii, q_ij (Fincke–Pohst convention)."""
    n = len(G)
    q = [[float(G[i][j]) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= q[k][i] * q[i][l]
    return q


def fincke_pohst(G, bound: float, limit: int = 200000) -> list:
    """All nonzero integer x (up to sign) with xᵀGx ≤ bound."""
    n = len(G)
    q = _cholesky_q(G)
    x = [0] * n
    T = [0.0] * n
    U = [0.0] * n
    UB = [0] * n
    out = []
    i = n - 1
    T[i] = bound
    U[i] = 0.0
    eps = 1e-9

    def bounds(i):
        z = math.sqrt(max(T[i], 0.0) / q[i][i] + eps)
        UB[i] = math.floor(z - U[i])
        x[i] = math.ceil(-z - U[i]) - 1

    bounds(i)
    while True:
        x[i] += 1
        if x[i] > UB[i]:
            i += 1
            if i >= n:
                break
            continue
        if i > 0:
            T[i - 1] = T[i] - q[i][i] * (x[i] + U[i]) ** 2
            i -= 1
            U[i] = sum(q[i][j] * x[j] for j in range(i + 1, n))
            bounds(i)
            continue
        if not any(x):
            continue
        out.append(list(x))
        if len(out) > limit:
            raise OverflowError("too many short vectors")
    # keep one of ±x
    seen, res = set(), []
    for v in out:
        key = tuple(v)
        neg = tuple(-c for c in v)
        if neg in seen:
            continue
        seen.add(key)
        res.append(v)
    return res
