"""Finite-dimensional commutative algebras given by an integer multiplication table.

``T[i][j]`` holds the coordinates of ω_i·ω_j.  These helpers serve both the
round-2 maximal order computation and the prime decomposition in O_K/pO_K.
"""
from __future__ import annotations

from ..exactnum.linalg import hnf_rows, identity, left_kernel_mod_p


def mul(T, x, y, mod: int | None = None) -> list:
    n = len(x)
    out = [0] * n
    for i, a in enumerate(x):
        if not a:
            continue
        Ti = T[i]
        for j, b in enumerate(y):
            if not b:
                continue
            ab = a * b
            for k, t in enumerate(Ti[j]):
                if t:
                    out[k] += ab * t
    if mod is not None:
        out = [c % mod for c in out]
    return out


def mult_matrix(T, x, mod: int | None = None) -> list:
    """Matrix (rows) of y ↦ x·y: row i is x·ω_i."""
    n = len(x)
    rows = []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        rows.append(mul(T, x, e, mod))
    return rows


def power(T, x, k: int, one, mod: int | None = None) -> list:
    result = list(one)
    base = [c % mod for c in x] if mod else list(x)
    while k:
        if k & 1:
            result = mul(T, result, base, mod)
        k >>= 1
        if k:
            base = mul(T, base, base, mod)
    return result


def frobenius_matrix(T, p: int, one) -> list:
    """Rows: coordinates of ω_i^p mod p (the Frobenius is 𝔽_p-linear)."""
    n = len(one)
    rows = []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        rows.append(power(T, e, p, one, p))
    return rows


def matmul_mod(A, B, p):
    n = len(B[0])
    return [[sum(a * B[k][j] for k, a in enumerate(r) if a) % p for j in range(n)] for r in A]


def radical_mod_p(T, p: int, one) -> list:
    """𝔽_p-basis of the nilradical of O/pO: kernel of x ↦ x^(p^j), p^j ≥ n."""
    n = len(one)
    F = frobenius_matrix(T, p, one)
    G = identity(n)
    q = 1
    while q < n:
        G = matmul_mod(G, F, p)
        q *= p
    if q == 1:
        G = matmul_mod(G, F, p)
    return left_kernel_mod_p(G, p)


def lattice_from_mod_p(vectors, p: int, n: int) -> list:
    """ℤ-basis (HNF rows) of the lattice pℤ^n + span(vectors)."""
    rows = [list(v) for v in vectors] + [[p * int(i == j) for j in range(n)] for i in range(n)]
    H = hnf_rows(rows, n)
    assert len(H) == n
    return H
