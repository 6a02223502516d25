"""Maximal order by the round-2 algorithm (Zassenhaus / Pohst–Zassenhaus).

For every prime p with p² dividing the discriminant of the current order,
replace O by the multiplier ring of its p-radical until it stops growing.
Orders are stored as (B, den): ω_i = (Σ_j B[i][j] θ^j) / den.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd

import sympy

from ..exactnum.linalg import det, hnf_rows, inverse_rational, left_kernel_mod_p
from .algebra import lattice_from_mod_p, mul, radical_mod_p


def poly_discriminant(f: list) -> int:
    x = sympy.Symbol("x")
    return int(sympy.discriminant(sympy.Poly(f, x)))


def power_basis_mult(f: list, a: list, b: list) -> list:
    """Product of two power-basis vectors (low degree first) mod the monic f (high first)."""
    n = len(f) - 1
    prod = [0] * (2 * n - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    prod[i + j] += x * y
    for k in range(2 * n - 2, n - 1, -1):
        c = prod[k]
        if c:
            prod[k] = 0
            for t in range(1, n + 1):
                prod[k - t] -= c * f[t]
    return prod[:n]


def _adjugate(B: list) -> tuple:
    """(Adj, d) with B · Adj = d · I, integers."""
    d = det(B)
    inv = inverse_rational(B)
    adj = [[int(x * d) for x in r] for r in inv]
    return adj, d


def _int_basis(basis_rows) -> tuple:
    den = 1
    for r in basis_rows:
        for x in r:
            den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    return [[int(Fraction(x) * den) for x in r] for r in basis_rows], den


def mult_table(f: list, basis_rows) -> list:
    """Integer multiplication table of the order with the given ℚ-basis rows."""
    B, den = _int_basis(basis_rows)
    return _mult_table_int(f, B, den)


def _mult_table_int(f, B, den):
    n = len(B)
    adj, d = _adjugate(B)
    scale = den * d
    T = []
    for i in range(n):
        row = []
        for j in range(n):
            v = power_basis_mult(f, B[i], B[j])
            c = []
            for m in range(n):
                s = sum(v[k] * adj[k][m] for k in range(n) if v[k])
                q, r = divmod(s, scale)
                if r:
                    raise ArithmeticError("basis does not span a ring")
                c.append(q)
            row.append(c)
        T.append(row)
    return T


def _coords_in(H, adj, d, v):
    """Coordinates of v on the rows of H (exact)."""
    n = len(H)
    out = []
    for m in range(n):
        s = sum(v[k] * adj[k][m] for k in range(n) if v[k])
        q, r = divmod(s, d)
        if r:
            raise ArithmeticError("vector not in lattice")
        out.append(q)
    return out


def enlarge_at(f: list, B: list, den: int, p: int):
    """One round-2 step at p; returns (B', den') for a strictly larger order, or None."""
    n = len(B)
    T = _mult_table_int(f, B, den)
    one = _coords_in(B, *_adjugate(B), [den] + [0] * (n - 1))
    rad = radical_mod_p(T, p, one)
    H = lattice_from_mod_p(rad, p, n)  # I_p in O-coordinates
    hadj, hd = _adjugate(H)
    # u ↦ (u·h_k on the I_p basis) mod p, for all k
    big = [[] for _ in range(n)]
    for h in H:
        for i in range(n):
            e = [0] * n
            e[i] = 1
            v = mul(T, e, h)
            big[i].extend(c % p for c in _coords_in(H, hadj, hd, v))
    ker = left_kernel_mod_p(big, p)
    U = lattice_from_mod_p(ker, p, n)
    if abs(det(U)) == p ** n:
        return None
    # new basis rows: (U/p)·(B/den) = (U·B) / (p·den)
    newB = [[sum(U[r][k] * B[k][m] for k in range(n)) for m in range(n)] for r in range(n)]
    return _normalize(newB, p * den)


def _normalize(B, den):
    g = den
    for r in B:
        for x in r:
            g = gcd(g, x)
    B = [[x // g for x in r] for r in B]
    den //= g
    return _hnf(B), den


def _hnf(B):
    n = len(B)
    rev = [list(reversed(r)) for r in B]
    H = hnf_rows(rev, n)
    return [list(reversed(r)) for r in reversed(H)]


def round2(f: list, disc: int | None = None, start=None) -> tuple:
    """Return (integral basis rows over the power basis as Fractions, index [O_K : ℤ[θ]], disc(f)).

    ``start`` optionally gives a known order (rows of Fractions) to begin with.
    """
    n = len(f) - 1
    d = poly_discriminant(f) if disc is None else disc
    if start is None:
        B, den = [[int(i == j) for j in range(n)] for i in range(n)], 1
    else:
        B, den = _int_basis(start)
        B, den = _normalize(B, den)
    idx = Fraction(den ** n, abs(det(B)))
    assert idx.denominator == 1
    dO = d // int(idx) ** 2
    for p, k in sorted(sympy.factorint(abs(dO)).items()):
        if k < 2:
            continue
        while True:
            new = enlarge_at(f, B, den, p)
            if new is None:
                break
            B, den = new
    index = Fraction(den ** n, abs(det(B)))
    assert index.denominator == 1
    rows = [[Fraction(x, den) for x in r] for r in B]
    return rows, int(index), d
