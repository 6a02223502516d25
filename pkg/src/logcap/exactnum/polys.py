"""Dense integer polynomials (high degree first, sympy ``dup`` order).

Factoring over ℚ and 𝔽_p and multifactor Hensel lifting are delegated to
sympy's low-level routines; characteristic polynomials are computed here by
Berkowitz's division-free algorithm so they stay exact over any ring ℤ/m.
"""
from __future__ import annotations

from dataclasses import dataclass

import sympy
from sympy import ZZ
from sympy.polys.factortools import dup_zz_hensel_lift
from sympy.polys.galoistools import gf_factor

from .padic import PrecisionError


def strip(f: list) -> list:
    i = 0
    while i < len(f) - 1 and f[i] == 0:
        i += 1
    return list(f[i:])


def degree(f: list) -> int:
    f = strip(f)
    return -1 if f == [0] else len(f) - 1


def pmul(f: list, g: list, mod: int | None = None) -> list:
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    if mod is not None:
        out = [c % mod for c in out]
    return strip(out)


def prod_mod(fs, mod: int | None = None) -> list:
    out = [1]
    for f in fs:
        out = pmul(out, f, mod)
    return out


def peval(f: list, x):
    acc = 0
    for c in f:
        acc = acc * x + c
    return acc


def charpoly(M: list, mod: int | None = None) -> list:
    """det(x·I − M) by Berkowitz's algorithm (no divisions)."""
    n = len(M)
    red = (lambda v: v % mod) if mod else (lambda v: v)
    p = [1]
    for k in range(n):
        a = M[k][k]
        R = M[k][:k]
        S = [M[i][k] for i in range(k)]
        q = [1, red(-a)]
        v = S
        for _ in range(k):
            q.append(red(-sum(r * x for r, x in zip(R, v))))
            v = [red(sum(M[i][j] * v[j] for j in range(k))) for i in range(k)]
        new = []
        for i in range(k + 2):
            new.append(red(sum(q[i - j] * p[j] for j in range(len(p)) if 0 <= i - j < len(q))))
        p = new
    return p


def factor_over_q(f: list) -> list:
    """Irreducible monic factors (with multiplicity) of a monic integer polynomial."""
    x = sympy.Symbol("x")
    P = sympy.Poly(f, x, domain="ZZ")
    _, facs = P.factor_list()
    return [([int(c) for c in g.all_coeffs()], m) for g, m in facs]


def factor_mod_p(f: list, p: int) -> list:
    """Factorisation over 𝔽_p as [(monic factor, multiplicity)]."""
    _, facs = gf_factor(ZZ.map([c % p for c in f]), p, ZZ)
    return [([int(c) for c in g], m) for g, m in facs]


def is_squarefree_mod_p(f: list, p: int) -> bool:
    return all(m == 1 for _, m in factor_mod_p(f, p))


def hensel_lift(f: list, p: int, N: int) -> list:
    """Lift the factorisation of a monic f, squarefree mod p, to mod p^N."""
    facs = factor_mod_p(f, p)
    if any(m > 1 for _, m in facs):
        raise PrecisionError("not squarefree mod p; plain Hensel lifting does not apply")
    if len(facs) == 1:
        return [[c % p ** N for c in f]]
    lifted = dup_zz_hensel_lift(ZZ(p), ZZ.map(f), [ZZ.map(g) for g, _ in facs], N, ZZ)
    return [[int(c) % p ** N for c in g] for g in lifted]


@dataclass(frozen=True)
class LocalFactor:
    """An irreducible factor of f over ℚ_ℓ, known modulo ℓ^precision."""

    coefficients: tuple
    e: int
    f: int
    precision: int

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1


def hensel_factor(f: list, ell: int, N: int) -> list:
    """Factor a monic squarefree polynomial over ℚ_ℓ modulo ℓ^N.

    Each irreducible factor over ℚ is handled through the prime decomposition
    of ℓ in the field it defines: the ℓ-adic factor attached to 𝔩 is the
    characteristic polynomial of θ on the 𝔩-component of O_K ⊗ ℤ_ℓ.  When the
    factor is squarefree mod ℓ the result is cross-checked against plain
    Hensel lifting.
    """
    from ..numberfield.field import NumberField  # local import: numberfield builds on exactnum

    f = [int(c) for c in f]
    if f[0] != 1:
        raise ValueError("hensel_factor expects a monic polynomial")
    out = []
    for g, mult in factor_over_q(f):
        if mult > 1:
            raise ValueError("polynomial is not squarefree")
        if len(g) == 2:
            out.append(LocalFactor(tuple(c % ell ** N for c in g), 1, 1, N))
            continue
        K = NumberField.from_polynomial(g)
        locs = [LocalFactor(tuple(K.local_charpoly(P, N)), P.e, P.f, N) for P in K.primes_above(ell)]
        if is_squarefree_mod_p(g, ell):
            plain = sorted(tuple(h) for h in hensel_lift(g, ell, N))
            if plain != sorted(lf.coefficients for lf in locs):
                raise PrecisionError("ℓ-adic factorisation routes disagree")
        out.extend(locs)
    if prod_mod([lf.coefficients for lf in out], ell ** N) != [c % ell ** N for c in f]:
        raise PrecisionError("ℓ-adic factors do not multiply back to f")
    return out
