"""Roots of unity and fundamental units of real quadratic fields."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

import sympy

from .lattice import fincke_pohst, gram_matrix, lll_reduce


@dataclass(frozen=True)
class UnitGroupData:
    """Generators of a (S-)unit group, or of its ℓ-adification when ``ell`` is set.

    ``torsion`` generates the roots of unity (ℓ-part only when ``ell`` is set).
    """

    generators: tuple
    torsion: object
    torsion_order: int
    rank: int
    primes: tuple = ()
    ell: int | None = None
    certificate: dict = field(default_factory=dict)


def _exact_order(x, candidates) -> int | None:
    one = x.field.from_rational(1)
    for m in candidates:
        if x ** m == one:
            return m
    return None


def roots_of_unity(K) -> tuple:
    """(w, ζ) with μ_K = ⟨ζ⟩ of order w.

    Nonzero algebraic integers with T2 = n are exactly the roots of unity, so a
    Fincke–Pohst run at T2 ≤ n + 0.01 finds them all; each is verified exactly.
    """
    def build():
        n = K.degree
        if n == 1:
            return 2, K.from_rational(-1)
        if K.signature[0] > 0:
            return 2, K.from_rational(-1)
        rows = lll_reduce(K, [[int(i == j) for j in range(n)] for i in range(n)])
        G = gram_matrix(K, rows)
        cands = sorted(m for m in range(1, 4 * n * n + 3) if n % sympy.totient(m) == 0)
        found = []
        for v in fincke_pohst(G, n + 0.01):
            x = K.element([sum(c * rows[i][j] for i, c in enumerate(v)) for j in range(n)])
            m = _exact_order(x, cands)
            if m is not None:
                found.append((m, x))
        w = 2 * len(found)
        best = max(found, key=lambda t: t[0])
        m, z = best
        if m != w:
            # ±x pairs: the element of maximal order may be −ζ with ζ of odd order
            z = -z
            m = _exact_order(z, cands)
        if m != w:
            raise ArithmeticError("roots of unity do not form a cyclic group of the expected order")
        return w, z

    return K._cached("mu", build)


def roots_of_unity_order(K, ell: int) -> tuple:
    """(ℓ-power part of |μ_K|, a generator of μ_K[ℓ^∞])."""
    w, z = roots_of_unity(K)
    a = 1
    while w % (a * ell) == 0:
        a *= ell
    return a, z ** (w // a)


def fundamental_unit_real_quadratic(d: int) -> tuple:
    """ε > 1 generating O^× / ±1 of ℚ(√d), as (a, b) with ε = a + b·w.

    w = √d if d ≢ 1 mod 4 and (1+√d)/2 otherwise.  Continued fraction of
    x0 = (b0 + √D)/2 with D the discriminant; ε is the product of the complete
    quotients over one period.
    """
    if d <= 1 or not sympy.ntheory.factor_.core(d) == d:
        raise ValueError(f"d must be a squarefree integer > 1, got {d}")
    D = d if d % 4 == 1 else 4 * d
    r = isqrt(D)
    b0 = r if (r - D) % 2 == 0 else r - 1
    # x = (P + √D)/Q, product kept as u + v√D (rationals)
    P, Q = b0, 2
    u, v = Fraction(1), Fraction(0)
    while True:
        # multiply by x = (P + √D)/Q
        u, v = (u * P + v * D) / Q, (u + v * P) / Q
        a = _floor_quad(P, Q, D)
        P = a * Q - P
        Q = (D - P * P) // Q
        if P == b0 and Q == 2:
            break
    # convert u + v√D to a + b w
    if d % 4 == 1:
        # √D = √d, w = (1+√d)/2 → √d = 2w − 1
        a, b = u - v, 2 * v
    else:
        # √D = 2√d
        a, b = u, 2 * v
    if a.denominator != 1 or b.denominator != 1:
        raise ArithmeticError("continued fraction produced a non-integral unit")
    a, b = int(a), int(b)
    nrm = _norm_w(a, b, d)
    if abs(nrm) != 1:
        raise ArithmeticError("continued-fraction product is not a unit")
    return a, b


def _floor_quad(P: int, Q: int, D: int) -> int:
    """⌊(P + √D)/Q⌋ for Q > 0; equals ⌊(P + ⌊√D⌋)/Q⌋ since √D is irrational."""
    return (P + isqrt(D)) // Q


def _norm_w(a: int, b: int, d: int) -> int:
    if d % 4 == 1:
        # (a + b/2)^2 − d b^2/4
        return a * a + a * b - b * b * (d - 1) // 4
    return a * a - d * b * b


def real_quadratic_unit_element(K, d: int):
    """ε of ℚ(√d) as an element of K, using K's generator named sqrt(d)."""
    a, b = fundamental_unit_real_quadratic(d)
    s = K.generators[f"sqrt({d})"]
    w = s if d % 4 != 1 else (s + 1) * Fraction(1, 2)
    return w * b + a
