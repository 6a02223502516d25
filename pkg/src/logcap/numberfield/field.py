"""Number fields with an integral basis, and exact elements on that basis."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm

import mpmath
import sympy

from ..exactnum.linalg import det, inverse_rational
from ..exactnum.polys import charpoly, factor_over_q
from .algebra import mul, mult_matrix, power
from .round2 import mult_table, poly_discriminant, power_basis_mult, round2


class FieldError(ValueError):
    """Invalid field description (reducible polynomial, degree cap, ...)."""


class DegreeCapError(FieldError):
    """A field larger than the configured degree cap was requested."""


DEFAULT_DEGREE_CAP = 18


@dataclass(frozen=True, eq=False)
class NumberField:
    """K = ℚ[x]/(f) with f monic integral, together with a ℤ-basis of O_K.

    ``basis[i]`` lists the power-basis coordinates (low degree first) of ω_i.
    ``generators`` maps names such as ``"sqrt(42)"`` to elements of K.
    """

    poly: tuple
    basis: tuple
    discriminant: int
    index: int
    signature: tuple
    label: str = ""
    generators: dict = field(default_factory=dict)
    _memo: dict = field(default_factory=dict, repr=False)

    # -- construction ------------------------------------------------------
    @classmethod
    def from_polynomial(cls, f, label: str = "", degree_cap: int = DEFAULT_DEGREE_CAP,
                        start=None) -> "NumberField":
        """Field ℚ[x]/(f) with its maximal order; ``start`` may give a known suborder to enlarge."""
        f = [int(c) for c in f]
        if f[0] != 1:
            raise FieldError("defining polynomial must be monic with integer coefficients")
        n = len(f) - 1
        if n < 1:
            raise FieldError("degree must be positive")
        if n > degree_cap:
            raise DegreeCapError(f"degree {n} exceeds the configured cap {degree_cap}")
        facs = factor_over_q(f)
        if len(facs) != 1 or facs[0][1] != 1:
            raise FieldError("defining polynomial is reducible")
        if n == 1:
            basis = ((Fraction(1),),)
            K = cls(tuple(f), basis, 1, 1, (1, 0), label or "Q")
        else:
            rows, index, dpoly = round2(f, start=start)
            disc = dpoly // index ** 2
            x = sympy.Symbol("x")
            r1 = int(sympy.Poly(f, x).count_roots())
            K = cls(tuple(f), tuple(tuple(r) for r in rows), disc, index, (r1, (n - r1) // 2), label or _poly_str(f))
            K._validate_discriminant()
        return K

    @classmethod
    def equation_order(cls, f, label: str = "") -> "NumberField":
        """ℚ[x]/(f) with arithmetic on ℤ[θ]; discriminant and index are those of the polynomial."""
        f = [int(c) for c in f]
        n = len(f) - 1
        basis = tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))
        return cls(tuple(f), basis, poly_discriminant(f), 1, (0, 0), label)

    def _validate_discriminant(self) -> None:
        n = self.degree
        tr = [self.trace_coords(self.T[i][j]) for i in range(n) for j in range(n)]
        d = det([tr[i * n:(i + 1) * n] for i in range(n)])
        if d != self.discriminant:
            raise ArithmeticError(f"integral basis check failed: {d} != {self.discriminant}")

    # -- cached structure ----------------------------------------------------
    def _cached(self, key, fn):
        if key not in self._memo:
            self._memo[key] = fn()
        return self._memo[key]

    @property
    def degree(self) -> int:
        return len(self.poly) - 1

    @property
    def T(self) -> list:
        return self._cached("T", lambda: mult_table(list(self.poly), [list(r) for r in self.basis]))

    @property
    def basis_inverse(self) -> list:
        return self._cached("binv", lambda: inverse_rational([list(r) for r in self.basis]))

    @property
    def one(self) -> list:
        return self._cached("one", lambda: self._power_to_coords([Fraction(1)] + [Fraction(0)] * (self.degree - 1))[0])

    @property
    def traces(self) -> list:
        """Tr(ω_i)."""
        def build():
            n = self.degree
            out = []
            for i in range(n):
                e = [0] * n
                e[i] = 1
                M = mult_matrix(self.T, e)
                out.append(sum(M[k][k] for k in range(n)))
            return out
        return self._cached("traces", build)

    def trace_coords(self, v) -> int:
        return sum(a * t for a, t in zip(v, self.traces))

    @property
    def is_rational(self) -> bool:
        return self.degree == 1

    # -- elements ----------------------------------------------------------
    def _power_to_coords(self, v):
        """Power-basis Fractions -> (integer numerators, denominator) on the ω basis."""
        inv = self.basis_inverse
        n = self.degree
        c = [sum(Fraction(v[k]) * inv[k][m] for k in range(n)) for m in range(n)]
        den = lcm(*[x.denominator for x in c]) if c else 1
        return [int(x * den) for x in c], den

    def element(self, coords, den: int = 1) -> "FieldElement":
        return FieldElement.make(self, coords, den)

    def from_power_basis(self, v) -> "FieldElement":
        v = list(v) + [0] * (self.degree - len(v))
        num, den = self._power_to_coords(v)
        return FieldElement.make(self, num, den)

    def from_rational(self, q) -> "FieldElement":
        q = Fraction(q)
        return FieldElement.make(self, [q.numerator * c for c in self.one], q.denominator)

    def theta(self) -> "FieldElement":
        return self.from_power_basis([0, 1] if self.degree > 1 else [0])

    def basis_element(self, i: int) -> "FieldElement":
        e = [0] * self.degree
        e[i] = 1
        return FieldElement.make(self, e, 1)

    # -- arithmetic on integral coordinate vectors ---------------------------
    def mul(self, x, y, mod: int | None = None) -> list:
        return mul(self.T, x, y, mod)

    def pow(self, x, k: int, mod: int | None = None) -> list:
        return power(self.T, x, k, self.one, mod)

    def mult_matrix(self, x, mod: int | None = None) -> list:
        return mult_matrix(self.T, x, mod)

    # -- primes / embeddings (implemented in sibling modules) ------------------
    def primes_above(self, p: int) -> list:
        from .primes import decompose_prime

        return self._cached(("primes", p), lambda: decompose_prime(self, p))

    def local_charpoly(self, P, N: int) -> list:
        """Characteristic polynomial over ℤ/ℓ^N of θ on the P-component of O_K ⊗ ℤ_ℓ."""
        mod = P.p ** N
        e = P.idempotent(N)
        th = self.theta()
        t = [c * pow(th.den, -1, mod) % mod for c in th.num]
        cp = charpoly(self.mult_matrix(self.mul(t, e, mod), mod), mod)
        k = self.degree - P.e * P.f
        if any(c % mod for c in cp[len(cp) - k:]):
            raise ArithmeticError("local factor did not split off")
        return cp[: len(cp) - k]

    def embeddings(self, dps: int = 60) -> list:
        """Complex values of θ: r1 real roots (ascending), then r2 with Im > 0."""
        def build():
            with mpmath.workdps(dps + 20):
                roots = mpmath.polyroots([int(c) for c in self.poly], maxsteps=400, extraprec=4 * dps + 200)
                real = sorted((mpmath.re(r) for r in roots if abs(mpmath.im(r)) < mpmath.mpf(10) ** (-dps // 2)))
                cplx = sorted((r for r in roots if mpmath.im(r) > mpmath.mpf(10) ** (-dps // 2)),
                              key=lambda z: (float(mpmath.re(z)), float(mpmath.im(z))))
            if len(real) != self.signature[0] or len(cplx) != self.signature[1]:
                raise ArithmeticError("root isolation disagrees with the signature")
            return [mpmath.mpc(r) for r in real] + cplx
        return self._cached(("emb", dps), build)

    def basis_embeddings(self, dps: int = 60) -> list:
        """M[j][i] = σ_j(ω_i) for the r1 + r2 embeddings returned by ``embeddings``."""
        def build():
            out = []
            with mpmath.workdps(dps + 20):
                for z in self.embeddings(dps):
                    row = []
                    for b in self.basis:
                        acc = mpmath.mpc(0)
                        for c in reversed(b):
                            acc = acc * z + mpmath.mpf(c.numerator) / c.denominator
                        row.append(acc)
                    out.append(row)
            return out
        return self._cached(("bemb", dps), build)

    def __repr__(self):
        return f"NumberField({self.label!r}, degree={self.degree}, disc={self.discriminant})"


def _poly_str(f: list) -> str:
    x = sympy.Symbol("x")
    return str(sympy.Poly(f, x).as_expr()).replace("**", "^")


@dataclass(frozen=True, eq=False)
class FieldElement:
    """(num · ω) / den with integer numerators and den > 0 in lowest terms."""

    field: NumberField
    num: tuple
    den: int

    @classmethod
    def make(cls, K: NumberField, num, den: int = 1) -> "FieldElement":
        num = [int(c) for c in num]
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            num, den = [-c for c in num], -den
        g = gcd(den, *num)
        if g > 1:
            num, den = [c // g for c in num], den // g
        return cls(K, tuple(num), den)

    # -- predicates ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.num)

    def is_integral(self) -> bool:
        return self.den == 1

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.from_rational(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.field is other.field and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    # -- arithmetic ----------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise ValueError("elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.from_rational(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        d = lcm(self.den, other.den)
        a, b = d // self.den, d // other.den
        return FieldElement.make(self.field, [a * x + b * y for x, y in zip(self.num, other.num)], d)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-c for c in self.num), self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement.make(self.field, self.field.mul(self.num, other.num), self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of 0")
        K = self.field
        cp = charpoly(K.mult_matrix(list(self.num)))
        # num^{-1} = -(num^{n-1} + a_1 num^{n-2} + ... + a_{n-1}) / a_n
        acc = [0] * K.degree
        for c in cp[:-1]:
            acc = K.mul(acc, list(self.num)) if any(acc) else acc
            acc = [a + c * o for a, o in zip(acc, K.one)]
        an = cp[-1]
        return FieldElement.make(K, [-self.den * a for a in acc], an)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return FieldElement.make(self.field, self.field.pow(list(self.num), k), self.den ** k)

    # -- invariants ----------------------------------------------------------
    def norm(self) -> Fraction:
        K = self.field
        return Fraction(det(K.mult_matrix(list(self.num))), self.den ** K.degree)

    def trace(self) -> Fraction:
        return Fraction(self.field.trace_coords(self.num), self.den)

    def charpoly(self) -> list:
        """Characteristic polynomial over ℚ (Fractions, high degree first)."""
        cp = charpoly(self.field.mult_matrix(list(self.num)))
        return [Fraction(c, self.den ** k) for k, c in enumerate(cp)]

    def power_basis(self) -> list:
        """Coordinates on 1, θ, …, θ^(n-1) (Fractions)."""
        K = self.field
        n = K.degree
        return [sum(Fraction(self.num[i]) * K.basis[i][k] for i in range(n)) / self.den for k in range(n)]

    def embed(self, dps: int = 60) -> list:
        M = self.field.basis_embeddings(dps)
        with mpmath.workdps(dps + 20):
            return [sum(mpmath.mpf(c) * w for c, w in zip(self.num, row)) / self.den for row in M]

    def __repr__(self):
        coeffs = self.power_basis()
        terms = []
        for k, c in enumerate(coeffs):
            if c:
                terms.append(f"{c}" if k == 0 else (f"{c}*t" if k == 1 else f"{c}*t^{k}"))
        return " + ".join(terms) if terms else "0"
