"""Truncated ℓ-adic numbers and the Iwasawa logarithm on ℚ_ℓ."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

Rational = Fraction


class PrecisionError(ArithmeticError):
    """Raised when a computation cannot be decided at the available precision."""


def vp(n: int, p: int) -> int:
    """Valuation of a nonzero integer at p."""
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    n = abs(n)
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class PadicNumber:
    """ℓ^valuation · unit, known to absolute precision ℓ^(valuation + precision).

    A zero is stored with ``unit == 0`` and ``precision == 0``; its
    ``valuation`` is then the absolute precision to which it is known.
    """

    prime: int
    valuation: int
    unit: int
    precision: int

    def __post_init__(self):
        if self.precision < 0:
            raise ValueError("negative precision")
        if self.precision == 0:
            if self.unit != 0:
                raise ValueError("zero must carry unit 0")
        elif self.unit % self.prime == 0 or not 0 < self.unit < self.prime ** self.precision:
            raise ValueError("unit part must be reduced and prime to ℓ")

    # -- construction ------------------------------------------------------
    @classmethod
    def from_int(cls, n: int, p: int, absprec: int) -> "PadicNumber":
        return cls._normalize(p, n, absprec)

    @classmethod
    def from_rational(cls, q, p: int, absprec: int) -> "PadicNumber":
        q = Fraction(q)
        if q == 0:
            return cls(p, absprec, 0, 0)
        vd = vp(q.denominator, p)
        den = q.denominator // p ** vd
        # q = num / (p^vd · den); value of num/den known mod p^(absprec + vd)
        mod = p ** (absprec + vd)
        z = cls._normalize(p, q.numerator * pow(den, -1, mod) % mod, absprec + vd)
        if z.is_zero():
            return cls(p, z.valuation - vd, 0, 0)
        return cls(p, z.valuation - vd, z.unit, z.precision)

    @classmethod
    def _normalize(cls, p: int, n: int, absprec: int, shift: int = 0) -> "PadicNumber":
        """Value p^shift · n with n known mod p^absprec."""
        n %= p ** absprec
        if n == 0:
            return cls(p, absprec + shift, 0, 0)
        v = vp(n, p)
        return cls(p, v + shift, n // p ** v, absprec - v)

    # -- queries -----------------------------------------------------------
    def is_zero(self) -> bool:
        return self.precision == 0

    @property
    def absprec(self) -> int:
        return self.valuation + self.precision

    def lift(self) -> Fraction:
        """Canonical rational representative."""
        if self.is_zero():
            return Fraction(0)
        return Fraction(self.unit) * Fraction(self.prime) ** self.valuation

    def residue(self, k: int) -> int:
        """Value mod ℓ^k for an integral number; needs absprec ≥ k."""
        if self.valuation < 0:
            raise ValueError("not integral")
        if k > self.absprec:
            raise PrecisionError(f"need {k} digits, have {self.absprec}")
        if self.is_zero():
            return 0
        return self.unit * self.prime ** self.valuation % self.prime ** k

    def _check(self, other) -> "PadicNumber":
        if isinstance(other, int):
            return PadicNumber.from_int(other, self.prime, max(self.absprec, 1) + 64)
        if isinstance(other, Fraction):
            return PadicNumber.from_rational(other, self.prime, max(self.absprec, 1) + 64)
        if not isinstance(other, PadicNumber) or other.prime != self.prime:
            return NotImplemented
        return other

    # -- arithmetic --------------------------------------------------------
    def __neg__(self):
        if self.is_zero():
            return self
        return PadicNumber(self.prime, self.valuation, (-self.unit) % self.prime ** self.precision, self.precision)

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        p = self.prime
        absprec = min(self.absprec, other.absprec)
        base = min(self.valuation, other.valuation, absprec)
        n = 0
        for x in (self, other):
            if not x.is_zero():
                n += x.unit * p ** (x.valuation - base)
        return PadicNumber._normalize(p, n, absprec - base, base)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        p = self.prime
        if self.is_zero() or other.is_zero():
            # absolute precision of a product with a zero factor
            cands = [a.valuation + b.valuation for a, b in ((self, other), (other, self)) if a.is_zero()]
            return PadicNumber(p, min(cands), 0, 0)
        prec = min(self.precision, other.precision)
        return PadicNumber(p, self.valuation + other.valuation, self.unit * other.unit % p ** prec, prec)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            raise ZeroDivisionError("division by a p-adic zero")
        p = self.prime
        if self.is_zero():
            return PadicNumber(p, self.valuation - other.valuation, 0, 0)
        prec = min(self.precision, other.precision)
        mod = p ** prec
        return PadicNumber(p, self.valuation - other.valuation, self.unit * pow(other.unit, -1, mod) % mod, prec)

    def __rtruediv__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, k: int):
        if k < 0:
            return PadicNumber.from_int(1, self.prime, self.precision) / self ** (-k)
        if self.is_zero():
            return PadicNumber(self.prime, self.valuation * max(k, 1), 0, 0) if k else PadicNumber.from_int(1, self.prime, 64)
        return PadicNumber(self.prime, self.valuation * k, pow(self.unit, k, self.prime ** self.precision), self.precision)

    def equals(self, other, absprec: int | None = None) -> bool:
        """Equality to the common (or requested) absolute precision."""
        d = self - other
        target = d.absprec if absprec is None else absprec
        return d.is_zero() or d.valuation >= target

    def __repr__(self):
        if self.is_zero():
            return f"O({self.prime}^{self.valuation})"
        return f"{self.prime}^{self.valuation}*{self.unit} + O({self.prime}^{self.absprec})"


def log_series(z: int, p: int, absprec: int) -> int:
    """log(1 + z) mod p^absprec for an integer z with p | z (p odd).

    Terms z^k/k have valuation ≥ k − log_p k, so the sum stops once that
    bound reaches ``absprec``.
    """
    if z % p:
        raise ValueError("log series needs 1 + z ≡ 1 mod p")
    if z == 0:
        return 0
    vz = vp(z, p)
    # headroom for denominators p^{v_p(k)}
    extra = 1
    while p ** extra <= (absprec // vz + 2) * 2:
        extra += 1
    mod = p ** (absprec + extra)
    total = 0
    zk = 1
    k = 0
    while True:
        k += 1
        zk = zk * z % mod
        vk = vp(k, p)
        if k * vz - _ilog(k, p) >= absprec:
            break
        term = (zk // p ** vk) * pow(k // p ** vk, -1, mod) % mod
        total += term if k % 2 else -term
    return total % p ** absprec


def _ilog(k: int, p: int) -> int:
    """floor(log_p k)."""
    e = 0
    while p ** (e + 1) <= k:
        e += 1
    return e


def iwasawa_log(x, N: int | None = None):
    """Iwasawa logarithm with Log ℓ = 0 and Log ζ = 0.

    For a :class:`PadicNumber` the result is a PadicNumber known to absolute
    precision ``min(N, x.precision)``.  Other objects are dispatched to their
    own ``iwasawa_log`` method (local-field elements).
    """
    if not isinstance(x, PadicNumber):
        return x.iwasawa_log(N)
    if N is None:
        N = x.precision
    if N < 2:
        raise PrecisionError("Iwasawa log needs precision ≥ 2")
    if x.is_zero():
        raise ValueError("Log of zero")
    p = x.prime
    n = min(N, x.precision)
    if n < 1:
        raise PrecisionError("no significant digits")
    mod = p ** n
    # Log(ℓ^v u) = Log(u) = log(u^(ℓ-1)) / (ℓ-1)
    y = pow(x.unit, p - 1, mod)
    val = log_series(y - 1, p, n) * pow(p - 1, -1, mod) % mod
    return PadicNumber._normalize(p, val, n)
