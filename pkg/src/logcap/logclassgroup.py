"""The ℓ-group of logarithmic classes C̃l_K and logarithmic units Ẽ_K.

Presentation.  Let P be a factor base generating the ℓ-part of Cl_K and
containing the places above ℓ.  Every logarithmic divisor is equivalent to
one supported on P, and a P-supported divisor is principal exactly when it
is d̃iv of an element of ℤ_ℓ ⊗ E_P.  Hence

    C̃l_K = D̃l⁰_P / d̃iv(ℤ_ℓ ⊗ E_P).

The degree-0 lattice D̃l⁰_P is free on 𝔭 − (deg 𝔭 / deg 𝔭0)·𝔭0 (𝔭 ≠ 𝔭0)
where 𝔭0 has the smallest ℓ-adic valuation of its degree, so coordinates on
that basis are obtained by forgetting the 𝔭0 column.

Checks.  The Smith form is computed modulo ℓ^N for two precisions; a
divisor counts as stable when both agree.  Independently, the order is
recomputed from the exact sequence

    0 → D̃l⁰_ℓ / d̃iv(ℰ′) → C̃l_K → ker(deg: Cl′_K → ℤ_ℓ/deg D̃l_ℓ) → 0

where ℰ′ = ℤ_ℓ ⊗ E′ (ℓ-units) and Cl′ is the ℓ-class group of ℓ-ideals.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .exactnum.linalg import smith_normal_form
from .exactnum.padic import PadicNumber, vp
from .locallog import DEFAULT_NORMALIZATION, LogNormalization, complete_at
from .numberfield.sunits import (EngineCapacityError, SUnitLattice, class_group_from_lattice,
                                 factor_over_base, left_kernel_mod, solve_left_mod, sunit_lattice)

DEFAULT_PRECISION = 32
CHECK_PRECISION = 64


class GrossKuzminError(ArithmeticError):
    """C̃l looks infinite at working precision."""


@dataclass(frozen=True)
class LogDivisor:
    """Σ a_𝔭·𝔭 with a_𝔭 ∈ ℤ/ℓ^precision, keyed by prime labels."""

    ell: int
    coefficients: dict
    precision: int

    def __post_init__(self):
        mod = self.ell ** self.precision
        clean = {k: v % mod for k, v in self.coefficients.items() if v % mod}
        object.__setattr__(self, "coefficients", clean)

    def __add__(self, other):
        c = dict(self.coefficients)
        for k, v in other.coefficients.items():
            c[k] = c.get(k, 0) + v
        return LogDivisor(self.ell, c, min(self.precision, other.precision))

    def __mul__(self, k: int):
        return LogDivisor(self.ell, {p: k * v for p, v in self.coefficients.items()}, self.precision)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def is_zero(self) -> bool:
        return not self.coefficients

    def divided_by(self, k: int) -> "LogDivisor | None":
        """The divisor D/k when every coefficient is divisible (k a power of ℓ), else None."""
        if any(v % k for v in self.coefficients.values()):
            return None
        s = vp(k, self.ell)
        return LogDivisor(self.ell, {p: v // k for p, v in self.coefficients.items()}, self.precision - s)


@dataclass(frozen=True)
class LogClassGroupData:
    ell: int
    divisors: tuple
    generators: tuple  # each a dict label → coefficient (degree-0 divisors)
    primes: tuple
    base_prime: str  # 𝔭0
    degrees: dict  # label → (v_ℓ(deg), deg mod ℓ^N)
    precision: int
    normalization: str
    stable: bool
    exact_sequence: dict
    certificate: dict = field(default_factory=dict)

    @property
    def order(self) -> int:
        o = 1
        for d in self.divisors:
            o *= d
        return o

    @property
    def structure(self) -> list:
        return list(self.divisors)


@dataclass(frozen=True)
class LogUnitData:
    ell: int
    generators: tuple  # exponent vectors over the P-unit basis
    rank: int
    torsion_order: int
    lattice: SUnitLattice = field(repr=False)


# ---------------------------------------------------------------------------
# valuations and degrees on the factor base
# ---------------------------------------------------------------------------

def _local(K, P, precision):
    return complete_at(K, P, precision + 8)


def _tilde_row(K, ell, primes, x, valuations, precision, normalization):
    """ṽ_𝔭(x) mod ℓ^N for 𝔭 in primes (``valuations`` gives the ordinary ones)."""
    mod = ell ** precision
    row = []
    for P, v in zip(primes, valuations):
        if P.p != ell:
            row.append(v % mod)
            continue
        val = _local(K, P, precision).log_valuation(x, normalization)
        row.append(val.residue(precision) if not val.is_zero() or val.valuation >= precision
                   else _short(val, precision))
    return row


def _short(val, precision):
    raise EngineCapacityError(f"ṽ known to {val.valuation} digits only, {precision} needed")


def prime_degree(K, P, ell: int, precision: int = DEFAULT_PRECISION,
                 normalization: LogNormalization = DEFAULT_NORMALIZATION) -> PadicNumber:
    if P.p == ell:
        return _local(K, P, precision).log_degree(normalization)
    from .exactnum.padic import iwasawa_log

    return iwasawa_log(PadicNumber.from_int(P.norm, ell, precision + 8), precision + 8)


def _tilde_matrix(lat, precision, normalization):
    key = ("vtilde", precision, normalization.scale)
    memo = lat.K._memo.setdefault(("logcg", id(lat)), {})
    if key not in memo:
        memo[key] = [
            _tilde_row(lat.K, lat.ell, lat.primes, b, v, precision, normalization)
            for b, v in zip(lat.elements, lat.valuations)
        ]
    return memo[key]


def log_divisor_of(K, alpha, ell: int = 3, precision: int = DEFAULT_PRECISION,
                   normalization: LogNormalization = DEFAULT_NORMALIZATION, primes=None) -> LogDivisor:
    """d̃iv(α) over the given primes (default: the support of α plus the places above ℓ)."""
    from .locallog import tame_support

    coeffs = {}
    for P, v in tame_support(alpha, ell):
        coeffs[P.label] = v
    for P in K.primes_above(ell):
        val = _local(K, P, precision).log_valuation(alpha, normalization)
        if val.is_zero():
            continue
        coeffs[P.label] = val.residue(precision)
    if primes is not None:
        labels = {P.label for P in primes}
        extra = set(coeffs) - labels
        if extra:
            raise ValueError(f"α is supported outside the given primes: {sorted(extra)}")
    return LogDivisor(ell, coeffs, precision)


def divisor_degree(K, D: LogDivisor, precision: int | None = None,
                   normalization: LogNormalization = DEFAULT_NORMALIZATION) -> PadicNumber:
    ell = D.ell
    N = D.precision if precision is None else precision
    total = PadicNumber(ell, N, 0, 0)
    for lab, a in D.coefficients.items():
        P = _prime_by_label(K, lab)
        total = total + prime_degree(K, P, ell, N, normalization) * a
    return total


def _prime_by_label(K, label):
    p, pos = label.split(".")
    for P in K.primes_above(int(p)):
        if P.position == int(pos):
            return P
    raise KeyError(label)


# ---------------------------------------------------------------------------
# the group
# ---------------------------------------------------------------------------

def _presentation(lat, precision, normalization):
    """Relation rows on the degree-0 basis, base index, degree data."""
    K, ell = lat.K, lat.ell
    mod = ell ** precision
    degs = [prime_degree(K, P, ell, precision, normalization) for P in lat.primes]
    vdeg = [d.valuation for d in degs]
    i0 = min(range(len(degs)), key=lambda i: (vdeg[i], i))
    rows = _tilde_matrix(lat, precision, normalization)
    for r in rows:
        s = sum(d * a for d, a in zip(degs, r))
        if not (s.is_zero() or s.valuation >= precision):
            raise ArithmeticError("product formula fails on a P-unit")
    keep = [i for i in range(len(lat.primes)) if i != i0]
    red = [[r[i] % mod for i in keep] for r in rows]
    return red, i0, keep, degs


def _snf_divisors(rows, ncols, ell, precision):
    mod = ell ** precision
    if ncols == 0:
        return [], [], None
    snf = smith_normal_form(rows or [[0] * ncols], modulus=mod)
    diag = list(snf.diagonal) + [mod] * (ncols - len(snf.diagonal))
    if any(d == mod for d in diag):
        raise GrossKuzminError("logarithmic class group is infinite at working precision")
    from .exactnum.linalg import inverse_mod

    Rinv = inverse_mod([list(r) for r in snf.right], mod)
    out = sorted(((d, Rinv[i]) for i, d in enumerate(diag) if d != 1), key=lambda t: t[0])
    return [d for d, _ in out], [g for _, g in out], snf


def _exact_sequence_order(lat, degs, precision, normalization):
    """|D̃l⁰_ℓ / d̃iv(ℰ′)| · |ker(Cl′ → ℤ_ℓ/deg D̃l_ℓ)|, computed without the full presentation."""
    K, ell = lat.K, lat.ell
    mod = ell ** precision
    wild = lat.wild_indices()
    tame = [i for i in range(len(lat.primes)) if i not in wild]
    # ℓ-units: kernel of the tame valuation columns
    vrows = [[r[i] for i in tame] for r in lat.valuations]
    ker = left_kernel_mod(vrows, len(tame), mod)
    vt = _tilde_matrix(lat, precision, normalization)
    # d̃iv of ℓ-units on the wild places, degree-0 part
    wdeg = [degs[i] for i in wild]
    w0 = min(range(len(wild)), key=lambda k: (wdeg[k].valuation, k))
    keepw = [wild[k] for k in range(len(wild)) if k != w0]
    rows = [[sum(x[j] * vt[j][i] for j in range(len(vt))) % mod for i in keepw] for x in ker]
    qdiv, _, _ = _snf_divisors(rows, len(keepw), ell, precision)
    q_order = 1
    for d in qdiv:
        q_order *= d
    # Cl′ and the degree map to ℤ/ℓ^m, m = min v_ℓ(deg 𝔩)
    clp = class_group_from_lattice(lat, [lat.primes[i] for i in wild], precision)
    m = wdeg[w0].valuation
    lab_to_i = {P.label: i for i, P in enumerate(lat.primes)}
    images = []
    for d, g in zip(clp.divisors, clp.generators):
        tot = PadicNumber(ell, precision, 0, 0)
        for lab, a in g.items():
            tot = tot + degs[lab_to_i[lab]] * a
        images.append(tot.residue(m) if m else 0)
    # image of ⊕ ℤ/d_i in ℤ/ℓ^m generated by the images
    g = ell ** m
    for y in images:
        from math import gcd

        g = gcd(g, y)
    image = ell ** m // g
    return q_order * clp.order // image, {
        "wild_quotient": q_order, "cl_prime": list(clp.divisors), "degree_image": image, "m": m}


def compute_log_class_group(K, ell: int = 3, precision: int = DEFAULT_PRECISION,
                            normalization: LogNormalization = DEFAULT_NORMALIZATION,
                            check_precision: int | None = CHECK_PRECISION, **kw) -> LogClassGroupData:
    """ℓ-group of logarithmic classes with generators and checks."""
    lat = sunit_lattice(K, ell, **kw)
    red, i0, keep, degs = _presentation(lat, precision, normalization)
    divs, gens, _ = _snf_divisors(red, len(keep), ell, precision)
    stable = True
    if check_precision and check_precision > precision:
        red2, _, keep2, _ = _presentation(lat, check_precision, normalization)
        divs2, _, _ = _snf_divisors(red2, len(keep2), ell, check_precision)
        stable = divs2 == divs
        if not stable:
            raise ArithmeticError(f"logarithmic class group unstable: {divs} at ℓ^{precision}, "
                                  f"{divs2} at ℓ^{check_precision}")
    order = 1
    for d in divs:
        order *= d
    ex_order, ex_data = _exact_sequence_order(lat, degs, precision, normalization)
    if ex_order != order:
        raise ArithmeticError(f"exact-sequence order {ex_order} differs from presentation order {order}")
    ex_data["order"] = ex_order
    exponent = max(divs) if divs else 1
    generators = []
    mod = ell ** precision
    for g in gens:
        coeffs = {lat.primes[i].label: g[k] % exponent for k, i in enumerate(keep) if g[k] % exponent}
        # complete to degree 0 through 𝔭0
        tot = PadicNumber(ell, precision, 0, 0)
        for k, i in enumerate(keep):
            tot = tot + degs[i] * (g[k] % exponent)
        c0 = -(tot / degs[i0])
        if c0.valuation < 0:
            raise ArithmeticError("degree-0 completion is not integral")
        if not c0.is_zero():
            coeffs[lat.primes[i0].label] = c0.residue(precision) if c0.absprec >= precision else c0.residue(c0.absprec)
        generators.append(coeffs)
    degrees = {P.label: (d.valuation, d.residue(min(precision, d.absprec)) if d.valuation >= 0 else None)
               for P, d in zip(lat.primes, degs)}
    cert = {
        "factor_base": len(lat.primes),
        "character_rank": len(lat.elements),
        "minkowski_bound": round(lat.bound, 3),
        "precisions": [precision] + ([check_precision] if check_precision else []),
    }
    return LogClassGroupData(ell, tuple(divs), tuple(generators), tuple(P.label for P in lat.primes),
                             lat.primes[i0].label, degrees, precision, normalization.describe(ell),
                             stable, ex_data, cert)


def log_class_group_order(K, ell: int = 3, **kw) -> int:
    return compute_log_class_group(K, ell, **kw).order


# ---------------------------------------------------------------------------
# logarithmic units and principal divisors
# ---------------------------------------------------------------------------

def log_units(K, ell: int = 3, precision: int = DEFAULT_PRECISION,
              normalization: LogNormalization = DEFAULT_NORMALIZATION, **kw) -> LogUnitData:
    """Ẽ_K = ker d̃iv ⊂ ℤ_ℓ ⊗ E_P, as exponent vectors over the P-unit basis."""
    lat = sunit_lattice(K, ell, **kw)
    rows = _tilde_matrix(lat, precision, normalization)
    ker = left_kernel_mod(rows, len(lat.primes), ell ** precision)
    tors = 1 if lat.torsion_order > 1 else 0
    return LogUnitData(ell, tuple(tuple(x) for x in ker), len(ker) - tors, lat.torsion_order, lat)


def ell_units(K, ell: int = 3, precision: int = DEFAULT_PRECISION, **kw) -> list:
    """ℰ′ = ℤ_ℓ ⊗ E′ as exponent vectors over the P-unit basis."""
    lat = sunit_lattice(K, ell, **kw)
    wild = set(lat.wild_indices())
    tame = [i for i in range(len(lat.primes)) if i not in wild]
    rows = [[r[i] for i in tame] for r in lat.valuations]
    return [tuple(x) for x in left_kernel_mod(rows, len(tame), ell ** precision)]


def log_units_equal_ell_units(K, ell: int = 3, precision: int = DEFAULT_PRECISION,
                              normalization: LogNormalization = DEFAULT_NORMALIZATION, **kw) -> bool:
    """Ẽ_K = ℰ′_K: every ℓ-unit has trivial logarithmic divisor (Ẽ ⊂ ℰ′ always)."""
    lat = sunit_lattice(K, ell, **kw)
    rows = _tilde_matrix(lat, precision, normalization)
    mod = ell ** precision
    for x in ell_units(K, ell, precision, **kw):
        if any(sum(a * r[i] for a, r in zip(x, rows)) % mod for i in range(len(lat.primes))):
            return False
    return True


@dataclass(frozen=True)
class PrincipalityResult:
    principal: bool
    witness: tuple | None  # exponents over the P-unit basis
    reason: str


def is_log_principal(K, D: LogDivisor, precision: int | None = None,
                     normalization: LogNormalization = DEFAULT_NORMALIZATION, **kw) -> PrincipalityResult:
    """Is D (supported on the factor base) the logarithmic divisor of an element of ℤ_ℓ ⊗ K^×?"""
    ell = D.ell
    N = D.precision if precision is None else min(precision, D.precision)
    lat = sunit_lattice(K, ell, **kw)
    labels = [P.label for P in lat.primes]
    if set(D.coefficients) - set(labels):
        raise ValueError("divisor is supported outside the factor base")
    deg = divisor_degree(K, D, N, normalization)
    if not (deg.is_zero() or deg.valuation >= N):
        return PrincipalityResult(False, None, "nonzero degree")
    mod = ell ** N
    rows = _tilde_matrix(lat, N, normalization)
    target = [D.coefficients.get(lab, 0) % mod for lab in labels]
    x = solve_left_mod([list(r) for r in rows], target, mod)
    if x is None:
        return PrincipalityResult(False, None, "not in the span of d̃iv(E_P)")
    return PrincipalityResult(True, tuple(x), "solved over the P-unit basis")


def p_unit_coordinates_mod_ell(K, alpha, ell: int = 3, **kw) -> list:
    """Coordinates of a P-unit modulo E_P^ℓ on the P-unit basis."""
    lat = sunit_lattice(K, ell, **kw)
    return lat.coordinates_mod_ell(alpha)


def in_log_units_times_powers(K, alpha, ell: int = 3, precision: int = DEFAULT_PRECISION,
                              normalization: LogNormalization = DEFAULT_NORMALIZATION, **kw) -> bool:
    """α ∈ Ẽ_K · K^ℓ for a P-unit α, read on coordinates modulo E_P^ℓ."""
    from .exactnum.linalg import rank_mod_p

    lat = sunit_lattice(K, ell, **kw)
    if factor_over_base(K, lat.primes, alpha) is None:
        raise ValueError("α must be a unit outside the factor base")
    a = lat.coordinates_mod_ell(alpha)
    U = [[c % ell for c in g] for g in log_units(K, ell, precision, normalization, **kw).generators]
    return rank_mod_p(U + [list(a)], ell) == rank_mod_p(U, ell) if U else not any(c % ell for c in a)
