"""ℓ-adic S-units and ℓ-parts of (S-)class groups.

The engine works with a factor base P (all primes of norm up to the Minkowski
bound, the primes above ℓ and any requested extras).  It searches small
elements of O_K whose norms factor over P, and keeps a relation only when its
vector of ℓ-th power residue characters is new.  When the character rank
reaches dim E_P/E_P^ℓ = r1 + r2 − 1 + |P| + δ (δ = 1 iff μ_ℓ ⊂ K), the kept
elements span E_P/E_P^ℓ, hence generate ℤ_ℓ ⊗ E_P by Nakayama.  That rank
count is the certificate: no relation is missing ℓ-adically.

Everything downstream (ℓ-parts of Cl, Cl_S, S-units, logarithmic classes) is
linear algebra over ℤ/ℓ^N on the valuation matrix of these generators.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field

import sympy

from ..exactnum.linalg import smith_normal_form
from ..exactnum.padic import vp
from ..exactnum.polys import factor_mod_p
from .lattice import lll_reduce
from .units import UnitGroupData, roots_of_unity_order

DEFAULT_PRECISION = 32
DEFAULT_BOUND_CAP = 5000


class EngineCapacityError(RuntimeError):
    """The desk-scale engine cannot decide this input (bound or search cap exceeded)."""


def minkowski_bound(K) -> float:
    n = K.degree
    r2 = K.signature[1]
    return math.factorial(n) / n ** n * (4 / math.pi) ** r2 * math.sqrt(abs(K.discriminant))


# ---------------------------------------------------------------------------
# power residue characters at degree-one primes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CharacterPrime:
    """Degree-one prime (q, θ − r) with q ≡ 1 mod ℓ; χ(x) = dlog of x^((q−1)/ℓ)."""

    q: int
    r: int
    omega: tuple  # ω_i(r) mod q
    table: dict = field(repr=False, hash=False, compare=False)

    def residue(self, x) -> int:
        val = sum(c * w for c, w in zip(x.num, self.omega)) % self.q
        if x.den % self.q == 0 or val == 0:
            raise ZeroDivisionError("element is not a unit at the character prime")
        return val * pow(x.den, -1, self.q) % self.q

    def value(self, x, ell: int) -> int:
        return self.table[pow(self.residue(x), (self.q - 1) // ell, self.q)]


def character_primes(K, ell: int, count: int, above: float) -> list:
    """``count`` degree-one primes of norm > ``above`` with q ≡ 1 mod ℓ, away from the index."""
    f = list(K.poly)
    bad = abs(K.index) * abs(K.discriminant)
    out = []
    q = max(int(above) + 1, ell + 1)
    q += (1 - q) % ell
    while len(out) < count:
        if sympy.isprime(q) and bad % q and all(b.denominator % q for row in K.basis for b in row):
            for g, _ in factor_mod_p(f, q):
                if len(g) != 2:
                    continue
                r = (-g[1]) % q
                omega = []
                for row in K.basis:
                    acc = 0
                    for c in reversed(row):
                        acc = (acc * r + c.numerator * pow(c.denominator, -1, q)) % q
                    omega.append(acc)
                gen = sympy.primitive_root(q)
                z = pow(gen, (q - 1) // ell, q)
                table = {pow(z, j, q): j for j in range(ell)}
                out.append(CharacterPrime(q, r, tuple(omega), table))
                if len(out) == count:
                    break
        q += ell
    return out


class _EchelonModP:
    """Incremental row echelon form over 𝔽_ℓ."""

    def __init__(self, p: int):
        self.p = p
        self.rows = []  # (pivot, row)

    def reduce(self, v):
        p = self.p
        v = [x % p for x in v]
        for piv, r in self.rows:
            c = v[piv]
            if c:
                v = [(a - c * b) % p for a, b in zip(v, r)]
        return v

    def add(self, v) -> bool:
        v = self.reduce(v)
        piv = next((i for i, x in enumerate(v) if x), None)
        if piv is None:
            return False
        inv = pow(v[piv], -1, self.p)
        v = [x * inv % self.p for x in v]
        new = []
        for pv, r in self.rows:
            c = r[piv]
            if c:
                r = [(a - c * b) % self.p for a, b in zip(r, v)]
            new.append((pv, r))
        new.append((piv, v))
        self.rows = new
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)


# ---------------------------------------------------------------------------
# the lattice of P-units
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SUnitLattice:
    """Generators b_j of ℤ_ℓ ⊗ E_P with their valuation and character vectors."""

    K: object
    ell: int
    primes: tuple
    elements: tuple
    valuations: tuple  # rows: v_𝔭(b_j) for 𝔭 in primes
    characters: tuple  # rows: χ_i(b_j)
    char_primes: tuple
    torsion_order: int  # ℓ-part of |μ_K|
    torsion: object
    unit_rank: int
    bound: float
    candidates_tried: int

    @property
    def size(self) -> int:
        return len(self.elements)

    def prime_index(self, P) -> int:
        for i, Q in enumerate(self.primes):
            if Q is P:
                return i
        raise KeyError(f"{P!r} is not in the factor base")

    def wild_indices(self) -> list:
        return [i for i, P in enumerate(self.primes) if P.p == self.ell]

    def coordinates_mod_ell(self, x) -> list:
        """a with x ≡ Π b_j^{a_j} modulo E_P^ℓ (x must be a P-unit)."""
        if factor_over_base(self.K, self.primes, x) is None:
            raise ValueError("element is not a unit outside the factor base")
        chi = [cp.value(x, self.ell) for cp in self.char_primes]
        sol = _solve_left_mod_p([list(r) for r in self.characters], chi, self.ell)
        if sol is None:
            raise ArithmeticError("character vector outside the span of the P-unit basis")
        return sol


def _solve_left_mod_p(rows, target, p):
    """x with Σ x_j rows_j ≡ target (mod p), or None."""
    from ..exactnum.linalg import solve_mod_p, transpose

    return solve_mod_p(transpose(rows), target, p)


def factor_over_base(K, primes, x):
    """Valuation vector of x over ``primes`` if x is a unit outside them, else None."""
    nrm = x.norm()
    num, den = abs(nrm.numerator), nrm.denominator
    vals = [0] * len(primes)
    byp = {}
    for i, P in enumerate(primes):
        byp.setdefault(P.p, []).append(i)
    for p in list(sympy.factorint(den).keys()):
        if p not in byp:
            return None
    rest = num
    for p, idx in byp.items():
        while rest % p == 0:
            rest //= p
    if rest != 1:
        return None
    for p, idx in byp.items():
        vN = vp(num, p) - vp(den, p)
        tot = 0
        for i in idx:
            v = primes[i].valuation(x)
            vals[i] = v
            tot += v * primes[i].f
        if tot != vN:
            return None
    return vals


def _factor_base(K, ell, bound, extra):
    primes = []
    seen = set()
    for p in sympy.primerange(2, int(bound) + 1):
        for P in K.primes_above(p):
            if P.norm <= bound:
                primes.append(P)
                seen.add(id(P))
    for p in {ell} | {P.p for P in extra}:
        for P in K.primes_above(p):
            if id(P) not in seen and (p == ell or any(P is Q for Q in extra)):
                primes.append(P)
                seen.add(id(P))
    primes.sort(key=lambda P: (P.norm, P.p, P.position))
    return primes


def _small_vectors(n, rng, radius):
    v = [rng.randint(-radius, radius) for _ in range(n)]
    return v


def sunit_lattice(K, ell: int, extra_primes=(), bound_cap: float = DEFAULT_BOUND_CAP,
                  max_candidates: int = 400000, seed: int = 0) -> SUnitLattice:
    """Certified generators of ℤ_ℓ ⊗ E_P (memoized per field)."""
    key = ("sunits", ell, tuple(sorted((P.p, P.position) for P in extra_primes)), bound_cap)
    if key in K._memo:
        return K._memo[key]
    bound = max(minkowski_bound(K), 1.0)
    if bound > bound_cap:
        raise EngineCapacityError(
            f"Minkowski bound {bound:.0f} exceeds the configured cap {bound_cap:.0f} "
            f"(degree {K.degree}); a bigger engine is needed")
    n = K.degree
    primes = _factor_base(K, ell, bound, extra_primes)
    w_ell, zeta = roots_of_unity_order(K, ell)
    delta = 1 if w_ell > 1 else 0
    r1, r2 = K.signature
    unit_rank = r1 + r2 - 1
    target = unit_rank + len(primes) + delta
    nchar = target + 24
    chars = character_primes(K, ell, nchar, bound)
    ech = _EchelonModP(ell)
    elements, vals, charvecs = [], [], []

    def consider(x) -> bool:
        if x.is_zero():
            return False
        v = factor_over_base(K, primes, x)
        if v is None:
            return False
        try:
            c = [cp.value(x, ell) for cp in chars]
        except ZeroDivisionError:
            return False
        if not ech.add(c):
            return False
        elements.append(x)
        vals.append(v)
        charvecs.append(c)
        return True

    if delta:
        consider(zeta)
    for p in sorted({P.p for P in primes}):
        if sum(P.e * P.f for P in primes if P.p == p) == n:
            consider(K.from_rational(p))
    rng = random.Random(7919 * n + 31 * ell + seed)
    tried = 0
    basis = lll_reduce(K, [[int(i == j) for j in range(n)] for i in range(n)])

    def combos(rows, radius, count):
        for _ in range(count):
            c = _small_vectors(len(rows), rng, radius)
            yield [sum(ci * r[j] for ci, r in zip(c, rows)) for j in range(n)]

    # small elements of O_K first, then small elements of each 𝔭 in turn
    for vec in itertools.islice(combos(basis, 2, 4 * target), 4 * target):
        if ech.rank == target:
            break
        tried += 1
        consider(K.element(vec))
    ideal_bases = {}
    rounds = 0
    while ech.rank < target:
        rounds += 1
        progress = False
        for P in primes:
            if ech.rank == target:
                break
            if id(P) not in ideal_bases:
                ideal_bases[id(P)] = lll_reduce(K, [list(r) for r in P.hnf])
            rows = ideal_bases[id(P)]
            radius = 1 + rounds // 3
            for vec in combos(rows, radius, 12):
                tried += 1
                if consider(K.element(vec)):
                    progress = True
                    break
        if tried > max_candidates:
            raise EngineCapacityError(
                f"relation search stalled at character rank {ech.rank}/{target} after {tried} candidates")
        if not progress and rounds > 60:
            raise EngineCapacityError(f"relation search stalled at character rank {ech.rank}/{target}")
    lat = SUnitLattice(K, ell, tuple(primes), tuple(elements), tuple(map(tuple, vals)),
                       tuple(map(tuple, charvecs)), tuple(chars), w_ell, zeta, unit_rank, bound, tried)
    K._memo[key] = lat
    return lat


# ---------------------------------------------------------------------------
# class groups
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClassGroupData:
    """ℓ-part of Cl or Cl_S.

    ``generators`` are divisors on the factor base (prime label → exponent);
    ``witnesses[i]`` gives ℓ-adic exponents x over the P-unit generators with
    div(Π b_j^{x_j}) = d_i · generator_i modulo ℓ^precision.
    """

    ell: int
    divisors: tuple
    generators: tuple
    witnesses: tuple
    relation_matrix: tuple
    primes: tuple
    split_primes: tuple
    precision: int
    certificate: dict

    @property
    def order(self) -> int:
        return math.prod(self.divisors)

    @property
    def is_split(self) -> bool:
        return bool(self.split_primes)


def _cokernel(rows, ncols, ell, N):
    """Elementary divisors and generators of ℤ_ℓ^ncols / rowspan(rows) mod ℓ^N."""
    mod = ell ** N
    if ncols == 0:
        return [], [], None
    if not rows:
        rows = [[0] * ncols]
    snf = smith_normal_form(rows, modulus=mod)
    R = [list(r) for r in snf.right]
    from ..exactnum.linalg import inverse_mod

    Rinv = inverse_mod(R, mod)
    diag = list(snf.diagonal) + [mod] * (ncols - len(snf.diagonal))
    out = []
    for i, d in enumerate(diag):
        if d == 1:
            continue
        if d == mod:
            raise EngineCapacityError("infinite cokernel at working precision; relations incomplete")
        out.append((d, Rinv[i]))
    out.sort(key=lambda t: t[0])
    return [d for d, _ in out], [g for _, g in out], snf


def _reduce_divisor(vec, exponent):
    return [c % exponent for c in vec]


def class_group_from_lattice(lat: SUnitLattice, split=(), precision: int = DEFAULT_PRECISION) -> ClassGroupData:
    """ℓ-part of Cl_S for S = ``split`` (a list of primes of the factor base)."""
    ell = lat.ell
    mod = ell ** precision
    split_idx = {lat.prime_index(P) for P in split}
    keep = [i for i in range(len(lat.primes)) if i not in split_idx]
    rows = [[r[i] for i in keep] for r in lat.valuations]
    divs, gens, _ = _cokernel(rows, len(keep), ell, precision)
    exponent = max(divs) if divs else 1
    generators, witnesses = [], []
    for d, g in zip(divs, gens):
        g = _reduce_divisor(g, exponent)
        full = [0] * len(lat.primes)
        for k, i in enumerate(keep):
            full[i] = g[k]
        generators.append({lat.primes[i].label: full[i] for i in keep if full[i]})
        target = [d * c % mod for c in g]
        x = solve_left_mod(rows, target, mod)
        if x is None:
            raise ArithmeticError("generator order not witnessed by the relations")
        witnesses.append(tuple(x))
    cert = {
        "character_rank": len(lat.elements),
        "target_rank": lat.unit_rank + len(lat.primes) + (1 if lat.torsion_order > 1 else 0),
        "minkowski_bound": round(lat.bound, 3),
        "factor_base": len(lat.primes),
    }
    return ClassGroupData(ell, tuple(divs), tuple(generators), tuple(witnesses),
                          tuple(map(tuple, rows)), tuple(P.label for P in lat.primes),
                          tuple(P.label for P in split), precision, cert)


def solve_left_mod(rows, target, mod):
    """x with x · rows ≡ target (mod ℓ^N), via the modular SNF; None when unsolvable."""
    m = len(rows)
    n = len(target)
    if m == 0:
        return None if any(t % mod for t in target) else []
    snf = smith_normal_form(rows, modulus=mod)
    L = [list(r) for r in snf.left]
    R = [list(r) for r in snf.right]
    # x·rows = t  ⟺  (x L^{-1}) D = t R ; solve y D = t R then x = y L
    tR = [sum(target[k] * R[k][j] for k in range(n)) % mod for j in range(n)]
    y = [0] * m
    for i, d in enumerate(snf.diagonal):
        if d == mod:
            if tR[i] % mod:
                return None
            continue
        if tR[i] % d:
            return None
        y[i] = tR[i] // d
    for j in range(len(snf.diagonal), n):
        if tR[j] % mod:
            return None
    x = [sum(y[i] * L[i][k] for i in range(m)) % mod for k in range(m)]
    return x


def left_kernel_mod(rows, ncols, mod):
    """Generators of {x : x · rows ≡ 0} over ℤ_ℓ, read off the modular SNF."""
    m = len(rows)
    if m == 0:
        return []
    if ncols == 0:
        return [[int(i == j) for j in range(m)] for i in range(m)]
    snf = smith_normal_form(rows, modulus=mod)
    L = [list(r) for r in snf.left]
    out = []
    for i in range(m):
        d = snf.diagonal[i] if i < len(snf.diagonal) else mod
        if d == mod:
            out.append(L[i])
    return out


def s_class_group(K, ell: int, S=None, precision: int = DEFAULT_PRECISION, **kw) -> ClassGroupData:
    """ℓ-part of the S-class group; S defaults to the primes above ℓ, S = [] gives Cl."""
    S = list(K.primes_above(ell)) if S is None else list(S)
    lat = sunit_lattice(K, ell, extra_primes=tuple(P for P in S if P.p != ell), **kw)
    return class_group_from_lattice(lat, S, precision)


def class_group(K, ell: int, precision: int = DEFAULT_PRECISION, **kw) -> ClassGroupData:
    return s_class_group(K, ell, S=[], precision=precision, **kw)


# ---------------------------------------------------------------------------
# S-units
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LadicSUnit:
    """Π b_j^{exponents_j}, exponents in ℤ/ℓ^precision, over the P-unit generators."""

    exponents: tuple
    lattice: SUnitLattice = field(repr=False)

    def valuations(self) -> list:
        mod = self.lattice.ell ** DEFAULT_PRECISION
        return [sum(a * r[i] for a, r in zip(self.exponents, self.lattice.valuations)) % mod
                for i in range(len(self.lattice.primes))]


def s_units(K, ell: int, S=None, precision: int = DEFAULT_PRECISION, **kw) -> UnitGroupData:
    """Generators of ℤ_ℓ ⊗ E_S (S defaults to the primes above ℓ).

    Generators are ℓ-adic exponent vectors over certified P-units; their number
    is r1 + r2 − 1 + |S| + δ and the rank is r1 + r2 − 1 + |S|.
    """
    S = list(K.primes_above(ell)) if S is None else list(S)
    lat = sunit_lattice(K, ell, extra_primes=tuple(P for P in S if P.p != ell), **kw)
    mod = ell ** precision
    s_idx = {lat.prime_index(P) for P in S}
    other = [i for i in range(len(lat.primes)) if i not in s_idx]
    rows = [[r[i] for i in other] for r in lat.valuations]
    ker = left_kernel_mod(rows, len(other), mod)
    gens = tuple(LadicSUnit(tuple(x), lat) for x in ker)
    rank = lat.unit_rank + len(S)
    expected = rank + (1 if lat.torsion_order > 1 else 0)
    if len(gens) != expected:
        raise ArithmeticError(f"S-unit kernel has {len(gens)} generators, expected {expected}")
    return UnitGroupData(gens, lat.torsion, lat.torsion_order, rank, tuple(P.label for P in S), ell,
                         {"character_rank": len(lat.elements)})
