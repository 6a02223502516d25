"""Completions above ℓ, logarithmic valuations and locally cyclotomic Kummer extensions.

A place 𝔩 | ℓ is modelled inside O_K/ℓ^M through its idempotent and the two
elements attached to the prime: a global uniformizer π (v_𝔩(π) = 1, a unit at
the other places above ℓ) and τ, for which multiplication by τ/ℓ lowers v_𝔩 by
one without creating denominators.  Local norms are determinants on the
𝔩-component; nothing needs an explicit ℓ-adic field tower.

Normalization: for tame 𝔭, ṽ_𝔭 = v_𝔭 and deg 𝔭 = Log N𝔭.  For wild 𝔩,
deg 𝔩 = ℓ^m / s and ṽ_𝔩 = −s · Log N_{K_𝔩/ℚ_ℓ} / ℓ^m, where ℓ^m is the
ℓ-adic content of Log N_{K_𝔩/ℚ_ℓ}(K_𝔩^×) and s is a unit scale (default 1).
Thus deg 𝔩 · ṽ_𝔩 = −Log N_𝔩 and the product formula holds exactly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .exactnum.linalg import det, rank_mod_p, solve_mod_p
from .exactnum.padic import PadicNumber, PrecisionError, iwasawa_log, vp
from .numberfield.sunits import EngineCapacityError, character_primes
from .numberfield.units import roots_of_unity_order

DEFAULT_PRECISION = 32
EXHAUSTIVE_CAP = 20000


@dataclass(frozen=True)
class LogNormalization:
    """Unit scale s applied to every wild ṽ (deg is divided by s)."""

    scale: int = 1

    def describe(self, ell: int) -> str:
        return f"tame: v, deg=Log N; wild: -{self.scale}*Log(N_local)/{ell}^m, deg={ell}^m/{self.scale}"


DEFAULT_NORMALIZATION = LogNormalization()


@dataclass(frozen=True)
class LogValuationResult:
    place: str
    value: PadicNumber
    residue_mod_ell: int
    residue_mod_ell2: int
    precision: int
    normalization: str

    @property
    def is_zero_mod_ell(self) -> bool:
        return self.residue_mod_ell == 0


# ---------------------------------------------------------------------------
# the local model
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class LocalPlace:
    K: object
    prime: object
    ell: int
    precision: int
    _memo: dict = field(default_factory=dict, repr=False)

    # -- basic data --------------------------------------------------------
    @property
    def e(self) -> int:
        return self.prime.e

    @property
    def f(self) -> int:
        return self.prime.f

    @property
    def q(self) -> int:
        return self.ell ** self.f

    @property
    def local_degree(self) -> int:
        return self.e * self.f

    @property
    def label(self) -> str:
        return self.prime.label

    @property
    def mod(self) -> int:
        return self.ell ** self.precision

    @property
    def idempotent(self) -> list:
        return self.prime.idempotent(self.precision)

    @property
    def uniformizer(self) -> list:
        return list(self.prime.pi)

    def local_polynomial(self) -> list:
        """Characteristic polynomial of θ on this component (the ℚ_ℓ-factor of f)."""
        return self.K.local_charpoly(self.prime, self.precision)

    def __repr__(self):
        return f"LocalPlace({self.label}, e={self.e}, f={self.f}, M={self.precision})"

    # -- coordinate helpers --------------------------------------------------
    def _mul(self, x, y):
        return self.K.mul(x, y, self.mod)

    def _pow(self, x, k):
        return self.K.pow(x, k, self.mod)

    def valuation_vec(self, y) -> int:
        """v_𝔩 of an integral vector, capped at e·M (precision of the model)."""
        cap = self.e * self.precision
        if not any(c % self.mod for c in y):
            return cap
        return min(self.prime.valuation_coords(list(y)), cap)

    def shift(self, y, k: int) -> list:
        """y · (τ/ℓ)^k for integral y with v_𝔩(y) ≥ k (exact, then reduced)."""
        return [c % self.mod for c in self.prime.divide_by_uniformizer(list(y), k)]

    # -- residue field -------------------------------------------------------
    def _residue_data(self):
        if "res" not in self._memo:
            n = self.K.degree
            ell = self.ell
            pbar = [[c % ell for c in r] for r in self.prime.hnf]
            base_rank = rank_mod_p(pbar, ell)
            reps = []
            cur = list(pbar)
            for i in range(n):
                e = [int(i == j) for j in range(n)]
                if rank_mod_p(cur + [e], ell) > rank_mod_p(cur, ell):
                    cur.append(e)
                    reps.append(e)
            assert len(reps) == self.f and base_rank == n - self.f
            self._memo["res"] = (pbar, reps)
        return self._memo["res"]

    def residue_coords(self, y) -> tuple:
        """Coordinates of y mod 𝔩 on the residue representatives."""
        pbar, reps = self._residue_data()
        ell = self.ell
        M = [list(r) for r in pbar] + [list(r) for r in reps]
        from .exactnum.linalg import transpose

        sol = solve_mod_p(transpose(M), [c % ell for c in y], ell)
        if sol is None:
            raise ArithmeticError("residue computation failed")
        return tuple(sol[len(pbar):])

    def residue_lift(self, coords) -> list:
        _, reps = self._residue_data()
        n = self.K.degree
        return [sum(c * r[j] for c, r in zip(coords, reps)) for j in range(n)]

    def residue_elements(self) -> list:
        """Lifts of all q residue classes."""
        import itertools

        return [self.residue_lift(c) for c in itertools.product(range(self.ell), repeat=self.f)]

    def _res_mul(self, a, b):
        return self.residue_coords(self.K.mul(self.residue_lift(a), self.residue_lift(b), self.ell))

    def _res_pow(self, a, k):
        res = self.residue_coords(self.K.one)
        base = a
        while k:
            if k & 1:
                res = self._res_mul(res, base)
            k >>= 1
            if k:
                base = self._res_mul(base, base)
        return res

    def _res_inv(self, a):
        return self._res_pow(a, self.q - 2)

    # -- splitting an element ------------------------------------------------
    def unit_part(self, num) -> tuple:
        """(w, u) with num = ϖ^w · u, ϖ = ℓ/τ, u an 𝔩-unit (vector mod ℓ^M)."""
        w = self.prime.valuation_coords(list(num))
        return w, self.shift(num, w)

    # -- local norms and logarithms -------------------------------------------
    def norm_unit(self, u) -> int:
        """N_{K_𝔩/ℚ_ℓ}(u) mod ℓ^M for a 𝔩-unit u."""
        e = self.idempotent
        one = self.K.one
        y = [(a + b - c) % self.mod for a, b, c in zip(self._mul(u, e), one, e)]
        return det(self.K.mult_matrix(y, self.mod)) % self.mod

    def log_norm_unit(self, u) -> PadicNumber:
        N = self.norm_unit(u)
        if N % self.ell == 0:
            raise ArithmeticError("element is not a unit at the place")
        return iwasawa_log(PadicNumber.from_int(N, self.ell, self.precision), self.precision)

    @property
    def log_norm_varpi(self) -> PadicNumber:
        """Log N_𝔩(ϖ), ϖ = ℓ/τ, computed as Log N(π) − Log N(π·τ/ℓ)."""
        if "lnvarpi" not in self._memo:
            pi = self.uniformizer
            e = self.idempotent
            one = self.K.one
            y = [(a + b - c) % self.mod for a, b, c in zip(self._mul(pi, e), one, e)]
            Npi = det(self.K.mult_matrix(y, self.mod)) % self.mod
            lpi = iwasawa_log(PadicNumber.from_int(Npi, self.ell, self.precision), self.precision)
            c = self.shift(pi, 1)
            self._memo["lnvarpi"] = lpi - self.log_norm_unit(c)
        return self._memo["lnvarpi"]

    def log_norm(self, x) -> PadicNumber:
        """Log N_{K_𝔩/ℚ_ℓ}(x) for a nonzero FieldElement x."""
        if x.is_zero():
            raise ValueError("Log of zero")
        w, u = self.unit_part(x.num)
        val = self.log_norm_unit(u)
        if w:
            val = val + self.log_norm_varpi * w
        if x.den != 1:
            ld = iwasawa_log(PadicNumber.from_int(x.den, self.ell, self.precision), self.precision)
            val = val - ld * self.local_degree
        return val

    # -- logarithmic degree --------------------------------------------------
    def principal_unit_generators(self) -> list:
        """1 + r·π^i, r over residue representatives, 1 ≤ i ≤ ⌊eℓ/(ℓ−1)⌋ + 1."""
        top = self.e * self.ell // (self.ell - 1) + 1
        pi = self.uniformizer
        out = []
        _, reps = self._residue_data()
        for i in range(1, top + 1):
            pii = self._pow(pi, i)
            for r in reps:
                out.append([(a + b) % self.mod for a, b in zip(self.K.one, self._mul(r, pii))])
        return out

    @property
    def degree_exponent(self) -> int:
        """m = min v_ℓ(Log N_𝔩(x)) over K_𝔩^×."""
        if "m" not in self._memo:
            vals = [self.log_norm_varpi] + [self.log_norm_unit(g) for g in self.principal_unit_generators()]
            nz = [v.valuation for v in vals if not v.is_zero()]
            if not nz:
                raise PrecisionError("Log of local norms vanishes to working precision")
            self._memo["m"] = min(nz)
        return self._memo["m"]

    def log_degree(self, normalization: LogNormalization = DEFAULT_NORMALIZATION) -> PadicNumber:
        m = self.degree_exponent
        return PadicNumber.from_int(self.ell ** m, self.ell, self.precision + m) / normalization.scale

    def log_valuation(self, x, normalization: LogNormalization = DEFAULT_NORMALIZATION) -> PadicNumber:
        m = self.degree_exponent
        L = self.log_norm(x)
        if L.is_zero():
            return PadicNumber(self.ell, L.valuation - m, 0, 0)
        val = PadicNumber(self.ell, L.valuation - m, (-L.unit) % self.ell ** L.precision, L.precision)
        if val.valuation < 0:
            raise ArithmeticError("ṽ is not ℓ-integral: degree normalizer too large")
        return val * normalization.scale

    # -- ℓ-th powers ------------------------------------------------------------
    def reduce_to_principal(self, u) -> list:
        """u^(q−1), a principal unit with the same ℓ-th power status (ℓ ∤ q − 1)."""
        return self._pow(u, self.q - 1)

    def _lead(self, y, j):
        """Residue of y / π^j for v_𝔩(y) ≥ j."""
        s = self.residue_coords(self.shift(y, j))
        t = self._memo.get(("tlead", j))
        if t is None:
            t = self.residue_coords(self.shift(self._pow(self.uniformizer, j), j))
            self._memo[("tlead", j)] = t
        return self._res_mul(s, self._res_inv(t))

    def is_lth_power_filtration(self, u) -> bool:
        """Route (a): greedy descent through the unit filtration."""
        ell, e = self.ell, self.e
        u1 = self.reduce_to_principal(u)
        one = self.K.one
        pi = self.uniformizer
        crit = e * ell  # compare j·(ℓ−1) with e·ℓ
        for _ in range(4 * e * ell + 8):
            d = [(a - b) % self.mod for a, b in zip(u1, one)]
            j = self.valuation_vec(d)
            if j >= self.e * self.precision:
                return True
            if j * (ell - 1) > crit:
                return True
            c = self._lead(d, j)
            if j * (ell - 1) < crit:
                if j % ell:
                    return False
                i = j // ell
                y = self._res_pow(c, ell ** (self.f - 1))
            else:
                i = e // (ell - 1)
                x = self._solve_artin_schreier(c)
                if x is None:
                    return False
                y = x
            b = [(a - b_) % self.mod for a, b_ in zip(one, self._mul(self.residue_lift(y), self._pow(pi, i)))]
            u1 = self._mul(u1, self._pow(b, ell))
        raise PrecisionError("unit filtration descent did not terminate")

    def _solve_artin_schreier(self, c):
        """x in the residue field with x^ℓ + w·x = c, w = residue of ℓ/π^e; None if none."""
        ell, f = self.ell, self.f
        ellv = [ell * o for o in self.K.one]
        w = self._lead(ellv, self.e)
        cols = []
        for k in range(f):
            bvec = tuple(int(i == k) for i in range(f))
            img = [(a + b) % ell for a, b in zip(self._res_pow(bvec, ell), self._res_mul(w, bvec))]
            cols.append(img)
        from .exactnum.linalg import transpose

        sol = solve_mod_p(transpose(cols), list(c), ell)
        return tuple(sol) if sol is not None else None

    def is_lth_power_exhaustive(self, u):
        """Route (b): some β mod 𝔩^{e+1} has v_𝔩(β^ℓ − u) ≥ 2e + 1; None when too large to enumerate."""
        ell, e, q = self.ell, self.e, self.q
        count = (q - 1) * q ** e
        if count > EXHAUSTIVE_CAP:
            return None
        import itertools

        reps = self.residue_elements()
        pis = [self._pow(self.uniformizer, i) for i in range(e + 1)]
        target = 2 * e + 1
        units = [r for r in reps if any(c % ell for c in self.residue_coords(r))]
        for r0 in units:
            for rest in itertools.product(reps, repeat=e):
                beta = list(r0)
                for i, r in enumerate(rest, start=1):
                    if any(r):
                        beta = [(a + b) % self.mod for a, b in zip(beta, self._mul(r, pis[i]))]
                d = [(a - b) % self.mod for a, b in zip(self._pow(beta, ell), u)]
                if self.valuation_vec(d) >= target:
                    return True
        return False

    def is_lth_power_unit(self, u) -> bool:
        a = self.is_lth_power_filtration(u)
        b = self.is_lth_power_exhaustive(u)
        if b is not None and a != b:
            raise ArithmeticError(f"ℓ-th power routes disagree at {self.label}: filtration={a}, exhaustive={b}")
        return a

    def is_lth_power(self, x) -> bool:
        """x ∈ (K_𝔩^×)^ℓ for a nonzero FieldElement x."""
        num = list(x.num)
        den = x.den
        # x·den^ℓ = num·den^(ℓ−1) has the same status
        y = [c * den ** (self.ell - 1) for c in num]
        w, u = self.unit_part(y)
        if w % self.ell:
            return False
        return self.is_lth_power_unit(u)

    # -- Iwasawa log on the completion -------------------------------------------
    def iwasawa_log_unit(self, u) -> "LocalLog":
        """Log of a 𝔩-unit as an element of K_𝔩 (coordinates over ℓ^(-s)·O_𝔩)."""
        ell = self.ell
        u1 = self.reduce_to_principal(u)
        # push into U^j with j > e/(ℓ−1) so the series terms stay integral
        t = 0
        one = self.K.one
        while True:
            d = [(a - b) % self.mod for a, b in zip(u1, one)]
            j = self.valuation_vec(d)
            if j * (ell - 1) > self.e:
                break
            u1 = self._pow(u1, ell)
            t += 1
        e_id = self.idempotent
        z = self._mul([(a - b) % self.mod for a, b in zip(u1, one)], e_id)
        acc = [0] * len(z)
        zk = list(one)
        k = 0
        smax = 0
        target = self.e * (self.precision - 2)
        while True:
            k += 1
            zk = self._mul(zk, z)
            if k * j - self.e * vp(k, ell) >= target + self.e * t:
                break
            s = vp(k, ell)
            smax = max(smax, s)
            kk = k // ell ** s
            inv = pow(kk, -1, self.mod)
            if s:
                if any(c % ell ** s for c in zk):
                    raise PrecisionError("series term not divisible as expected")
                term = [(c // ell ** s) * inv % self.mod for c in zk]
            else:
                term = [c * inv % self.mod for c in zk]
            sign = 1 if k % 2 else -1
            acc = [(a + sign * b) % self.mod for a, b in zip(acc, term)]
        inv = pow(self.q - 1, -1, self.mod)
        acc = self._mul([a * inv % self.mod for a in acc], e_id)
        # dividing terms by ℓ^s loses s digits of the ℓ^M model
        return LocalLog(self, tuple(acc), t, self.precision - 2 - t - smax)


@dataclass(frozen=True)
class LocalLog:
    """Value coords/ℓ^shift in K_𝔩, meaningful modulo ℓ^(precision − shift)·O_𝔩."""

    place: LocalPlace = field(repr=False)
    coords: tuple
    shift: int
    precision: int

    def _scaled(self, s):
        return [c * self.place.ell ** (s - self.shift) for c in self.coords]

    def __add__(self, other):
        s = max(self.shift, other.shift)
        mod = self.place.mod * self.place.ell ** s
        a, b = self._scaled(s), other._scaled(s)
        return LocalLog(self.place, tuple((x + y) % mod for x, y in zip(a, b)), s,
                        min(self.precision, other.precision))

    def equals(self, other) -> bool:
        s = max(self.shift, other.shift)
        prec = min(self.precision, other.precision) + s
        if prec <= 0:
            raise PrecisionError("no common precision")
        a, b = self._scaled(s), other._scaled(s)
        d = [x - y for x, y in zip(a, b)]
        return self.place.valuation_vec(d) >= self.place.e * prec if any(d) else True

    def is_zero(self) -> bool:
        return self.equals(LocalLog(self.place, tuple(0 for _ in self.coords), 0, self.precision))


@dataclass(frozen=True)
class LocalElement:
    """A nonzero element of K viewed in K_𝔩 (supports iwasawa_log dispatch)."""

    place: LocalPlace
    x: object

    def iwasawa_log(self, N=None) -> LocalLog:
        """Log x for x a unit at the place (x = y/den^ℓ, Log x = Log y − ℓ·Log den)."""
        pl = self.place
        den = self.x.den
        y = [c * den ** (pl.ell - 1) for c in self.x.num]
        w, u = pl.unit_part(y)
        if w or den % pl.ell == 0:
            raise NotImplementedError("local Iwasawa log is provided for units")
        res = pl.iwasawa_log_unit(u)
        if den != 1:
            d = pl.iwasawa_log_unit([c * den for c in pl.K.one])
            res = res + LocalLog(pl, tuple(-c * pl.ell for c in d.coords), d.shift, d.precision)
        return res


def complete_at(K, prime, precision: int = DEFAULT_PRECISION) -> LocalPlace:
    """Local model of K at a prime above ℓ (memoized per field)."""
    key = ("place", prime.p, prime.position, precision)
    if key not in K._memo:
        M = precision + prime.f + 2
        K._memo[key] = LocalPlace(K, prime, prime.p, M)
    return K._memo[key]


def wild_places(K, ell: int, precision: int = DEFAULT_PRECISION) -> list:
    return [complete_at(K, P, precision) for P in K.primes_above(ell)]


def local_lth_power_test(place: LocalPlace, alpha) -> bool:
    return place.is_lth_power(alpha)


# ---------------------------------------------------------------------------
# logarithmic valuations and degrees
# ---------------------------------------------------------------------------

def log_valuation(place, alpha, normalization: LogNormalization = DEFAULT_NORMALIZATION,
                  ell: int | None = None, precision: int = DEFAULT_PRECISION) -> LogValuationResult:
    """ṽ at a LocalPlace (wild) or at a tame PrimeIdeal."""
    if isinstance(place, LocalPlace):
        ell = place.ell
        val = place.log_valuation(alpha, normalization)
        label = place.label
    else:
        if ell is None:
            raise ValueError("ℓ is needed for a tame prime")
        if place.p == ell:
            raise ValueError("wild prime passed without its local model")
        v = place.valuation(alpha)
        val = PadicNumber.from_int(v, ell, precision)
        label = place.label
    prec = val.absprec if not val.is_zero() else val.valuation
    return LogValuationResult(label, val, val.residue(1) if prec >= 1 else 0,
                              val.residue(2) if prec >= 2 else 0, prec, normalization.describe(ell))


def log_degree(prime, ell: int, normalization: LogNormalization = DEFAULT_NORMALIZATION,
               precision: int = DEFAULT_PRECISION) -> PadicNumber:
    if isinstance(prime, LocalPlace):
        return prime.log_degree(normalization)
    if prime.p == ell:
        return complete_at(prime.K, prime, precision).log_degree(normalization)
    return iwasawa_log(PadicNumber.from_int(prime.norm, ell, precision), precision)


# ---------------------------------------------------------------------------
# global ℓ-th powers
# ---------------------------------------------------------------------------

def _chars(K, ell, count=40):
    key = ("kchars", ell, count)
    if key not in K._memo:
        from .numberfield.sunits import minkowski_bound

        K._memo[key] = character_primes(K, ell, count, max(1000.0, min(minkowski_bound(K), 10 ** 6)))
    return K._memo[key]


def lth_root(alpha, ell: int):
    """β in K with β^ℓ = α, or None.  Characters refute; complex roots then exact checking confirm."""
    import itertools

    import mpmath

    K = alpha.field
    for cp in _chars(K, ell):
        try:
            if cp.value(alpha, ell):
                return None
        except ZeroDivisionError:
            continue
    r1, r2 = K.signature
    # β = γ/den with γ^ℓ = α·den^ℓ integral, so γ has integral coordinates
    y = K.element([c * alpha.den ** (ell - 1) for c in alpha.num])
    dps = 30 + 2 * max(len(str(abs(c))) for c in y.num)
    yv = y.embed(dps)
    M = K.basis_embeddings(dps)
    with mpmath.workdps(dps):
        zeta = mpmath.exp(2j * mpmath.pi / ell)
        roots = []
        for j, z in enumerate(yv):
            if j < r1:
                x = mpmath.re(z)
                r = mpmath.sign(x) * abs(x) ** (mpmath.mpf(1) / ell)
                roots.append([r] if ell % 2 else ([r, -r] if x > 0 else []))
            else:
                r = mpmath.root(z, ell)
                roots.append([r * zeta ** k for k in range(ell)])
        rows = []
        for j, emb in enumerate(M):
            rows.append([mpmath.re(w) for w in emb])
            if j >= r1:
                rows.append([mpmath.im(w) for w in emb])
        A = mpmath.matrix(rows)
        tol = mpmath.mpf(10) ** (-(dps // 4))
        for choice in itertools.product(*roots):
            rhs = []
            for j, z in enumerate(choice):
                rhs.append(mpmath.re(z))
                if j >= r1:
                    rhs.append(mpmath.im(z))
            sol = mpmath.lu_solve(A, mpmath.matrix(rhs))
            cand = [int(mpmath.nint(s)) for s in sol]
            if max(abs(s - c) for s, c in zip(sol, cand)) > tol:
                continue
            beta = K.element(cand, alpha.den)
            if beta ** ell == alpha:
                return beta
    return None


def is_global_lth_power(alpha, ell: int) -> bool:
    K = alpha.field
    if K.degree == 1:
        q = Fraction(alpha.num[0], alpha.den)
        import sympy

        if q < 0 and ell % 2 == 0:
            return False
        return all(m % ell == 0 for m in sympy.factorint(abs(q.numerator)).values()) and \
            all(m % ell == 0 for m in sympy.factorint(q.denominator).values())
    return lth_root(alpha, ell) is not None


# ---------------------------------------------------------------------------
# Kummer extensions K(α^{1/ℓ})
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PlaceVerdict:
    place: str
    wild: bool
    locally_cyclotomic: bool
    valuation_mod_ell: int  # v (tame) or ṽ (wild) mod ℓ


@dataclass(frozen=True)
class KummerReport:
    ell: int
    verdict: bool
    places: tuple
    offenders: tuple
    criterion: str
    precision: int
    normalization: str


def tame_support(alpha, ell: int) -> list:
    """Primes 𝔭 ∤ ℓ with v_𝔭(α) ≠ 0, with the valuations."""
    import sympy

    K = alpha.field
    nrm = alpha.norm()
    ps = set(sympy.factorint(abs(nrm.numerator))) | set(sympy.factorint(nrm.denominator))
    ps |= set(sympy.factorint(alpha.den))
    out = []
    for p in sorted(ps):
        if p == ell:
            continue
        for P in K.primes_above(p):
            v = P.valuation(alpha)
            if v:
                out.append((P, v))
    return out


def local_cyclotomic_at(place: LocalPlace, alpha, zeta) -> bool:
    """K_𝔩(α^{1/ℓ}) ⊂ K_𝔩^c  ⟺  α ∈ ⟨ζ⟩·(K_𝔩^×)^ℓ with ⟨ζ⟩ = μ_{ℓ^∞}(K_𝔩)."""
    if place.is_lth_power(zeta):
        raise EngineCapacityError(
            f"μ_ℓ^∞ grows at {place.label}; local roots of unity beyond the global ones are not modelled")
    a = alpha
    for _ in range(place.ell):
        if place.is_lth_power(a):
            return True
        a = a * zeta
    return False


def kummer_locally_cyclotomic(K, alpha, ell: int = 3, precision: int = DEFAULT_PRECISION,
                              normalization: LogNormalization = DEFAULT_NORMALIZATION) -> KummerReport:
    """Is K(α^{1/ℓ})/K locally cyclotomic (logarithmically unramified) at every place?

    Tame places: v_𝔭(α) ≡ 0 mod ℓ.  Wild places: the Kummer criterion
    α ∈ μ·(K_𝔩^×)^ℓ; ṽ_𝔩(α) mod ℓ is reported alongside (it must vanish there).
    """
    w, zeta = roots_of_unity_order(K, ell)
    if w == 1:
        raise ValueError("μ_ℓ ⊄ K: Kummer theory of degree ℓ does not apply")
    if alpha.is_zero():
        raise ValueError("α must be nonzero")
    if is_global_lth_power(alpha, ell):
        raise ValueError("α is an ℓ-th power in K: the extension is trivial")
    places = []
    offenders = []
    for P, v in tame_support(alpha, ell):
        ok = v % ell == 0
        places.append(PlaceVerdict(P.label, False, ok, v % ell))
        if not ok:
            offenders.append(P.label)
    for pl in wild_places(K, ell, precision):
        ok = local_cyclotomic_at(pl, alpha, zeta)
        vt = pl.log_valuation(alpha, normalization)
        r = vt.residue(1) if not vt.is_zero() or vt.valuation >= 1 else 0
        if ok and r:
            raise ArithmeticError(f"locally cyclotomic at {pl.label} but ṽ ≢ 0 mod ℓ")
        places.append(PlaceVerdict(pl.label, True, ok, r))
        if not ok:
            offenders.append(pl.label)
    return KummerReport(ell, not offenders, tuple(places), tuple(offenders),
                        "tame: v ≡ 0 mod ℓ; wild: α ∈ μ·K_𝔩^ℓ", precision, normalization.describe(ell))


def is_cyclotomic_radical(K, alpha, ell: int = 3) -> bool:
    """K(α^{1/ℓ}) is the first layer of K^c: α ∈ ζ^j·K^ℓ with ℓ ∤ j, ⟨ζ⟩ = μ_{ℓ^∞}(K)."""
    w, zeta = roots_of_unity_order(K, ell)
    if w == 1:
        return False
    a = alpha * zeta
    for _ in range(1, ell):
        if is_global_lth_power(a, ell):
            return True
        a = a * zeta
    return False
