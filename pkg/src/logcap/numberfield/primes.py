"""Prime ideals of O_K: decomposition of p by Buchmann–Lenstra splitting of O_K/pO_K.

Every prime carries
  * an 𝔽_p idempotent cutting out its component of O_K/pO_K,
  * τ ∈ O_K with τ·𝔭 ⊂ pO_K and τ ∉ pO_K, so that multiplication by τ/p lowers
    v_𝔭 by one and does not lower any other valuation,
  * a uniformizer π with v_𝔭(π) = 1 and v_𝔭'(π) = 0 for the other 𝔭' | p.
No index-divisor special case exists: the algebra O_K/pO_K is used directly.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from ..exactnum.linalg import det, left_kernel_mod_p, rank_mod_p
from ..exactnum.padic import vp
from ..exactnum.polys import charpoly, factor_mod_p
from .algebra import frobenius_matrix, lattice_from_mod_p, mul, mult_matrix, radical_mod_p


@dataclass(frozen=True, eq=False)
class PrimeIdeal:
    K: object
    p: int
    e: int
    f: int
    idem: tuple  # idempotent mod p (ω coordinates)
    hnf: tuple  # ℤ-basis of 𝔭 (ω coordinates)
    pi: tuple
    tau: tuple
    position: int = 0
    _memo: dict = field(default_factory=dict, repr=False)

    @property
    def norm(self) -> int:
        return self.p ** self.f

    @property
    def label(self) -> str:
        return f"{self.p}.{self.position}"

    def two_element(self) -> tuple:
        """Generators (p, π) of 𝔭."""
        return self.p, self.K.element(self.pi)

    def __repr__(self):
        return f"PrimeIdeal(p={self.p}, e={self.e}, f={self.f}, #{self.position})"

    # -- valuations --------------------------------------------------------
    def valuation_coords(self, num) -> int:
        """v_𝔭 of a nonzero integral element given by ω coordinates."""
        if not any(num):
            raise ValueError("valuation of 0")
        p, T = self.p, self.K.T
        y = list(num)
        v = 0
        # strip rational p-powers first
        g = 0
        for c in y:
            if c:
                g = vp(c, p) if g == 0 else min(g, vp(c, p))
                if g == 0:
                    break
        if g:
            y = [c // p ** g for c in y]
            v += self.e * g
        while True:
            y = mul(T, y, self.tau)
            if any(c % p for c in y):
                return v
            y = [c // p for c in y]
            v += 1

    def valuation(self, x) -> int:
        """v_𝔭 of a nonzero FieldElement."""
        v = self.valuation_coords(list(x.num))
        if x.den != 1:
            v -= self.e * vp(x.den, self.p)
        return v

    def divide_by_uniformizer(self, num, k: int = 1) -> list:
        """num·(τ/p)^k; exact when v_𝔭(num) ≥ k."""
        y = list(num)
        for _ in range(k):
            y = mul(self.K.T, y, self.tau)
            if any(c % self.p for c in y):
                raise ArithmeticError("element not divisible by the uniformizer")
            y = [c // self.p for c in y]
        return y

    # -- p-adic component ----------------------------------------------------
    def idempotent(self, N: int) -> list:
        """Lift of the 𝔽_p idempotent to O_K/p^N (Newton: e ← 3e² − 2e³)."""
        key = ("idem", N)
        if key not in self._memo:
            mod = self.p ** N
            T = self.K.T
            e = list(self.idem)
            prec = 1
            while True:
                prec = min(2 * prec, N)
                m = self.p ** prec
                e2 = mul(T, e, e, m)
                e3 = mul(T, e2, e, m)
                e = [(3 * a - 2 * b) % m for a, b in zip(e2, e3)]
                if prec == N:
                    break
            chk = mul(T, e, e, mod)
            assert chk == [c % mod for c in e]
            self._memo[key] = e
        return self._memo[key]


def _rng(p: int, n: int) -> random.Random:
    return random.Random(1000003 * p + n)


def _split(T, eps, w, p):
    """Split idempotent eps using w ∈ W·eps; returns finer idempotents or None."""
    n = len(w)
    pieces = []
    vals = []
    # eigenvalues of w on eps·A: roots of its characteristic polynomial there,
    # i.e. of charpoly(w on A) / x^dim((1 − eps)A), since w kills (1 − eps)A
    epsrank = rank_mod_p([mul(T, eps, [int(i == j) for j in range(n)], p) for i in range(n)], p)
    cp = charpoly(mult_matrix(T, w, p), p)
    k = n - epsrank
    if any(c % p for c in cp[len(cp) - k:]):
        raise ArithmeticError("multiplication by w does not vanish off eps")
    cp = cp[: len(cp) - k]
    vals = sorted((-g[1]) % p for g, _ in factor_mod_p(cp, p) if len(g) == 2)
    if len(vals) <= 1:
        return None
    for c in vals:
        e = list(eps)
        for c2 in vals:
            if c2 == c:
                continue
            inv = pow((c - c2) % p, -1, p)
            fac = [((a - c2 * b) * inv) % p for a, b in zip(w, eps)]
            e = mul(T, e, fac, p)
        pieces.append(e)
    return pieces


def decompose_prime(K, p: int) -> list:
    """All primes of O_K above p, sorted deterministically."""
    n = K.degree
    T = K.T
    one = list(K.one)
    if n == 1:
        return [PrimeIdeal(K, p, 1, 1, (1,), ((p,),), (p,), (1,), 0)]
    rad = radical_mod_p(T, p, one)
    F = frobenius_matrix(T, p, one)
    FmI = [[(F[i][j] - int(i == j)) % p for j in range(n)] for i in range(n)]
    Wb = left_kernel_mod_p(FmI, p)
    r = len(Wb)
    idems = [one]
    rng = _rng(p, n)

    def wdim(eps):
        return rank_mod_p([mul(T, w, eps, p) for w in Wb], p)

    done = []
    while idems:
        eps = idems.pop()
        if wdim(eps) == 1:
            done.append(eps)
            continue
        for _ in range(200):
            coeffs = [rng.randrange(p) for _ in Wb]
            w = [sum(c * v[k] for c, v in zip(coeffs, Wb)) % p for k in range(n)]
            w = mul(T, w, eps, p)
            pieces = _split(T, eps, w, p)
            if pieces:
                idems.extend(pieces)
                break
        else:
            raise ArithmeticError(f"could not split the algebra O_K/{p}O_K")
    assert len(done) == r
    primes = []
    for eps in done:
        onem = [(a - b) % p for a, b in zip(one, eps)]
        gens = [mul(T, onem, [int(i == j) for j in range(n)], p) for i in range(n)] + [list(v) for v in rad]
        dim_pbar = rank_mod_p(gens, p)
        f = n - dim_pbar
        dim_eA = rank_mod_p([mul(T, eps, [int(i == j) for j in range(n)], p) for i in range(n)], p)
        e = dim_eA // f
        # F_p basis of pbar, then lattice 𝔭 = pO + lift(pbar)
        pbar = _row_basis(gens, p)
        H = lattice_from_mod_p(pbar, p, n)
        # τ: annihilator of pbar in O/pO
        big = [sum((mul(T, [int(i == j) for j in range(n)], b, p) for b in pbar), []) for i in range(n)]
        ann = left_kernel_mod_p(big, p)
        tau = next(v for v in ann if any(v))
        primes.append(dict(e=e, f=f, idem=eps, hnf=H, tau=tau))
    # uniformizers: need all primes' data to check valuations
    out = []
    for data in primes:
        pi = _find_uniformizer(K, p, data, rng)
        out.append((data, pi))
    out.sort(key=lambda t: (t[0]["f"], t[0]["e"], [list(r) for r in t[0]["hnf"]]))
    result = []
    for pos, (d, pi) in enumerate(out):
        result.append(PrimeIdeal(K, p, d["e"], d["f"], tuple(d["idem"]), tuple(map(tuple, d["hnf"])),
                                 tuple(pi), tuple(d["tau"]), pos))
    assert sum(P.e * P.f for P in result) == n
    return result


def _row_basis(rows, p):
    """Independent subset spanning the same 𝔽_p space."""
    basis = []
    for r in rows:
        cand = basis + [[c % p for c in r]]
        if rank_mod_p(cand, p) == len(cand):
            basis = cand
    return basis


def _find_uniformizer(K, p, data, rng):
    """Element π of 𝔭 with v_p(N π) = f, i.e. v_𝔭(π) = 1 and a unit at the other primes above p."""
    H = data["hnf"]
    n = K.degree
    f = data["f"]
    cands = [list(h) for h in H]
    for h in cands:
        nm = det(K.mult_matrix(h))
        if nm and vp(nm, p) == f:
            return h
    for trial in range(5000):
        bound = 1 + trial // 200
        c = [rng.randint(-bound, bound) for _ in range(n)]
        x = [sum(ci * H[i][k] for i, ci in enumerate(c)) for k in range(n)]
        if not any(x):
            continue
        nm = det(K.mult_matrix(x))
        if nm and vp(nm, p) == f:
            return x
    raise ArithmeticError(f"no uniformizer found above {p}")
