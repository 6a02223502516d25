import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import biquadratic, field
from logcap.exactnum import PadicNumber, iwasawa_log
from logcap.locallog import (DEFAULT_NORMALIZATION, LocalElement, LogNormalization, complete_at,
                             is_cyclotomic_radical, is_global_lth_power, kummer_locally_cyclotomic, log_degree,
                             log_valuation, lth_root, tame_support, wild_places)
from logcap.numberfield import roots_of_unity_order
from logcap.numberfield.units import real_quadratic_unit_element

PRODUCT_SPECS = [biquadratic(42), "compositum: cbrt(17), sqrt(-3)", "poly: x^3 - 2", "poly: x^2 - 67",
                 "poly: x^6 + x^3 + 1"]
LOG_SPECS = [biquadratic(42), biquadratic(29), "compositum: cbrt(17), sqrt(-3)", "poly: x^3 - 2",
             "poly: x^6 + x^3 + 1", "poly: x^2 - 2"]


def random_element(K, rng, size=30, den=True):
    while True:
        x = K.element([rng.randrange(-size, size + 1) for _ in range(K.degree)],
                      rng.randrange(1, 6) if den else 1)
        if not x.is_zero():
            return x


def random_local_unit(pl, rng, size=30, den=True):
    while True:
        x = random_element(pl.K, rng, size, den)
        if x.den % pl.ell and pl.prime.valuation(x) == 0:
            return x


def product_formula_sum(K, x, ell=3, normalization=DEFAULT_NORMALIZATION):
    """Σ deg(𝔭)·ṽ_𝔭(x) over every place where x is not a unit."""
    pls = wild_places(K, ell)
    total = PadicNumber(ell, 64, 0, 0)
    for pl in pls:
        total = total + pl.log_valuation(x, normalization) * pl.log_degree(normalization)
    for P, v in tame_support(x, ell):
        total = total + log_degree(P, ell, normalization) * v
    return total


def vanishes(z: PadicNumber, N=28):
    return z.is_zero() or z.valuation >= N


# -- oracle comparisons ------------------------------------------------------------

@pytest.mark.parametrize("rec", __import__("conftest")._oracle()["biquadratic"], ids=lambda r: str(r["d"]))
def test_unit_local_cubes_and_loc_cyc_against_oracle(rec):
    d = rec["d"]
    K = field(biquadratic(d))
    eps = real_quadratic_unit_element(K, d)
    cubes = sorted(pl.is_lth_power(eps) for pl in wild_places(K, 3))
    assert cubes == sorted(rec["unit_local_cube"])
    rep = kummer_locally_cyclotomic(K, eps, 3)
    wild = sorted(p.locally_cyclotomic for p in rep.places if p.wild)
    assert wild == sorted(rec["unit_locally_cyclotomic"])
    assert rep.verdict == all(rec["unit_locally_cyclotomic"])


# -- product formula and the logarithmic degree ----------------------------------------

@settings(max_examples=25, deadline=None)
@given(st.sampled_from(PRODUCT_SPECS), st.integers(0, 2 ** 32))
def test_product_formula(spec, seed):
    K = field(spec)
    x = random_element(K, random.Random(seed))
    assert vanishes(product_formula_sum(K, x))


@pytest.mark.parametrize("spec", PRODUCT_SPECS)
def test_log_valuation_is_onto_and_degree_normalized(spec):
    K = field(spec)
    for pl in wild_places(K, 3):
        m = pl.degree_exponent
        assert pl.log_degree().valuation == m
        # some element in the generating set has ṽ a unit (ṽ is onto ℤ_ℓ)
        cands = [pl.log_norm_varpi] + [pl.log_norm_unit(g) for g in pl.principal_unit_generators()]
        assert min(c.valuation for c in cands if not c.is_zero()) == m


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(PRODUCT_SPECS), st.integers(0, 2 ** 32))
def test_log_valuation_is_a_homomorphism(spec, seed):
    K = field(spec)
    rng = random.Random(seed)
    x, y = random_element(K, rng), random_element(K, rng)
    for pl in wild_places(K, 3):
        s = pl.log_valuation(x) + pl.log_valuation(y)
        assert s.equals(pl.log_valuation(x * y), 24)


def test_tame_log_valuation_is_the_ordinary_valuation():
    K = field(biquadratic(42))
    x = K.from_rational(7 * 7 * 5)
    for P, v in tame_support(x, 3):
        res = log_valuation(P, x, ell=3)
        assert res.value.equals(PadicNumber.from_int(v, 3, 20))
    with pytest.raises(ValueError):
        log_valuation(K.primes_above(7)[0], x)


# -- local Iwasawa logarithm -------------------------------------------------------------

@settings(max_examples=25, deadline=None)
@given(st.sampled_from(LOG_SPECS), st.integers(0, 2 ** 32))
def test_local_log_is_a_homomorphism(spec, seed):
    K = field(spec)
    rng = random.Random(seed)
    for pl in wild_places(K, 3):
        x, y = random_local_unit(pl, rng), random_local_unit(pl, rng)
        lx, ly = iwasawa_log(LocalElement(pl, x)), iwasawa_log(LocalElement(pl, y))
        assert (lx + ly).equals(iwasawa_log(LocalElement(pl, x * y)))


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(LOG_SPECS), st.integers(0, 2 ** 32))
def test_local_log_kills_torsion(spec, seed):
    K = field(spec)
    rng = random.Random(seed)
    w, zeta = roots_of_unity_order(K, 3)
    minus_one = K.from_rational(-1)
    for pl in wild_places(K, 3):
        x = random_local_unit(pl, rng)
        lx = iwasawa_log(LocalElement(pl, x))
        assert iwasawa_log(LocalElement(pl, x * zeta)).equals(lx)
        assert iwasawa_log(LocalElement(pl, x * minus_one)).equals(lx)
        assert iwasawa_log(LocalElement(pl, zeta)).is_zero()


def _trace_of_local_log(pl, L):
    """Tr_{K_𝔩/ℚ_ℓ} of a LocalLog, as (integer, shift)."""
    t = pl.K.trace_coords([c * e for c, e in zip(L.coords, [1] * len(L.coords))])
    return t, L.shift


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(LOG_SPECS), st.integers(0, 2 ** 32))
def test_trace_of_local_log_is_log_of_local_norm(spec, seed):
    """Two independent routes: the series in K_𝔩 versus Log on ℚ_ℓ of the determinant norm."""
    K = field(spec)
    rng = random.Random(seed)
    for pl in wild_places(K, 3):
        x = random_local_unit(pl, rng)
        L = iwasawa_log(LocalElement(pl, x))
        t, s = _trace_of_local_log(pl, L)
        via_trace = PadicNumber.from_rational(t, 3, L.precision + s) / PadicNumber.from_int(3 ** s, 3, L.precision + s)
        via_norm = pl.log_norm(x)
        assert via_trace.equals(via_norm, L.precision - 2)


# -- ℓ-th powers ---------------------------------------------------------------------------

@settings(max_examples=30, deadline=None)
@given(st.sampled_from(LOG_SPECS), st.integers(0, 2 ** 32))
def test_cubes_are_local_cubes_and_routes_agree(spec, seed):
    K = field(spec)
    rng = random.Random(seed)
    for pl in wild_places(K, 3):
        y = random_local_unit(pl, rng)
        assert pl.is_lth_power(y ** 3)
        # the raw-vector routes see numerators only, so use an integral unit there
        x = random_local_unit(pl, rng, den=False)
        _, u = pl.unit_part(list((x ** 3).num))
        ex = pl.is_lth_power_exhaustive(u)
        assert ex in (None, True)
        _, u = pl.unit_part(list(x.num))
        ex = pl.is_lth_power_exhaustive(u)
        if ex is not None:
            assert ex == pl.is_lth_power_filtration(u)


def test_exhaustive_route_is_exercised_on_every_small_place():
    K = field(biquadratic(42))
    rng = random.Random(7)
    for pl in wild_places(K, 3):
        seen = set()
        for _ in range(40):
            x = random_local_unit(pl, rng, den=False)
            _, u = pl.unit_part(list(x.num))
            ex = pl.is_lth_power_exhaustive(u)
            assert ex is not None and ex == pl.is_lth_power_filtration(u)
            seen.add(ex)
        assert seen == {True, False}


def test_roots_of_unity_are_not_local_cubes():
    for d in (42, 142, 29):
        K = field(biquadratic(d))
        _, zeta = roots_of_unity_order(K, 3)
        assert not any(pl.is_lth_power(zeta) for pl in wild_places(K, 3))


def test_global_cube_roots():
    K = field("compositum: cbrt(17), sqrt(-3)")
    c = K.generators["cbrt(17)"]
    assert lth_root(K.from_rational(17), 3) ** 3 == K.from_rational(17)
    assert is_global_lth_power((c + 2) ** 3, 3)
    assert not is_global_lth_power(c + 2, 3)
    Q = field("poly: x")
    assert is_global_lth_power(Q.from_rational(-27), 3) and not is_global_lth_power(Q.from_rational(9), 3)


# -- Kummer extensions ---------------------------------------------------------------------

def test_tame_ramification_is_an_offender():
    K = field(biquadratic(42))
    rep = kummer_locally_cyclotomic(K, K.from_rational(2), 3)
    assert not rep.verdict
    assert any(lab.startswith("2.") for lab in rep.offenders)


def test_cyclotomic_radical_is_locally_cyclotomic():
    K = field(biquadratic(142))
    _, zeta = roots_of_unity_order(K, 3)
    assert is_cyclotomic_radical(K, zeta, 3)
    assert kummer_locally_cyclotomic(K, zeta, 3).verdict
    eps = real_quadratic_unit_element(K, 142)
    assert not is_cyclotomic_radical(K, eps, 3)


def test_kummer_rejects_degenerate_input():
    K = field(biquadratic(42))
    with pytest.raises(ValueError):
        kummer_locally_cyclotomic(K, K.from_rational(8), 3)
    Q2 = field("poly: x^2 - 2")
    with pytest.raises(ValueError):
        kummer_locally_cyclotomic(Q2, Q2.from_rational(5), 3)


# -- normalization ---------------------------------------------------------------------------

@settings(max_examples=15, deadline=None)
@given(st.sampled_from([2, 4, 5, 7, -1]), st.integers(0, 2 ** 32))
def test_normalization_invariance(scale, seed):
    norm = LogNormalization(scale)
    K = field(biquadratic(42))
    x = random_element(K, random.Random(seed))
    assert vanishes(product_formula_sum(K, x, normalization=norm))
    for pl in wild_places(K, 3):
        a = pl.log_valuation(x) * pl.log_degree()
        b = pl.log_valuation(x, norm) * pl.log_degree(norm)
        assert a.equals(b, 24)
    eps = real_quadratic_unit_element(K, 42)
    assert kummer_locally_cyclotomic(K, eps, 3, normalization=norm).verdict


def test_precision_is_threaded_through_the_local_model():
    K = field(biquadratic(42))
    P = K.primes_above(3)[0]
    lo, hi = complete_at(K, P, 16), complete_at(K, P, 48)
    # the model carries f + 2 guard digits above the requested precision
    assert lo.precision == 16 + P.f + 2 and hi.precision == 48 + P.f + 2
    eps = real_quadratic_unit_element(K, 42)
    assert lo.log_valuation(eps).equals(hi.log_valuation(eps), 12)
