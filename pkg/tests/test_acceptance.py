"""Acceptance criteria 1-7, each reported as one PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -s`` (or ``python tests/test_acceptance.py``).
Timed criteria build their fields from scratch so that no cached state from other tests helps them.
"""
import json
import os
import random
import subprocess
import sys
import time
from contextlib import contextmanager

import pytest

from conftest import LOC_CYC_D, NOT_LOC_CYC_D, ONE_PLACE_D, SEXTIC, biquadratic, ell_part, field, oracle_fields
from logcap.cohomcap import (CyclicGroupModule, cap_report, cap_vanishing_guard, classify_type,
                             cyclotomic_layer_descriptor, abstract_descriptor, enumerate_loc_cyc_cubics,
                             kummer_descriptor, tower_height_one_check)
from logcap.exactnum import PadicNumber, iwasawa_log
from logcap.locallog import (LocalElement, LogNormalization, kummer_locally_cyclotomic, log_degree,
                             tame_support, wild_places)
from logcap.logclassgroup import compute_log_class_group, log_units_equal_ell_units
from logcap.numberfield import (class_group, field_from_spec, fundamental_unit_real_quadratic,
                                roots_of_unity_order, s_class_group)
from logcap.numberfield.units import real_quadratic_unit_element
from modules import ABELIAN_3_GROUPS, all_actions, herbrand_ok, jordan_actions_f3, random_module

pytestmark = pytest.mark.slow

RESULTS = {}
SAMPLES = 1000


@contextmanager
def criterion(name, limit=None):
    """Record one PASS/FAIL line; a time limit turns an overrun into a failure."""
    t0 = time.perf_counter()
    ok, note = False, ""
    try:
        yield
        ok = True
    except AssertionError as exc:
        note = str(exc).splitlines()[0] if str(exc) else "assertion failed"
        raise
    finally:
        dt = time.perf_counter() - t0
        if ok and limit is not None and dt > limit:
            ok, note = False, f"took {dt:.1f} s, limit {limit} s"
        line = f"criterion {name}: {'PASS' if ok else 'FAIL'} ({dt:.1f} s{', limit ' + str(limit) + ' s' if limit else ''})"
        if note:
            line += f" - {note}"
        RESULTS[name] = line
        print("\n" + line)
    if limit is not None:
        assert dt <= limit, f"criterion {name} took {dt:.1f} s, limit {limit} s"


def wild_labels(K):
    return {P.label for P in K.primes_above(3)}


# -- 1: capitulation in the unit and cyclotomic cubic extensions -----------------------------

def test_criterion_1_capitulation():
    with criterion("1", limit=60):
        for d in LOC_CYC_D + NOT_LOC_CYC_D:
            K = field_from_spec(biquadratic(d))
            eps = real_quadratic_unit_element(K, d)
            desc = kummer_descriptor(K, eps, 3)
            rep = cap_report(desc, with_type=False)
            loc_cyc = desc.loc_cyc_degree == desc.degree
            if d in LOC_CYC_D:
                assert loc_cyc and rep.cap_order == 3, f"d={d}: loc_cyc={loc_cyc}, cap={rep.cap_order}"
            else:
                assert not loc_cyc and rep.cap_order == 1, f"d={d}: loc_cyc={loc_cyc}, cap={rep.cap_order}"
                assert desc.offenders and set(desc.offenders) <= wild_labels(K), f"d={d}: {desc.offenders}"
            cyc = cap_report(cyclotomic_layer_descriptor(K, 1, 3))
            assert cyc.cap_order == 1, f"d={d}: cap in K(cos 2π/9) is {cyc.cap_order}"


# -- 2: logarithmic class groups and local cubes ------------------------------------------------

def test_criterion_2_log_class_groups():
    with criterion("2", limit=60):
        for d in LOC_CYC_D + NOT_LOC_CYC_D:
            K = field_from_spec(biquadratic(d))
            order = compute_log_class_group(K, 3).order
            assert order == 3, f"d={d}: |C̃l| = {order}"
            eps = real_quadratic_unit_element(K, d)
            cubes = [pl.is_lth_power(eps) for pl in wild_places(K, 3)]
            assert not any(cubes), f"d={d}: local cube at {cubes}"


# -- 3: the one-place fields --------------------------------------------------------------------

def test_criterion_3_one_place_fields():
    with criterion("3", limit=120):
        for d in ONE_PLACE_D:
            K = field_from_spec(biquadratic(d))
            assert len(K.primes_above(3)) == 1, f"d={d}"
            assert compute_log_class_group(K, 3).order == 3, f"d={d}"
            assert log_units_equal_ell_units(K, 3), f"d={d}: Ẽ ≠ ℰ′"
            eps = real_quadratic_unit_element(K, d)
            assert all(pl.is_lth_power(eps) for pl in wild_places(K, 3)), f"d={d}: ε not a local cube"
            assert kummer_locally_cyclotomic(K, eps, 3).verdict, f"d={d}: not locally cyclotomic"
            assert classify_type(K, eps, 3).type == "unité", f"d={d}"


# -- 4: the sextic field --------------------------------------------------------------------------

def test_criterion_4_sextic():
    with criterion("4", limit=600):
        K = field_from_spec(SEXTIC)
        assert compute_log_class_group(K, 3).order == 3
        en = enumerate_loc_cyc_cubics(K, 3)
        assert len(en.radicals) == 4 and sum(en.cyclotomic) == 1, (len(en.radicals), en.cyclotomic)
        tower = tower_height_one_check(K, 3)
        # the degree-18 checks are beyond the engine; the verdict may be partial but never negative
        assert tower.verdict in ("height 1", "partial"), tower.verdict
        print(f"\n  tower probe: {tower.verdict}")


# -- 5: property suites ----------------------------------------------------------------------------

LOG_SPECS = [biquadratic(42), biquadratic(29), SEXTIC, "poly: x^3 - 2", "poly: x^6 + x^3 + 1",
             "poly: x^2 - 2"]
PRODUCT_SPECS = [biquadratic(42), SEXTIC, "poly: x^3 - 2", "poly: x^2 - 67", "poly: x^6 + x^3 + 1"]


def _random_element(K, rng, den=True):
    while True:
        x = K.element([rng.randrange(-30, 31) for _ in range(K.degree)], rng.randrange(1, 6) if den else 1)
        if not x.is_zero():
            return x


def _random_unit(pl, rng):
    while True:
        x = _random_element(pl.K, rng)
        if x.den % 3 and pl.prime.valuation(x) == 0:
            return x


def test_criterion_5a_log_homomorphism_and_torsion():
    with criterion("5a"):
        rng = random.Random(20261016)
        places = [(pl, roots_of_unity_order(field(s), 3)[1]) for s in LOG_SPECS for pl in wild_places(field(s), 3)]
        for i in range(SAMPLES):
            pl, zeta = places[i % len(places)]
            x, y = _random_unit(pl, rng), _random_unit(pl, rng)
            lx, ly = iwasawa_log(LocalElement(pl, x)), iwasawa_log(LocalElement(pl, y))
            assert (lx + ly).equals(iwasawa_log(LocalElement(pl, x * y))), f"sample {i} at {pl.label}"
            assert iwasawa_log(LocalElement(pl, -x * zeta)).equals(lx), f"torsion sample {i} at {pl.label}"


def _product_sum(K, x, normalization=None):
    kw = {} if normalization is None else {"normalization": normalization}
    total = PadicNumber(3, 64, 0, 0)
    for pl in wild_places(K, 3):
        total = total + pl.log_valuation(x, **kw) * pl.log_degree(**kw)
    for P, v in tame_support(x, 3):
        total = total + log_degree(P, 3, **kw) * v
    return total


def test_criterion_5b_product_formula():
    with criterion("5b"):
        rng = random.Random(5)
        for i in range(SAMPLES):
            K = field(PRODUCT_SPECS[i % len(PRODUCT_SPECS)])
            s = _product_sum(K, _random_element(K, rng))
            assert s.is_zero() or s.valuation >= 28, f"sample {i} in {K.label}: {s}"


def test_criterion_5c_herbrand():
    with criterion("5c"):
        count = 0
        for divs in ABELIAN_3_GROUPS:
            for S in all_actions(divs, 3):
                assert herbrand_ok(CyclicGroupModule(divs, S, 3)), (divs, S)
                count += 1
        for S in jordan_actions_f3(4):
            assert herbrand_ok(CyclicGroupModule((3, 3, 3, 3), S, 3))
            count += 1
        rng = random.Random(81)
        for i in range(SAMPLES):
            M = random_module(rng)
            assert herbrand_ok(M), f"random module {i}: {M}"
        print(f"\n  {count} exhaustive modules, {SAMPLES} random modules")


def test_criterion_5d_normalization_invariance():
    with criterion("5d"):
        rng = random.Random(4)
        for scale in (2, 4, 5, -1):
            norm = LogNormalization(scale)
            for spec in (biquadratic(42), biquadratic(142), biquadratic(67), "poly: x^2 - 67"):
                K = field(spec)
                assert compute_log_class_group(K, 3, normalization=norm).structure == \
                    compute_log_class_group(K, 3).structure, (spec, scale)
                for _ in range(25):
                    s = _product_sum(K, _random_element(K, rng), norm)
                    assert s.is_zero() or s.valuation >= 28, (spec, scale)
            for d in LOC_CYC_D + NOT_LOC_CYC_D:
                K = field(biquadratic(d))
                eps = real_quadratic_unit_element(K, d)
                assert kummer_locally_cyclotomic(K, eps, 3, normalization=norm).verdict == (d in LOC_CYC_D)


def test_criterion_5e_vanishing_guard():
    with criterion("5e"):
        specs = [s for s, _ in oracle_fields()]
        for spec in specs:
            K = field(spec)
            w, zeta = roots_of_unity_order(K, 3)
            for n in (1, 2, 3):
                assert cap_vanishing_guard(K, cyclotomic_layer_descriptor(K, n)) == "holds", (spec, n)
            if w == 1:
                for deg in (3, 9, 27):
                    assert cap_vanishing_guard(K, abstract_descriptor(K, 3, deg, 1, deg)) == "holds", spec
            else:
                assert cap_report(kummer_descriptor(K, zeta, 3)).witnesses["guard"] == "holds", spec


# -- 6: oracle equivalence ------------------------------------------------------------------------------

def test_criterion_6_oracle_equivalence(oracle):
    with criterion("6"):
        for spec, rec in oracle_fields():
            K = field(spec)
            assert K.discriminant == rec["disc"], spec
            assert sorted(class_group(K, 3).divisors) == ell_part(rec["class_group"]), spec
            assert sorted(s_class_group(K, 3).divisors) == ell_part(rec["s_class_group"]), spec
            assert sorted(compute_log_class_group(K, 3).structure) == ell_part(rec["log_class_group"]), spec
        for rec in oracle["quadratic_units"]:
            assert list(fundamental_unit_real_quadratic(rec["d"])) == rec["w_coords"], rec["d"]


# -- 7: determinism of the reproduction report ------------------------------------------------------------

def _reproduce_json(tmp, workers):
    env = dict(os.environ)
    env.pop("LOGCAP_CACHE", None)
    out = subprocess.run([sys.executable, "-m", "logcap.cli", "reproduce", "all", "--format", "json",
                          "--workers", str(workers), "--cache", str(tmp)],
                         capture_output=True, text=True, env=env, timeout=1800)
    assert out.returncode == 0, out.stderr
    rep = json.loads(out.stdout)
    rep.pop("timing")
    return rep


def test_criterion_7_determinism(tmp_path):
    with criterion("7"):
        a = _reproduce_json(tmp_path / "a", 1)
        b = _reproduce_json(tmp_path / "b", 2)
        assert a["status"] == "PASS"
        assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True), "reports differ beyond timing"


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-s", "-q"]))
