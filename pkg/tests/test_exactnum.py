from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from logcap.exactnum import (PadicNumber, PrecisionError, charpoly, det, elementary_divisors, hensel_factor,
                             hnf_rows, integer_kernel, inverse_mod, inverse_rational, iwasawa_log, kernel_mod_p,
                             left_kernel_mod_p, log_series, minor_gcds, rank_mod_p, smith_normal_form, solve_mod_p,
                             vp)
from logcap.exactnum.linalg import matmul
from logcap.exactnum.polys import prod_mod

PRIMES = st.sampled_from([3, 5, 7])
nonzero_rationals = st.fractions(max_denominator=10 ** 6).filter(lambda q: q != 0)


def small_matrix(rows=st.integers(1, 4), cols=st.integers(1, 4), entries=st.integers(-20, 20)):
    return st.tuples(rows, cols).flatmap(
        lambda rc: st.lists(st.lists(entries, min_size=rc[1], max_size=rc[1]), min_size=rc[0], max_size=rc[0]))


def square_matrix(n=st.integers(1, 5), entries=st.integers(-30, 30)):
    return n.flatmap(lambda k: st.lists(st.lists(entries, min_size=k, max_size=k), min_size=k, max_size=k))


# -- p-adic numbers ------------------------------------------------------------

@given(nonzero_rationals, nonzero_rationals, PRIMES)
def test_padic_field_operations_agree_with_rationals(a, b, p):
    N = 20
    x, y = PadicNumber.from_rational(a, p, N), PadicNumber.from_rational(b, p, N)
    for got, want in ((x + y, a + b), (x - y, a - b), (x * y, a * b), (x / y, a / b)):
        if want == 0:
            assert got.is_zero() or got.valuation >= got.absprec
        else:
            assert got.equals(PadicNumber.from_rational(want, p, N + 40))


@given(nonzero_rationals, PRIMES)
def test_valuation_of_rationals(a, p):
    x = PadicNumber.from_rational(a, p, 10)
    assert x.valuation == vp(a.numerator, p) - vp(a.denominator, p)


def test_padic_zero_and_precision_bookkeeping():
    z = PadicNumber.from_int(3 ** 5, 3, 5)
    assert z.is_zero() and z.absprec == 5
    x = PadicNumber.from_int(2, 3, 10)
    assert x.residue(10) == 2
    with pytest.raises(PrecisionError):
        x.residue(11)
    with pytest.raises(ZeroDivisionError):
        x / z


@given(st.integers(1, 10 ** 9).filter(lambda n: n % 3), st.integers(1, 10 ** 9).filter(lambda n: n % 3))
def test_rational_log_is_a_homomorphism(a, b):
    N = 30
    la = iwasawa_log(PadicNumber.from_int(a, 3, N))
    lb = iwasawa_log(PadicNumber.from_int(b, 3, N))
    assert (la + lb).equals(iwasawa_log(PadicNumber.from_int(a * b, 3, N)))


@given(st.integers(0, 12), st.sampled_from([1, -1]), PRIMES)
def test_rational_log_kills_ell_and_torsion(k, sign, p):
    x = PadicNumber.from_int(sign * p ** k, p, 20)
    assert iwasawa_log(x).is_zero()


def test_log_series_matches_exponential_inverse():
    # log(1 + 3) = log 4 ≡ Σ (−1)^{k+1} 3^k/k; compare against sympy's exact rational partial sum
    N = 12
    want = sum(Fraction((-1) ** (k + 1) * 3 ** k, k) for k in range(1, 80))
    mod = 3 ** N
    got = log_series(3, 3, N)
    assert (want.numerator * pow(want.denominator, -1, mod) - got) % mod == 0


# -- integer linear algebra against sympy ----------------------------------------

@given(small_matrix())
def test_smith_form_against_sympy(M):
    snf = smith_normal_form(M)
    L, R = [list(r) for r in snf.left], [list(r) for r in snf.right]
    D = matmul(matmul(L, M), R)
    m, n = len(M), len(M[0])
    for i in range(m):
        for j in range(n):
            assert D[i][j] == (snf.diagonal[i] if i == j and i < len(snf.diagonal) else 0)
    ref = sympy_snf(sympy.Matrix(M), domain=sympy.ZZ)
    ref_diag = sorted(abs(int(ref[i, i])) for i in range(min(m, n)))
    assert sorted(abs(d) for d in snf.diagonal) == ref_diag
    nz = [abs(d) for d in snf.diagonal if d]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert abs(det(L)) == 1 and abs(det(R)) == 1


@given(small_matrix(entries=st.integers(-5, 5)))
def test_smith_form_against_minor_gcds(M):
    d = [abs(x) for x in smith_normal_form(M, transforms=False).diagonal]
    prods, acc = [], 1
    for x in d:
        acc *= x
        prods.append(acc)
    assert prods == minor_gcds(M)


@given(small_matrix(), st.sampled_from([3 ** 4, 5 ** 3]))
def test_modular_smith_form_matches_integral_one(M, mod):
    p = 3 if mod % 3 == 0 else 5
    over_z = [x for x in smith_normal_form(M, transforms=False).diagonal]
    want = sorted(min(p ** vp(x, p), mod) if x else mod for x in over_z)
    got = sorted(smith_normal_form(M, modulus=mod, transforms=False).diagonal)
    assert got == want


@given(square_matrix())
def test_det_against_sympy(M):
    assert det(M) == int(sympy.Matrix(M).det())


@given(square_matrix(entries=st.integers(-10, 10)))
def test_charpoly_against_sympy(M):
    x = sympy.Symbol("x")
    ref = [int(c) for c in sympy.Matrix(M).charpoly(x).all_coeffs()]
    assert charpoly(M) == ref
    assert charpoly(M, mod=7) == [c % 7 for c in ref]


@given(small_matrix())
def test_hnf_spans_the_same_lattice(M):
    H = hnf_rows(M)
    n = len(M[0])
    assert sorted(elementary_divisors(H, n)) == sorted(elementary_divisors(M, n))
    for i, r in enumerate(H):
        lead = next(j for j, x in enumerate(r) if x)
        assert r[lead] > 0
        assert all(not H[k][lead] or 0 <= H[k][lead] < r[lead] for k in range(i))


@given(small_matrix())
def test_integer_kernel_annihilates(M):
    for v in integer_kernel(M):
        assert all(sum(a * M[i][j] for i, a in enumerate(v)) == 0 for j in range(len(M[0])))
    assert len(integer_kernel(M)) == len(M) - sympy.Matrix(M).rank()


@given(small_matrix(), PRIMES)
def test_kernels_mod_p(M, p):
    K = kernel_mod_p(M, p)
    assert all(sum(a * b for a, b in zip(r, v)) % p == 0 for v in K for r in M)
    assert rank_mod_p(M, p) + len(K) == len(M[0])
    for v in left_kernel_mod_p(M, p):
        assert all(sum(v[i] * M[i][j] for i in range(len(M))) % p == 0 for j in range(len(M[0])))


@given(small_matrix(), st.lists(st.integers(0, 6), min_size=4, max_size=4))
def test_solve_mod_p(M, x):
    n = len(M[0])
    b = [sum(a * c for a, c in zip(r, x[:n])) % 7 for r in M]
    y = solve_mod_p(M, b, 7)
    assert y is not None
    assert [sum(a * c for a, c in zip(r, y)) % 7 for r in M] == b


@given(square_matrix())
def test_inverses(M):
    if det(M) == 0:
        with pytest.raises(ZeroDivisionError):
            inverse_rational(M)
        return
    Inv = inverse_rational(M)
    n = len(M)
    assert all(sum(M[i][k] * Inv[k][j] for k in range(n)) == (i == j) for i in range(n) for j in range(n))
    if det(M) % 3:
        Im = inverse_mod(M, 81)
        assert all(sum(M[i][k] * Im[k][j] for k in range(n)) % 81 == (i == j) for i in range(n) for j in range(n))


# -- ℓ-adic factorisation ------------------------------------------------------------

@pytest.mark.parametrize("f", [[1, 0, 0, -17], [1, 0, 0, -2], [1, 0, 1, 0, 1], [1, 0, 0, 1, 0, 0, 1],
                               [1, 0, 3], [1, -1, -1]])
def test_hensel_factorisation_multiplies_back(f):
    facs = hensel_factor(f, 3, 10)
    assert prod_mod([lf.coefficients for lf in facs], 3 ** 10) == [c % 3 ** 10 for c in f]
    assert sum(lf.e * lf.f for lf in facs) == len(f) - 1


@settings(max_examples=30)
@given(st.lists(st.integers(-9, 9), min_size=3, max_size=3))
def test_hensel_factor_degrees_match_prime_splitting(tail):
    f = [1] + tail
    if sympy.discriminant(sympy.Poly(f, sympy.Symbol("x"))) == 0:
        return
    facs = hensel_factor(f, 3, 8)
    assert sum(lf.degree for lf in facs) == 3
