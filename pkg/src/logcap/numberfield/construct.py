"""Field descriptions: parsing ``poly: …`` / ``compositum: …`` specs and building composita."""
from __future__ import annotations

import re
from fractions import Fraction

import sympy

from ..exactnum.polys import factor_over_q
from .field import DEFAULT_DEGREE_CAP, DegreeCapError, FieldElement, FieldError, NumberField

X = sympy.Symbol("x")
Y = sympy.Symbol("y")


class SpecError(ValueError):
    """Malformed field description."""


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------

def _int_arg(s: str) -> int:
    try:
        return int(sympy.sympify(s.strip()))
    except (sympy.SympifyError, TypeError, ValueError) as exc:
        raise SpecError(f"expected an integer, got {s!r}") from exc


def _period_poly(ell: int, k: int):
    """Minimal polynomial of η = Σ ζ^h over the order-(ℓ−1) subgroup H of (ℤ/ℓ^k)^×."""
    m = ell ** k
    g = sympy.primitive_root(m)
    phi = m // ell * (ell - 1)
    H = sorted({pow(g, j * (phi // (ell - 1)), m) for j in range(ell - 1)})
    z = sympy.exp(2 * sympy.pi * sympy.I / m)
    eta = sum(z ** h for h in H)
    # conjugates: η_a = Σ ζ^{a h} for a in coset representatives
    reps, seen = [], set()
    for a in range(1, m):
        if a % ell and a not in seen:
            reps.append(a)
            seen.update(a * h % m for h in H)
    poly = sympy.Integer(1)
    for a in reps:
        poly *= X - sum(z ** (a * h % m) for h in H)
    coeffs = sympy.Poly(sympy.expand(poly), X).all_coeffs()
    return [int(sympy.re(sympy.N(c, 60)).round()) for c in coeffs], eta


def generator_poly(token: str) -> tuple:
    """(name, minimal polynomial high-first, scale) for a generator token.

    The generator named ``name`` equals (root of the polynomial) · scale.
    """
    t = token.strip().replace(" ", "")
    m = re.fullmatch(r"sqrt\((.+)\)", t)
    if m:
        n = _int_arg(m.group(1))
        return f"sqrt({n})", [1, 0, -n], Fraction(1)
    m = re.fullmatch(r"cbrt\((.+)\)", t)
    if m:
        n = _int_arg(m.group(1))
        return f"cbrt({n})", [1, 0, 0, -n], Fraction(1)
    m = re.fullmatch(r"root\((.+),(.+)\)", t)
    if m:
        n, k = _int_arg(m.group(1)), _int_arg(m.group(2))
        return f"root({n},{k})", [1] + [0] * (k - 1) + [-n], Fraction(1)
    m = re.fullmatch(r"zeta\((.+)\)", t)
    if m:
        k = _int_arg(m.group(1))
        return f"zeta({k})", [int(c) for c in sympy.Poly(sympy.cyclotomic_poly(k, X), X).all_coeffs()], Fraction(1)
    m = re.fullmatch(r"cos\(2\*pi/(\d+)\)", t)
    if m:
        k = int(m.group(1))
        # 2cos(2π/k) = ζ_k + ζ_k^{-1}
        z = sympy.exp(2 * sympy.pi * sympy.I / k)
        mp = sympy.minimal_polynomial(z + 1 / z, X)
        return f"cos(2*pi/{k})", [int(c) for c in sympy.Poly(mp, X).all_coeffs()], Fraction(1, 2)
    raise SpecError(f"unknown generator {token!r}")


def parse_polynomial(expr: str) -> list:
    s = expr.strip().replace("^", "**")
    s = re.sub(r"(\d)\s*x", r"\1*x", s)
    try:
        P = sympy.Poly(sympy.sympify(s, locals={"x": X}), X)
    except (sympy.SympifyError, sympy.PolynomialError, TypeError, SyntaxError) as exc:
        raise SpecError(f"cannot parse polynomial {expr!r}") from exc
    if P.degree() < 1:
        raise SpecError("polynomial must have positive degree")
    coeffs = [Fraction(str(c)) for c in P.all_coeffs()]
    return coeffs


def monic_integral(coeffs: list) -> tuple:
    """Return (g, c) with g monic integral and g(c·x) ∝ f, i.e. root_f = root_g / c."""
    lead = coeffs[0]
    f = [c / lead for c in coeffs]
    n = len(f) - 1
    c = 1
    while True:
        g = [f[k] * c ** k for k in range(n + 1)]
        if all(x.denominator == 1 for x in g):
            return [int(x) for x in g], c
        c += 1


# ---------------------------------------------------------------------------
# compositum
# ---------------------------------------------------------------------------

def _poly_in_field(K: NumberField, coeffs: list) -> list:
    return [K.from_rational(c) for c in coeffs]


def _poly_divmod(a: list, b: list) -> tuple:
    a = list(a)
    q = []
    lead_inv = b[0].inverse()
    while len(a) >= len(b):
        c = a[0] * lead_inv
        q.append(c)
        for i in range(len(b)):
            a[i] = a[i] - c * b[i]
        a.pop(0)
    while a and a[0].is_zero():
        a.pop(0)
    return q, a


def poly_gcd(a: list, b: list) -> list:
    """Monic gcd of polynomials with FieldElement coefficients (high first)."""
    while b:
        _, r = _poly_divmod(a, b)
        a, b = b, r
    inv = a[0].inverse()
    return [c * inv for c in a]


def _eval_power_basis(K: NumberField, coeffs: list, x: FieldElement) -> FieldElement:
    """Σ coeffs[k] x^k (low first)."""
    acc = K.from_rational(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def common_root(K: NumberField, f: list, g_shift) -> FieldElement:
    """The unique common root in K of two polynomials over K."""
    h = poly_gcd(f, g_shift)
    if len(h) != 2:
        raise ArithmeticError("expected a single common root")
    return -h[1]


def compositum(K: NumberField, token: str, degree_cap: int = DEFAULT_DEGREE_CAP,
               label: str | None = None) -> NumberField:
    name, g, scale = generator_poly(token)
    return compositum_with_poly(K, name, g, scale, degree_cap, label)


def compositum_with_poly(K: NumberField, name: str, g: list, scale: Fraction,
                         degree_cap: int = DEFAULT_DEGREE_CAP, label: str | None = None) -> NumberField:
    f = list(K.poly)
    fy = sympy.Poly(f, Y).as_expr()
    for k in (1, -1, 2, -2, 3, -3, 4, 5):
        gx = sympy.Poly(g, X).as_expr().subs(X, X - k * Y)
        res = sympy.Poly(sympy.resultant(fy, sympy.expand(gx), Y), X)
        rc = [int(c) for c in res.all_coeffs()]
        facs = factor_over_q(rc)
        if any(m > 1 for _, m in facs):
            continue
        facs.sort(key=lambda t: (-len(t[0]), [abs(c) for c in t[0]]))
        h = facs[0][0]
        break
    else:
        raise FieldError("no primitive element found for the compositum")
    if len(h) - 1 > degree_cap:
        raise DegreeCapError(f"compositum degree {len(h) - 1} exceeds the configured cap {degree_cap}")
    new_label = label or (f"{K.label}, {name}" if K.degree > 1 else name)
    E = NumberField.equation_order(h)
    gamma = E.theta()
    if K.degree == 1:
        alpha = E.from_rational(-K.poly[1])
    else:
        # α is the common root of f(y) and g(γ − k y)
        fE = _poly_in_field(E, f)
        G = sympy.Symbol("G")
        gy = sympy.Poly(sympy.expand(sympy.Poly(g, X).as_expr().subs(X, G - k * Y)), Y)
        coeffs = []
        for c in gy.all_coeffs():
            acc = E.from_rational(0)
            for a in sympy.Poly(c, G).all_coeffs():
                acc = acc * gamma + E.from_rational(Fraction(str(a)))
            coeffs.append(acc)
        alpha = common_root(E, fE, coeffs)
    beta = (gamma - alpha) * Fraction(1, k)
    # O_K[β] is an order of the compositum; start round 2 from it
    start = None
    if (len(h) - 1) == K.degree * (len(g) - 1):
        omegas = [_eval_power_basis(E, list(r), alpha) for r in K.basis]
        start, bj = [], E.from_rational(1)
        for _ in range(len(g) - 1):
            start.extend((w * bj).power_basis() for w in omegas)
            bj = bj * beta
    N = NumberField.from_polynomial(h, label=new_label, degree_cap=degree_cap, start=start)
    alpha = N.from_power_basis(alpha.power_basis())
    beta = N.from_power_basis(beta.power_basis())
    gens = {}
    for gname, el in K.generators.items():
        gens[gname] = _eval_power_basis(N, el.power_basis(), alpha)
    gens[name] = beta * scale
    N.generators.update(gens)
    N._memo["theta_of_parent"] = alpha
    return N


# ---------------------------------------------------------------------------
# public entry points
# ---------------------------------------------------------------------------

def rationals() -> NumberField:
    return NumberField.from_polynomial([1, 0], label="Q")


def field_from_spec(spec: str, degree_cap: int = DEFAULT_DEGREE_CAP) -> NumberField:
    """Build a field from ``poly: x^3 - 17`` or ``compositum: sqrt(42), sqrt(-3)``."""
    if not isinstance(spec, str) or ":" not in spec:
        raise SpecError(f"field spec must look like 'poly: …' or 'compositum: …', got {spec!r}")
    kind, _, body = spec.partition(":")
    kind = kind.strip().lower()
    body = body.strip()
    if kind == "poly":
        coeffs = parse_polynomial(body)
        g, c = monic_integral(coeffs)
        K = NumberField.from_polynomial(g, label=canonical_spec(spec), degree_cap=degree_cap)
        K.generators["x"] = K.theta() * Fraction(1, c)
        return K
    if kind == "compositum":
        tokens = _split_tokens(body)
        if not tokens:
            raise SpecError("empty compositum")
        K = rationals()
        for tok in tokens:
            K = compositum(K, tok, degree_cap)
        object.__setattr__(K, "label", canonical_spec(spec))
        return K
    raise SpecError(f"unknown spec kind {kind!r}")


def _split_tokens(body: str) -> list:
    out, depth, cur = [], 0, ""
    for ch in body:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            out.append(cur.strip())
            cur = ""
        else:
            cur += ch
    if cur.strip():
        out.append(cur.strip())
    if depth != 0:
        raise SpecError("unbalanced parentheses")
    return out


def canonical_spec(spec: str) -> str:
    kind, _, body = spec.partition(":")
    kind = kind.strip().lower()
    if kind == "poly":
        g = parse_polynomial(body)
        return "poly: " + str(sympy.Poly(g, X).as_expr()).replace("**", "^")
    names = [generator_poly(t)[0] for t in _split_tokens(body)]
    return "compositum: " + ", ".join(names)


def build_field(desc, degree_cap: int = DEFAULT_DEGREE_CAP) -> NumberField:
    """Accepts a spec string, a list of integer coefficients, or a NumberField."""
    if isinstance(desc, NumberField):
        return desc
    if isinstance(desc, str):
        return field_from_spec(desc, degree_cap)
    return NumberField.from_polynomial(list(desc), degree_cap=degree_cap)


def cyclotomic_layer(K: NumberField, n: int, ell: int = 3, degree_cap: int = DEFAULT_DEGREE_CAP) -> NumberField:
    """n-th layer K_n of the cyclotomic ℤ_ℓ-extension: K·ℚ_n, ℚ_n ⊂ ℚ(ζ_{ℓ^{n+1}}) of degree ℓ^n."""
    if n == 0:
        return K
    if n < 0:
        raise ValueError("layer index must be ≥ 0")
    g, _ = _period_poly(ell, n + 1)
    name = f"cos(2*pi/{ell ** (n + 1)})" if ell == 3 and n == 1 else f"eta({ell ** (n + 1)})"
    scale = Fraction(1, 2) if name.startswith("cos") else Fraction(1)
    lab = f"{K.label} | cyclotomic layer {n}"
    if K.degree == 1:
        L = NumberField.from_polynomial(g, label=lab, degree_cap=degree_cap)
        L.generators[name] = L.theta() * scale
        return L
    return compositum_with_poly(K, name, g, scale, degree_cap, label=lab)


def kummer_extension(K: NumberField, alpha: FieldElement, ell: int = 3,
                     degree_cap: int = DEFAULT_DEGREE_CAP) -> NumberField:
    """Absolute field K(α^{1/ℓ}), generated by β + kθ with β^ℓ = α.

    Its defining polynomial is Res_y(f(y), (x − k·y)^ℓ − α(y)), the first
    squarefree one over k = 0, 1, −1, 2, … .
    """
    n = K.degree
    if n * ell > degree_cap:
        raise DegreeCapError(f"Kummer extension degree {n * ell} exceeds the configured cap {degree_cap}")
    f = list(K.poly)
    fy = sympy.Poly(f, Y).as_expr()
    a = alpha.power_basis()
    ay = sum(sympy.Rational(Fraction(c).numerator, Fraction(c).denominator) * Y ** i for i, c in enumerate(a))
    for k in (0, 1, -1, 2, -2, 3):
        g = sympy.expand((X - k * Y) ** ell - ay)
        res = sympy.Poly(sympy.resultant(fy, g, Y), X)
        coeffs = [sympy.Rational(c) for c in res.all_coeffs()]
        den = sympy.ilcm(*[c.q for c in coeffs])
        rc = [int(c * den) for c in coeffs]
        if sympy.degree(sympy.gcd(res, res.diff(X)), X) > 0:
            continue
        facs = factor_over_q(rc)
        if len(facs) != 1:
            raise FieldError("α is an ℓ-th power in K: the Kummer extension is trivial")
        h, _ = monic_integral([Fraction(c) for c in facs[0][0]])
        L = NumberField.from_polynomial(h, label=f"{K.label} | kummer {ell}", degree_cap=degree_cap)
        return L
    raise FieldError("no primitive element found for the Kummer extension")
