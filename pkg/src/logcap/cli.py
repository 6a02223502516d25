"""Command-line front end: ``logcap field analyze``, ``logcap cap``, ``logcap reproduce``."""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
import time
from fractions import Fraction

import sympy

from . import __version__
from .cache import Cache, cache_key, default_cache_dir
from .cohomcap import CONJECTURE_FLAGS, HypothesisError, cap_report, cyclotomic_layer_descriptor, kummer_descriptor
from .locallog import wild_places
from .logclassgroup import GrossKuzminError, compute_log_class_group
from .numberfield.construct import SpecError, canonical_spec, field_from_spec
from .numberfield.field import DegreeCapError, FieldError
from .numberfield.sunits import EngineCapacityError, class_group, s_class_group, s_units
from .numberfield.units import fundamental_unit_real_quadratic, real_quadratic_unit_element, roots_of_unity_order
from .reproduce import SECTIONS, reproduce

SCHEMA = 1
EXIT_OK, EXIT_MISMATCH, EXIT_PARSE, EXIT_CAPACITY = 0, 1, 2, 3

log = logging.getLogger("logcap")


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------------------
# argument handling
# ---------------------------------------------------------------------------

def _common(p):
    p.add_argument("--ell", type=int, default=3, help="the prime ℓ (odd, default 3)")
    p.add_argument("--precision", type=int, default=32, help="ℓ-adic working precision (≥ 8)")
    p.add_argument("--degree-cap", type=int, default=18, help="largest absolute degree to build")
    p.add_argument("--cache", default=None, help="cache directory (overrides $LOGCAP_CACHE)")
    p.add_argument("--format", choices=("text", "json"), default="text")


def _field_args(p):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--poly", help='defining polynomial, e.g. "x^3 - 17"')
    g.add_argument("--compositum", help='comma-separated generators, e.g. "sqrt(42),sqrt(-3)"')


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="logcap", description="ℓ-adic invariants, logarithmic classes and capitulation.")
    ap.add_argument("--version", action="version", version=f"logcap {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    fld = sub.add_parser("field", help="field invariants")
    fsub = fld.add_subparsers(dest="action", required=True)
    an = fsub.add_parser("analyze", help="discriminant, primes above ℓ, units, Cl′ and C̃l")
    _field_args(an)
    _common(an)

    cap = sub.add_parser("cap", help="capitulation in a cyclic extension L/K")
    _field_args(cap)
    ext = cap.add_mutually_exclusive_group(required=True)
    ext.add_argument("--kummer", help='radical: "fundamental-unit", "root-of-unity" or ω-coordinates "[a,b,...]"')
    ext.add_argument("--cyclotomic-layer", type=int, help="layer n of the cyclotomic ℤ_ℓ-extension")
    _common(cap)

    rep = sub.add_parser("reproduce", help="recompute the reference tables and diff")
    rep.add_argument("section", choices=SECTIONS + ("all",))
    rep.add_argument("--deep", action="store_true", help="attempt the degree-18 tower checks")
    rep.add_argument("--workers", type=int, default=1)
    _common(rep)
    return ap


def _check_config(args):
    if args.ell < 3 or not sympy.isprime(args.ell):
        raise UsageError("--ell must be an odd prime")
    if args.precision < 8:
        raise UsageError("--precision must be at least 8")
    if getattr(args, "workers", 1) < 1:
        raise UsageError("--workers must be positive")


def _spec(args) -> str:
    if args.poly is not None:
        return canonical_spec("poly: " + args.poly)
    return canonical_spec("compositum: " + args.compositum)


def _cache(args) -> Cache:
    return Cache(args.cache if args.cache else default_cache_dir())


def _config(args) -> dict:
    return {"ell": args.ell, "precision": args.precision, "degree_cap": args.degree_cap}


def envelope(command: str, args, body: dict, timing: dict) -> dict:
    return {
        "schema": SCHEMA,
        "tool": "logcap",
        "version": __version__,
        "command": command,
        "config": _config(args),
        "flags": list(CONJECTURE_FLAGS),
        **body,
        "timing": timing,
    }


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _real_quadratic_generators(K):
    out = []
    for name in K.generators:
        if name.startswith("sqrt(") and name.endswith(")"):
            try:
                d = int(name[5:-1])
            except ValueError:
                continue
            if d > 1:
                out.append(d)
    return out


def _unit_info(K, ell):
    info = {"rank": sum(K.signature) - 1}
    for d in _real_quadratic_generators(K):
        a, b = fundamental_unit_real_quadratic(d)
        w = f"sqrt({d})" if d % 4 != 1 else f"(1+sqrt({d}))/2"
        info[f"fundamental_unit_Q(sqrt({d}))"] = f"{a} + {b}*{w}"
    su = s_units(K, ell)
    info["ell_units_rank"] = su.rank
    info["ell_units_generators_ladic"] = len(su.generators)
    return info


def analyze_field(spec: str, ell: int, precision: int, degree_cap: int) -> dict:
    K = field_from_spec(spec, degree_cap)
    w, _ = roots_of_unity_order(K, ell)
    from .numberfield.units import roots_of_unity

    mu, _ = roots_of_unity(K)
    places = []
    for pl in wild_places(K, ell, precision):
        places.append({"label": pl.label, "e": pl.e, "f": pl.f, "deg_exponent": pl.degree_exponent})
    cl = class_group(K, ell, precision)
    clp = s_class_group(K, ell, precision=precision)
    lcg = compute_log_class_group(K, ell, precision)
    return {
        "spec": spec,
        "degree": K.degree,
        "polynomial": [int(c) for c in K.poly],
        "signature": list(K.signature),
        "discriminant": int(K.discriminant),
        "primes_above_ell": places,
        "roots_of_unity": mu,
        "roots_of_unity_ell_part": w,
        "units": _unit_info(K, ell),
        "class_group_ell_part": list(cl.divisors),
        "ell_class_group": list(clp.divisors),
        "log_class_group": {
            "structure": lcg.structure,
            "order": lcg.order,
            "generators": [{k: int(v) for k, v in sorted(g.items())} for g in lcg.generators],
            "base_prime": lcg.base_prime,
            "stable": lcg.stable,
            "exact_sequence": lcg.exact_sequence,
            "normalization": lcg.normalization,
        },
        "certificate": lcg.certificate,
        "precision": precision,
    }


def cmd_field_analyze(args) -> tuple:
    spec = _spec(args)
    cache = _cache(args)
    key = cache_key(spec, args.ell, args.precision, kind=f"analyze:cap={args.degree_cap}")
    t0 = time.perf_counter()
    data = cache.get_or_compute(key, lambda: analyze_field(spec, args.ell, args.precision, args.degree_cap))
    return envelope("field analyze", args, {"field": data}, {"seconds": round(time.perf_counter() - t0, 3)}), EXIT_OK


def _radical(K, how: str, ell: int):
    if how == "fundamental-unit":
        ds = _real_quadratic_generators(K)
        if len(ds) != 1:
            raise UsageError("fundamental-unit needs exactly one real quadratic generator sqrt(d) in the field spec")
        return real_quadratic_unit_element(K, ds[0]), f"fundamental unit of Q(sqrt({ds[0]}))"
    if how == "root-of-unity":
        w, z = roots_of_unity_order(K, ell)
        return z, f"generator of mu_{w}"
    s = how.strip()
    if s.startswith("[") and s.endswith("]"):
        try:
            coords = [Fraction(c.strip()) for c in s[1:-1].split(",")]
        except ValueError as exc:
            raise UsageError(f"bad coordinates {how!r}") from exc
        if len(coords) != K.degree:
            raise UsageError(f"expected {K.degree} coordinates")
        den = 1
        for c in coords:
            den = den * c.denominator // math.gcd(den, c.denominator)
        return K.element([int(c * den) for c in coords], den), "element given in the integral basis"
    raise UsageError(f"unknown radical {how!r}")


def cmd_cap(args) -> tuple:
    spec = _spec(args)
    t0 = time.perf_counter()
    K = field_from_spec(spec, args.degree_cap)
    if args.cyclotomic_layer is not None:
        if args.cyclotomic_layer < 0:
            raise UsageError("layer index must be ≥ 0")
        desc = cyclotomic_layer_descriptor(K, args.cyclotomic_layer, args.ell)
        ext = {"kind": "cyclotomic-layer", "layer": args.cyclotomic_layer}
    else:
        alpha, what = _radical(K, args.kummer, args.ell)
        desc = kummer_descriptor(K, alpha, args.ell, args.precision)
        ext = {"kind": "kummer", "radical": what, "radical_coordinates": [list(alpha.num), alpha.den]}
    rep = cap_report(desc)
    ext.update({"degree": desc.degree, "cyclotomic_degree": desc.cyclotomic_degree,
                "loc_cyc_degree": desc.loc_cyc_degree})
    if desc.places:
        ext["places"] = [{"place": p.place, "wild": p.wild, "locally_cyclotomic": p.locally_cyclotomic,
                          "valuation_mod_ell": p.valuation_mod_ell} for p in desc.places]
    body = {
        "field": {"spec": spec, "degree": K.degree, "discriminant": int(K.discriminant)},
        "extension": ext,
        "report": {
            "cap_order": rep.cap_order,
            "cocap_order": rep.cocap_order,
            "branch": rep.branch,
            "type": rep.type,
            "relative_degree": rep.relative_degree,
            "mu_ell_part": rep.mu_order,
            "witnesses": rep.witnesses,
            "precision": rep.precision,
        },
    }
    return envelope("cap", args, body, {"seconds": round(time.perf_counter() - t0, 3)}), EXIT_OK


def cmd_reproduce(args) -> tuple:
    sections = SECTIONS if args.section == "all" else (args.section,)
    cache_root = args.cache if args.cache else default_cache_dir()
    results, timing = reproduce(sections, args.ell, args.precision, args.deep, args.workers,
                                args.degree_cap, cache_root)
    ok = all(r["status"].startswith("PASS") for r in results.values())
    body = {"deep": args.deep, "sections": results, "status": "PASS" if ok else "FAIL"}
    return envelope(f"reproduce {args.section}", args, body, timing), EXIT_OK if ok else EXIT_MISMATCH


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def render_text(report: dict) -> str:
    cmd = report["command"]
    lines = [f"logcap {report['version']} · {cmd} · ℓ = {report['config']['ell']}"]
    if cmd == "field analyze":
        f = report["field"]
        lines += [
            f"field      {f['spec']}  (degree {f['degree']}, signature {tuple(f['signature'])})",
            f"disc       {f['discriminant']}",
            "above ℓ    " + ", ".join(f"{p['label']} (e={p['e']}, f={p['f']})" for p in f["primes_above_ell"]),
            f"μ_K        order {f['roots_of_unity']} (ℓ-part {f['roots_of_unity_ell_part']})",
            f"Cl[ℓ^∞]    {f['class_group_ell_part'] or 'trivial'}",
            f"Cl′        {f['ell_class_group'] or 'trivial'}",
            f"C̃l        {f['log_class_group']['structure'] or 'trivial'}  (order {f['log_class_group']['order']})",
        ]
        for k, v in f["units"].items():
            lines.append(f"units      {k}: {v}")
    elif cmd == "cap":
        r, e = report["report"], report["extension"]
        lines += [
            f"field      {report['field']['spec']}",
            f"extension  {e['kind']}" + (f" ({e.get('radical')})" if e.get("radical") else f" n={e.get('layer')}"),
            f"branch     {r['branch']}",
            f"cap        {r['cap_order']}",
            f"cocap      {r['cocap_order'] if r['cocap_order'] is not None else 'hypotheses not met'}",
            f"type       {r['type']}",
        ]
        if r["witnesses"].get("offenders"):
            lines.append("offenders  " + ", ".join(r["witnesses"]["offenders"]))
    else:
        for name, sec in report["sections"].items():
            lines.append(f"{name:<16}{sec['status']}  ({report['timing'].get(name, 0)} s)")
            for m in sec["mismatches"]:
                lines.append(f"    row {m['row']} column {m['column']}: expected {m['expected']!r}, got {m['got']!r}")
        lines.append(f"overall         {report['status']}")
    lines.append("conditional on: " + ", ".join(report["flags"]))
    return "\n".join(lines)


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="logcap: %(levelname)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    handlers = {"field": cmd_field_analyze, "cap": cmd_cap, "reproduce": cmd_reproduce}
    try:
        _check_config(args)
        report, code = handlers[args.command](args)
    except (EngineCapacityError, DegreeCapError, GrossKuzminError, HypothesisError) as exc:
        print(f"logcap: capacity: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (SpecError, UsageError, FieldError, ValueError) as exc:
        # remaining ValueErrors are input problems (no μ_ℓ in K, radical already an ℓ-th power, ...)
        print(f"logcap: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    if args.format == "json":
        print(json.dumps(report, sort_keys=True, ensure_ascii=False, indent=2))
    else:
        print(render_text(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
