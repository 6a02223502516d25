"""Regenerate tests/fixtures/oracle.json from PARI/GP (needs the ``cypari`` wheel).

The package never imports PARI; these values are an independent oracle that
the test-suite compares against.

    python3 tools/make_oracle_fixtures.py
"""
from __future__ import annotations

import json
from pathlib import Path

import cypari

HERE = Path(__file__).resolve().parent
OUT = HERE.parent / "tests" / "fixtures" / "oracle.json"


def to_py(g):
    t = g.type()
    if t == "t_INT":
        return int(g)
    if t in ("t_VEC", "t_COL"):
        return [to_py(c) for c in g]
    return str(g)


def field_info(raw):
    disc, sign, cyc, s_cyc, tilde, above = raw
    return {
        "disc": disc,
        "signature": sign,
        "class_group": cyc,
        "s_class_group": s_cyc,
        "log_class_group": tilde,
        "primes_above_3": [{"e": e, "f": f} for e, f in above],
    }


def main() -> None:
    pari = cypari.pari
    pari.allocatemem(2 * 10**9)
    src = (HERE / "oracle.gp").read_text()
    # only the function definitions; the trailing print block is for manual use
    defs = src.split("\n{\n  print(\"BEGIN\");")[0]
    for chunk in _statements(defs):
        pari(chunk)

    out: dict = {"generator": "PARI/GP " + str(pari("version()")), "biquadratic": [], "small": []}
    for d in (42, 105, 195, 258, 142, 223, 229, 235, 29, 62, 74, 77, 67):
        d_, info, unit, cubes, loccyc, count = to_py(pari(f"biquad({d})"))
        entry = {
            "d": d_,
            "second": "sqrt(-3)",
            **field_info(info),
            "unit_of_real_subfield": unit,
            "unit_local_cube": [bool(c) for c in cubes],
            "unit_locally_cyclotomic": [bool(c) for c in loccyc],
        }
        if count >= 0:
            entry["loccyc_cubic_count"] = count
        out["biquadratic"].append(entry)

    pari('C6 = polcompositum(x^3 - 17, x^2 + 3, 1)[1]')
    info = to_py(pari("info(C6[1])"))
    count = to_py(pari("count_loccyc(bnfinit(C6[1], 1), lift((-1 + C6[3]) / 2))"))
    out["sextic"] = {"spec": "compositum: cbrt(17), sqrt(-3)", **field_info(info), "loccyc_cubic_count": count}

    for poly in ("x^2 + 3", "x^2 + 23", "x^2 - 2", "x^2 - 29", "x^2 - 42", "x^2 - 67",
                 "x^6 + x^3 + 1", "x^2 + 1", "x^3 - 17", "x^3 - 2"):
        info = to_py(pari(f"info({poly})"))
        mu = to_py(pari(f"nfrootsof1(nfinit({poly}))[1]"))
        out["small"].append({"poly": poly, **field_info(info), "roots_of_unity": mu})

    out["quadratic_units"] = []
    for d in (2, 3, 5, 6, 7, 13, 29, 42, 67, 94, 142, 235):
        D = to_py(pari(f"quaddisc({d})"))
        a, b = to_py(pari(f"my(e = quadunit({D})); [real(e), imag(e)]"))
        out["quadratic_units"].append({"d": d, "disc": D, "w_coords": [a, b]})

    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(out, indent=1) + "\n")
    print(f"wrote {OUT}")


def _statements(src: str):
    """Split a GP file into top-level statements (function definitions)."""
    buf, depth = [], 0
    for line in src.splitlines():
        s = line.split("\\\\")[0]
        if not s.strip() and depth == 0:
            continue
        buf.append(s)
        depth += s.count("{") - s.count("}")
        if depth == 0 and s.rstrip().endswith(("}", ";")):
            yield " ".join(x.strip() for x in buf)
            buf = []
    if buf:
        yield " ".join(x.strip() for x in buf)


if __name__ == "__main__":
    main()
