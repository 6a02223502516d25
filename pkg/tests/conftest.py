import functools
import json
import sys
from pathlib import Path

import pytest

from logcap.numberfield.construct import field_from_spec

FIXTURES = Path(__file__).parent / "fixtures"

ELL = 3
LOC_CYC_D = (42, 105, 195, 258)
NOT_LOC_CYC_D = (142, 223, 229, 235)
ONE_PLACE_D = (29, 62, 74, 77)
SEXTIC = "compositum: cbrt(17), sqrt(-3)"


def biquadratic(d: int) -> str:
    return f"compositum: sqrt({d}), sqrt(-3)"


@functools.lru_cache(maxsize=None)
def field(spec: str):
    """Fields are immutable apart from their memo tables, so one instance per spec is shared."""
    return field_from_spec(spec)


@functools.lru_cache(maxsize=None)
def _oracle():
    with open(FIXTURES / "oracle.json", encoding="utf-8") as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def oracle():
    return _oracle()


def ell_part(divisors, ell=ELL):
    """ℓ-primary elementary divisors of a finite abelian group given by its invariants."""
    out = []
    for x in divisors:
        a = 1
        while x % (ell * a) == 0:
            a *= ell
        if a > 1:
            out.append(a)
    return sorted(out)


def oracle_fields():
    """(spec, oracle record) for every field frozen in the fixture."""
    o = _oracle()
    out = [(biquadratic(b["d"]), b) for b in o["biquadratic"]]
    out.append((o["sextic"]["spec"], o["sextic"]))
    out += [("poly: " + s["poly"], s) for s in o["small"]]
    return out


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for name in sorted(results):
            terminalreporter.write_line(results[name])
