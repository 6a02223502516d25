"""Exact and ℓ-adic arithmetic substrate."""
from .padic import PadicNumber, PrecisionError, Rational, iwasawa_log, log_series, vp
from .linalg import (
    SNFResult,
    det,
    elementary_divisors,
    hnf_rows,
    integer_kernel,
    inverse_mod,
    inverse_rational,
    left_kernel_mod_p,
    kernel_mod_p,
    minor_gcds,
    rank_mod_p,
    smith_normal_form,
    solve_mod_p,
)
from .polys import LocalFactor, charpoly, factor_mod_p, factor_over_q, hensel_factor, hensel_lift

__all__ = [
    "PadicNumber", "PrecisionError", "Rational", "iwasawa_log", "log_series", "vp",
    "SNFResult", "det", "elementary_divisors", "hnf_rows", "integer_kernel", "inverse_mod", "inverse_rational", "left_kernel_mod_p", "kernel_mod_p",
    "minor_gcds", "rank_mod_p", "smith_normal_form", "solve_mod_p",
    "LocalFactor", "charpoly", "factor_mod_p", "factor_over_q", "hensel_factor", "hensel_lift",
]
