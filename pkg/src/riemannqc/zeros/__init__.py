"""Zeta zeros: tables, Riemann-Siegel evaluation and root finding."""

from .siegel import rs_theta, rs_z
from .table import (
    EMBEDDED_COUNT,
    ZeroFileError,
    ZeroSource,
    ZeroTable,
    ZetaZero,
    count_zeros_asymptotic,
    embedded_zeros,
    find_zeros_in_range,
    first_zeros,
    format_zeros,
    gram_points,
    load_zeros_file,
    write_zeros_file,
)

__all__ = [
    "EMBEDDED_COUNT",
    "ZeroFileError",
    "ZeroSource",
    "ZeroTable",
    "ZetaZero",
    "count_zeros_asymptotic",
    "embedded_zeros",
    "find_zeros_in_range",
    "first_zeros",
    "format_zeros",
    "gram_points",
    "load_zeros_file",
    "rs_theta",
    "rs_z",
    "write_zeros_file",
]
