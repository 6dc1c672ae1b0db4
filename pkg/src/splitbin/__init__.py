"""Solver toolkit for splittable bin packing with a per-bin bound on
the number of parts: an approximation scheme with exact rational
arithmetic end to end, an exact brute-force oracle, a verifier, an
instance generator, and a benchmark harness.
"""

from .core import (
    Instance,
    Packing,
    Size,
    VerificationReport,
    check_feasible,
    fractional_opt_no_cardinality,
    lower_bound,
    verify_packing,
)
from .rounding import Epsilon

__all__ = [
    "Instance",
    "Packing",
    "Size",
    "VerificationReport",
    "check_feasible",
    "fractional_opt_no_cardinality",
    "lower_bound",
    "verify_packing",
    "Epsilon",
]

__version__ = "0.1.0"
