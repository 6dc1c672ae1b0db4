"""Internal rational number backend.

Solver-internal arithmetic uses gmpy2.mpq when available (markedly
faster big-rational ops); the public API always speaks Fraction.
Both representations are exact, so results are identical.
"""

from fractions import Fraction

try:
    from gmpy2 import mpq

    HAVE_GMPY2 = True
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    mpq = Fraction
    HAVE_GMPY2 = False


def to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    # int(...) so the Fraction is backed by Python ints, not mpz: mpq()
    # rejects Fractions whose components are mpz.
    return Fraction(int(value.numerator), int(value.denominator))


def to_mpq(value):
    if isinstance(value, Fraction):
        return mpq(int(value.numerator), int(value.denominator))
    return mpq(value)
