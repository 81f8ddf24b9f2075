"""Exact rational backend.

All scalar arithmetic in this package is exact.  gmpy2.mpq is used as the
rational type when available (it is API-compatible with fractions.Fraction
for everything we need and considerably faster); the stdlib Fraction is the
fallback.
"""

from fractions import Fraction

try:
    from gmpy2 import mpq as QQ
except ImportError:  # pragma: no cover
    QQ = Fraction

Q_ZERO = QQ(0)
Q_ONE = QQ(1)


def to_q(x):
    """Coerce x (int, str 'p/q', Fraction, mpq) to the rational backend."""
    if isinstance(x, (int, str)):
        return QQ(x)
    if isinstance(x, Fraction):
        return QQ(x.numerator, x.denominator)
    return QQ(x)


def q_floor_div(a, b):
    """floor(a / b) for rationals as a Python int."""
    n = a.numerator * b.denominator
    d = a.denominator * b.numerator
    if d < 0:
        n, d = -n, -d
    return n // d
