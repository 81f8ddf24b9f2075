import math
import random

import pytest

from orbitlift.rationals import QQ
from orbitlift.gaussian import gq, QI_ZERO
from orbitlift.series import (
    INF,
    InsufficientValuation,
    TruncatedSeries,
    UndeterminedAtOrder,
    series_const,
    series_from_poly,
    series_var,
)
from orbitlift.poly import Poly


def S(ints, order=None):
    return TruncatedSeries([gq(c) for c in ints], order)


def test_valuation_basic():
    assert S([0, 0, 0, 1, 0, 1]).valuation() == 3


def test_valuation_exact_zero_is_infinite():
    assert S([]).valuation() == INF
    assert S([0, 0]).valuation() == INF


def test_valuation_truncated_zero_undetermined():
    v = S([0, 0, 0], order=7).valuation()
    assert isinstance(v, UndeterminedAtOrder)
    assert v.order == 7


def test_substitute_power_monomial():
    t = series_var()
    assert t.substitute_power(2, 1) == S([0, 0, 1])


def test_substitute_power_sign():
    f = S([1, 0, 0, -1])  # 1 - t^3
    out = f.substitute_power(2, -1)
    expect = S([1, 0, 0, 0, 0, 0, 1])  # 1 + t^6
    assert out == expect
    assert series_var().substitute_power(1, -1) == S([0, -1])


def test_substitute_power_order_growth():
    f = S([1, 1], order=3)
    out = f.substitute_power(2, 1)
    assert out.order == 6


def test_shift_divide():
    assert S([0, 0, 0, 1]).shift_divide(2) == S([0, 1])
    assert S([0, 0, 1, 0, 1]).shift_divide(2) == S([1, 0, 1])


def test_shift_divide_insufficient():
    with pytest.raises(InsufficientValuation):
        S([0, 1]).shift_divide(2)


def test_shift_divide_window_too_short():
    f = S([0, 0], order=1)
    with pytest.raises(InsufficientValuation) as exc:
        f.shift_divide(3)
    assert exc.value.undetermined_at == 1


def test_shift_divide_known_zero_window_ok():
    f = S([0, 0], order=1)
    out = f.shift_divide(1)
    assert out.order == 0
    assert not out.coeffs


def test_mul_order_propagation():
    # known to order 4 times exact valuation-2 polynomial: order 6
    a = S([1, 2, 0, 1, 3], order=4)
    b = S([0, 0, 1])
    assert (a * b).order == 6
    assert (b * a).order == 6
    # exact times exact stays exact
    assert (S([1, 1]) * S([1, 1])).order is None


def test_mul_matches_poly_mul():
    rng = random.Random(13)
    for _ in range(30):
        ac = [gq(rng.randint(-4, 4)) for _ in range(rng.randint(1, 5))]
        bc = [gq(rng.randint(-4, 4)) for _ in range(rng.randint(1, 5))]
        sa, sb = TruncatedSeries(ac), TruncatedSeries(bc)
        pa, pb = Poly(ac), Poly(bc)
        assert list((sa * sb).coeffs) == list((pa * pb).coeffs)


def test_substitution_composes():
    rng = random.Random(19)
    for _ in range(20):
        f = S([rng.randint(-3, 3) for _ in range(5)])
        a, b = rng.randint(1, 3), rng.randint(1, 3)
        lhs = f.substitute_power(a, 1).substitute_power(b, 1)
        rhs = f.substitute_power(a * b, 1)
        assert lhs == rhs


def test_shift_divide_commutes_with_substitution():
    f = S([0, 0, 1, 0, 5])  # valuation 2
    n, m = 3, 2
    lhs = f.substitute_power(n, 1).shift_divide(n * m)
    rhs = f.shift_divide(m).substitute_power(n, 1)
    assert lhs == rhs


def test_valuation_additive_for_exact():
    rng = random.Random(23)
    for _ in range(20):
        a = S([0] * rng.randint(0, 3) + [rng.randint(1, 5)] + [rng.randint(-3, 3)])
        b = S([0] * rng.randint(0, 3) + [rng.randint(1, 5)])
        assert (a * b).valuation() == a.valuation() + b.valuation()


def test_derivative():
    f = S([5, 1, 0, 2])
    assert f.derivative() == S([1, 0, 6])
    g = S([1, 1, 1], order=2)
    assert g.derivative().order == 1


def test_eval_horner():
    f = S([1, 2, 3])
    x = gq(QQ(1, 2))
    assert f.eval(x) == gq(1) + gq(2) * x + gq(3) * x * x


def test_agrees_to():
    a = S([1, 2, 3, 4])
    b = S([1, 2, 3, 9], order=5)
    assert a.agrees_to(b, 2)
    assert not a.agrees_to(b, 3)


def test_truncate():
    f = S([1, 2, 3, 4])
    g = f.truncate(2)
    assert g.order == 2
    assert list(g.coeffs) == [gq(1), gq(2), gq(3)]
    assert f.truncate(9).exact
