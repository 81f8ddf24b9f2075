import math

import pytest

from orbitlift.rationals import QQ
from orbitlift.gaussian import GaussianRational, QI_ZERO
from orbitlift.poly import Poly, format_poly_plain
from orbitlift.series import TruncatedSeries, InsufficientValuation, UndeterminedAtOrder
from orbitlift.realroots import isolate_real_roots
from orbitlift.reps import MonicCurve, Symmetric, Cyclic, Product
from orbitlift.engine import (
    AllZero,
    NonflatUndetermined,
    NotSplittable,
    format_trace,
    linear_traces,
    local_lift,
    nonflat_witness,
    reduce_step,
    slice_split,
    witness_polynomial,
)


def _coerce(c):
    if isinstance(c, GaussianRational):
        return c
    return GaussianRational.coerce(QQ(c))


def S(*coeffs):
    return TruncatedSeries([_coerce(c) for c in coeffs], None, QI_ZERO)


def ST(order, *coeffs):
    return TruncatedSeries([_coerce(c) for c in coeffs], order, QI_ZERO)


def gp(*cs):
    return Poly([_coerce(c) for c in cs])


def body_coeffs(branch):
    return sorted((tuple(e.body.coeffs) for e in branch.entries), key=str)


def sorted_bodies(*tuples):
    return sorted(tuples, key=str)


# -- local_lift ---------------------------------------------------------------


class TestSquareRootFamily:
    def test_z2_minus_t_plus_branch(self):
        """z^2 = t lifts to {s, -s} on t = s^2."""
        lift = local_lift(MonicCurve(Symmetric(2), (S(), S(0, -1))), 0, 16)
        assert lift.N == 2
        assert lift.certificate_order is None
        assert len(lift.branches) == 2
        plus = lift.branch(1)
        assert not plus.two_sided
        one = GaussianRational.coerce(QQ(1))
        zero = GaussianRational.coerce(QQ(0))
        assert body_coeffs(plus) == sorted_bodies((zero, -one), (zero, one))

    def test_z2_minus_t_minus_branch(self):
        lift = local_lift(MonicCurve(Symmetric(2), (S(), S(0, -1))), 0, 16)
        minus = lift.branch(-1)
        i = GaussianRational(QQ(0), QQ(1))
        zero = GaussianRational.coerce(QQ(0))
        assert body_coeffs(minus) == sorted_bodies((zero, i), (zero, -i))

    def test_trace_shape(self):
        lift = local_lift(MonicCurve(Symmetric(2), (S(), S(0, -1))), 0, 16)
        text = format_trace(lift.trace)
        assert text == "Reduce(m=1/2, d=2) -> SliceSplit{1,1}[Principal | Principal]"

    def test_channels_evaluate_to_square_roots(self):
        lift = local_lift(MonicCurve(Symmetric(2), (S(), S(0, -1))), 0, 16)
        vals = sorted(
            GaussianRational.coerce(ch.eval(QQ(1, 4))).re
            for ch in lift.channels(1)
        )
        assert vals == [QQ(-1, 2), QQ(1, 2)]


def test_constant_curve_principal():
    """z^2 - 5z + 6 stays on the principal stratum: constant roots 2 and 3."""
    lift = local_lift(MonicCurve(Symmetric(2), (S(5), S(6))), 0, 16)
    assert lift.N == 1
    assert lift.certificate_order is None
    vals = sorted(GaussianRational.coerce(ch.eval(QQ(0))).re for ch in lift.channels(1))
    assert vals == [QQ(2), QQ(3)]


def test_z2_minus_t_cubed_trace():
    """Two reduction steps with m = 3/2 then m = 1/2 = d*m - 1."""
    lift = local_lift(MonicCurve(Symmetric(2), (S(), S(0, 0, 0, -1))), 0, 16)
    assert lift.N == 2
    assert lift.certificate_order is None
    reduces = [st for st in lift.trace if st.kind == "reduce"]
    assert [(st.m, st.d) for st in reduces] == [(QQ(3, 2), 1), (QQ(1, 2), 2)]
    assert reduces[1].m == reduces[0].d * reduces[0].m - 1
    one = GaussianRational.coerce(QQ(1))
    zero = GaussianRational.coerce(QQ(0))
    assert body_coeffs(lift.branch(1)) == sorted_bodies(
        (zero, zero, zero, one), (zero, zero, zero, -one))


def test_z2_minus_t_squared_unramified():
    """z^2 = t^2 has the polynomial lift {t, -t}: N = 1, two-sided."""
    lift = local_lift(MonicCurve(Symmetric(2), (S(), S(0, 0, -1))), 0, 16)
    assert lift.N == 1
    assert lift.certificate_order is None
    assert lift.branches[0].two_sided
    one = GaussianRational.coerce(QQ(1))
    zero = GaussianRational.coerce(QQ(0))
    assert body_coeffs(lift.branches[0]) == sorted_bodies((zero, one), (zero, -one))


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_pure_root_family(n):
    """z^n = t ramifies completely: N = n, exact certificate."""
    sign = -1 if n % 2 == 0 else 1
    comps = [S() for _ in range(n - 1)] + [S(0, sign)]
    lift = local_lift(MonicCurve(Symmetric(n), tuple(comps)), 0, 12)
    assert lift.N == n
    assert lift.certificate_order is None
    assert len(lift.channels(1)) == n


def test_quartic_root_tower():
    """z^4 = t needs only quadratic scalar data on the + side."""
    lift = local_lift(MonicCurve(Symmetric(4), (S(), S(), S(), S(0, -1))), 0, 12)
    for e in lift.branch(1).entries:
        if e.field is not None:
            assert e.field.degree <= 2


def test_double_constant_root():
    g = GaussianRational(QQ(-3), QQ(6))
    lift = local_lift(MonicCurve(Symmetric(2), (S(g + g), S(g * g))), 0, 16)
    assert lift.N == 1
    assert lift.certificate_order is None
    for ch in lift.channels(1):
        assert GaussianRational.coerce(ch.eval(QQ(0))) == g


def test_mixed_cluster_curve():
    """(z^2 - t)(z - 1 - t): ramified and unramified clusters glued at N = 2."""
    c = MonicCurve(Symmetric(3), (S(1, 1), S(0, -1), S(0, -1, -1)))
    lift = local_lift(c, 0, 16)
    assert lift.N == 2
    assert lift.certificate_order is None or lift.certificate_order >= 16
    vals = sorted(
        (GaussianRational.coerce(ch.eval(QQ(1, 4))).re, GaussianRational.coerce(ch.eval(QQ(1, 4))).im)
        for ch in lift.channels(1)
    )
    # roots of the product at t = 1/4: -1/2, 1/2 and 5/4
    assert vals[0][0] == QQ(-1, 2) and vals[2][0] == QQ(5, 4)
    assert vals[1][0] == QQ(1, 2)


def test_cyclic_cube_root():
    """sigma(z) = z^3 over c(t) = t lifts by z(s) = s with t = s^3."""
    lift = local_lift(MonicCurve(Cyclic(3), (S(0, 1),)), 0, 16)
    assert lift.N == 3
    assert lift.certificate_order is None
    assert lift.branches[0].two_sided
    assert len(lift.channels(1)) == 3
    assert format_trace(lift.trace) == "Reduce(m=1/3, d=3) -> Principal"


def test_cyclic_square_of_t():
    """z^2 = t^2 under Cyclic(2): polynomial lift, no ramification."""
    lift = local_lift(MonicCurve(Cyclic(2), (S(0, 0, 1),)), 0, 16)
    assert lift.N == 1
    assert lift.certificate_order is None
    one = GaussianRational.coerce(QQ(1))
    zero = GaussianRational.coerce(QQ(0))
    assert body_coeffs(lift.branches[0]) == sorted_bodies((zero, one), (zero, -one))


def test_product_representation_lift():
    pr = Product([Symmetric(2), Cyclic(2)])
    c = MonicCurve(pr, (S(), S(0, -1), S(0, 0, 1)))
    lift = local_lift(c, 0, 16)
    assert lift.N == 2
    assert lift.certificate_order is None
    assert len(lift.channels(1)) == 4
    assert lift.trace[0].kind == "product"
    assert len(lift.trace[0].children) == 2


def test_lift_at_rational_base_point():
    """Regular point t0 = 1: distinct roots, N = 1, rational series bodies."""
    lift = local_lift(MonicCurve(Symmetric(2), (S(), S(0, -1))), QQ(1), 12)
    assert lift.N == 1
    vals = sorted(
        float(GaussianRational.coerce(ch.eval(QQ(101, 100))).re)
        for ch in lift.channels(1)
    )
    import math as _m
    assert abs(vals[0] + _m.sqrt(1.01)) < 1e-14
    assert abs(vals[1] - _m.sqrt(1.01)) < 1e-14


def test_lift_at_algebraic_base_point():
    t0 = isolate_real_roots(gp(-2, 0, 1), QQ(0), QQ(2))[0]
    lift = local_lift(MonicCurve(Symmetric(2), (S(), S(0, -1))), t0, 12)
    assert lift.N == 1
    assert lift.certificate_order is None or lift.certificate_order >= 12
    got = sorted(
        float(ch.eval(QQ(142, 100), QQ(1, 10**20)).re.mid()) for ch in lift.channels(1)
    )
    want = math.sqrt(1.42)
    assert abs(got[0] + want) < 1e-12
    assert abs(got[1] - want) < 1e-12


def test_truncated_input_keeps_honest_order():
    c = MonicCurve(Symmetric(2), (ST(30), ST(30, 0, -1)))
    lift = local_lift(c, 0, 16)
    assert lift.N == 2
    assert lift.certificate_order is not None
    assert lift.certificate_order >= 16


def test_zero_window_raises_undetermined():
    c = MonicCurve(Symmetric(2), (ST(3), ST(3)))
    with pytest.raises(NonflatUndetermined) as info:
        local_lift(c, 0, 16)
    assert info.value.order == 3


def test_linear_traces_expand_cluster_children():
    c = MonicCurve(Symmetric(3), (S(1, 1), S(0, -1), S(0, -1, -1)))
    lift = local_lift(c, 0, 16)
    paths = linear_traces(list(lift.trace))
    assert len(paths) == 3
    for path in paths:
        assert path[-1].kind == "principal"


# -- reduce_step --------------------------------------------------------------


def test_reduce_step_examples():
    d, red = reduce_step(MonicCurve(Symmetric(2), (S(), S(0, 0, 0, -1))))
    assert d == 1
    assert red.components[0].coeffs == ()
    assert red.components[1].coeffs == tuple(S(0, -1).coeffs)
    d2, red2 = reduce_step(red)
    assert d2 == 2
    assert red2.components[1].coeffs == (GaussianRational.coerce(QQ(-1)),)


def test_reduce_step_cyclic():
    d, red = reduce_step(MonicCurve(Cyclic(3), (S(0, 1),)))
    assert d == 3
    assert red.components[0].coeffs == (GaussianRational.coerce(1),)


def test_reduce_step_sign():
    d, red = reduce_step(MonicCurve(Symmetric(2), (S(), S(0, -1))), sign=-1)
    assert d == 2
    assert red.components[1].coeffs == (GaussianRational.coerce(1),)


def test_reduce_step_rejects_valuation_zero():
    with pytest.raises(InsufficientValuation):
        reduce_step(MonicCurve(Symmetric(2), (S(), S(1, 1))))


def test_reduce_step_rejects_zero_curve():
    with pytest.raises(AllZero):
        reduce_step(MonicCurve(Symmetric(2), (S(), S())))


def test_reduce_step_window_too_short():
    c = MonicCurve(Symmetric(2), (ST(4), ST(4)))
    with pytest.raises(InsufficientValuation) as info:
        reduce_step(c)
    assert info.value.undetermined_at == 4


# -- slice_split --------------------------------------------------------------


def test_slice_split_mixed_example():
    """(z^2 - t)(z - 1 - t) splits into a double cluster at 0 and a single at 1."""
    c = MonicCurve(Symmetric(3), (S(1, 1), S(0, -1), S(0, -1, -1)))
    clusters = sorted(slice_split(c, 0, 16), key=lambda cl: cl.size)
    assert [cl.size for cl in clusters] == [1, 2]
    single, double = clusters
    assert single.center.coeffs == (
        GaussianRational.coerce(1), GaussianRational.coerce(1)
    )
    assert double.center.coeffs == ()
    sub = double.curve
    assert sub.rep.n == 2
    assert sub.components[0].coeffs == ()
    assert tuple(sub.components[1].coeffs) == (
        GaussianRational.coerce(0), GaussianRational.coerce(-1)
    )


def test_slice_split_two_singletons():
    c = MonicCurve(Symmetric(2), (S(), S(-1)))
    clusters = slice_split(c, 0, 16)
    centers = sorted(cl.center.coeffs[0].re for cl in clusters)
    assert centers == [QQ(-1), QQ(1)]
    assert all(cl.size == 1 for cl in clusters)


def test_slice_split_single_repeated_root():
    c = MonicCurve(Symmetric(2), (S(-2), S(1, -1)))
    with pytest.raises(NotSplittable):
        slice_split(c, 0, 16)


def test_slice_split_rejects_cyclic():
    with pytest.raises(ValueError):
        slice_split(MonicCurve(Cyclic(2), (S(0, 1),)), 0, 16)


# -- nonflat_witness ----------------------------------------------------------


def test_witness_square_root():
    r = nonflat_witness(MonicCurve(Symmetric(2), (S(), S(0, -1))))
    assert r.signature.parts == (1, 1)
    assert r.valuation == 1


def test_witness_polynomial_is_scaled_discriminant():
    _sig, wit = witness_polynomial(MonicCurve(Symmetric(2), (S(), S(0, -1))))
    assert format_poly_plain(wit, "t") == "-4*t"


def test_witness_tangential_square():
    r = nonflat_witness(MonicCurve(Symmetric(2), (S(), S(0, 0, -1))))
    assert r.signature.parts == (1, 1)
    assert r.valuation == 2


def test_witness_constant_double_root():
    r = nonflat_witness(MonicCurve(Symmetric(2), (S(), S())))
    assert r.signature.parts == (2,)
    assert r.valuation == 0


def test_witness_truncated_window():
    r = nonflat_witness(MonicCurve(Symmetric(2), (ST(8), ST(8, 0, -1))))
    assert r.signature.parts == (1, 1)
    assert r.valuation == 1


def test_witness_undetermined_is_a_value():
    r = nonflat_witness(MonicCurve(Symmetric(2), (ST(5), ST(5))))
    assert isinstance(r, UndeterminedAtOrder)
    assert r.order == 5


def test_witness_cyclic_kinds():
    nz = nonflat_witness(MonicCurve(Cyclic(3), (S(0, 1),)))
    assert nz.signature.data == ("nonzero",)
    z = nonflat_witness(MonicCurve(Cyclic(3), (S(),)))
    assert z.signature.data == ("zero",)
    assert z.valuation == 0


def test_witness_product_combines_factors():
    pr = Product([Symmetric(2), Cyclic(2)])
    c = MonicCurve(pr, (S(), S(0, -1), S(0, 1)))
    r = nonflat_witness(c)
    assert r.signature.data == ((1, 1), ("nonzero",))


def test_witness_at_shifted_point():
    r = nonflat_witness(MonicCurve(Symmetric(2), (S(), S(0, -1))), QQ(1))
    assert r.valuation == 0
    r0 = nonflat_witness(MonicCurve(Symmetric(2), (S(), S(0, -1))), QQ(0))
    assert r0.valuation == 1


def test_witness_at_algebraic_point():
    t0 = isolate_real_roots(gp(-2, 0, 1), QQ(0), QQ(2))[0]
    c = MonicCurve(Symmetric(2), (S(), S(0, 0, -1)))
    r = nonflat_witness(c, t0)
    assert r.valuation == 0
    r2 = nonflat_witness(MonicCurve(Symmetric(2), (S(), S(4, 0, -4, 0, 1))), t0)
    assert r2.valuation == 2
