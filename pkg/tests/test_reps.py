import random

from orbitlift.gaussian import GaussianRational as GQ, QI_ZERO, QI_ONE
from orbitlift.poly import Poly
from orbitlift.rationals import QQ
from orbitlift.reps import (
    Cyclic,
    MonicCurve,
    Product,
    RepresentationSpec,
    Symmetric,
    TooLarge,
    apply_permutation,
    cyclotomic_poly,
    orbit_polynomial,
    primitive_root_of_unity,
    stratum_signature,
    sym_generators,
    tschirnhaus_center,
    vieta_from_roots,
)
from orbitlift.series import TruncatedSeries, series_const, series_var


def gq(x):
    return GQ(x)


def sconst(x):
    return series_const(gq(x))


def t_var():
    return series_var(QI_ZERO)


def test_degrees_and_dims():
    assert Symmetric(3).degrees() == (1, 2, 3)
    assert Cyclic(4).degrees() == (4,)
    p = Product([Symmetric(2), Cyclic(3)])
    assert p.degrees() == (1, 2, 3)
    assert p.dim() == 3
    assert p.group_order() == 6
    assert Symmetric(3).group_order() == 6


def test_vieta_spec_example():
    t = t_var()
    curve = vieta_from_roots(Symmetric(2), [t, t.scale(gq(-1))])
    a1, a2 = curve.components
    assert a1.is_exact_zero()
    assert a2.coef(2) == gq(-1) and a2.coef(0) == QI_ZERO and a2.coef(1) == QI_ZERO
    zp = curve.z_poly()
    # z^2 - t^2: [z^0] = -a2 * (-1)^? ... check via evaluation at z = 3, t coefficient
    assert zp.degree == 2
    assert zp.coeffs[2].coef(0) == gq(1)
    assert zp.coeffs[0].coef(2) == gq(-1)


def test_vieta_matches_expansion_random():
    rng = random.Random(5)
    for _ in range(30):
        n = rng.choice([2, 3, 4])
        roots = [sconst(rng.randint(-4, 4)) for _ in range(n)]
        curve = vieta_from_roots(Symmetric(n), roots)
        zp = curve.z_poly()
        for z in (gq(0), gq(1), gq(-2), gq(QQ(1, 3))):
            val = QI_ONE
            for r in roots:
                val = val * (z - r.coef(0))
            got = sum(
                (zp.coeffs[k].coef(0) * z**k for k in range(1, n + 1)),
                zp.coeffs[0].coef(0),
            )
            assert got == val


def test_vieta_permutation_invariance():
    rng = random.Random(6)
    for _ in range(20):
        n = rng.choice([2, 3])
        roots = [sconst(rng.randint(-3, 3)) for _ in range(n)]
        base = vieta_from_roots(Symmetric(n), roots)
        for perm in sym_generators(n):
            shuffled = apply_permutation(perm, roots)
            again = vieta_from_roots(Symmetric(n), shuffled)
            for a, b in zip(base.components, again.components):
                assert a.coef(0) == b.coef(0)


def test_vieta_homogeneity():
    # scaling roots by c scales a_j by c^j
    roots = [sconst(1), sconst(2), sconst(-3)]
    c = gq(QQ(5, 7))
    base = vieta_from_roots(Symmetric(3), roots)
    scaled = vieta_from_roots(Symmetric(3), [r.scale(c) for r in roots])
    for j, (a, b) in enumerate(zip(base.components, scaled.components), start=1):
        assert b.coef(0) == a.coef(0) * c**j


def from_roots(*roots):
    p = Poly([QI_ONE])
    for r in roots:
        p = p * Poly([-gq(r), QI_ONE])
    return p


def test_stratum_signatures():
    assert stratum_signature(Symmetric(2), from_roots(1, 2)).parts == (1, 1)
    assert stratum_signature(Symmetric(2), from_roots(1, 1)).parts == (2,)
    sig = stratum_signature(Symmetric(3), from_roots(2, 2, 5))
    assert sig.parts == (2, 1)
    assert sig.distinct_count() == 2
    assert stratum_signature(Cyclic(3), gq(0)).parts == ("zero",)
    assert stratum_signature(Cyclic(3), gq(2)).parts == ("nonzero",)


def test_tschirnhaus_spec_values():
    # z^2 - 2z + 5 -> center 1; z^3 + 3z - 1 -> 0; z^2 + 4z + 3 -> -2
    p1 = Poly([gq(5), gq(-2), gq(1)])
    p2 = Poly([gq(-1), gq(3), gq(0), gq(1)])
    p3 = Poly([gq(3), gq(4), gq(1)])
    assert tschirnhaus_center(p1) == gq(1)
    assert tschirnhaus_center(p2) == QI_ZERO
    assert tschirnhaus_center(p3) == gq(-2)


def test_tschirnhaus_recentering_kills_subleading():
    rng = random.Random(7)
    for _ in range(20):
        n = rng.choice([2, 3, 4])
        coeffs = [gq(rng.randint(-5, 5)) for _ in range(n)] + [QI_ONE]
        p = Poly(coeffs)
        c = tschirnhaus_center(p)
        shifted = p.taylor_shift(c)
        assert shifted.coef(n - 1) == QI_ZERO


def test_cyclotomic_polys():
    x = Poly([QI_ZERO, QI_ONE])
    assert cyclotomic_poly(1) == Poly([gq(-1), QI_ONE])
    assert cyclotomic_poly(2) == Poly([gq(1), QI_ONE])
    assert cyclotomic_poly(3) == Poly([gq(1), gq(1), QI_ONE])
    assert cyclotomic_poly(4) == Poly([gq(1), QI_ZERO, QI_ONE])
    assert cyclotomic_poly(6) == Poly([gq(1), gq(-1), QI_ONE])


def test_primitive_roots_small():
    field, z1 = primitive_root_of_unity(1)
    assert field is None and z1 == QI_ONE
    field, z2 = primitive_root_of_unity(2)
    assert field is None and z2 == gq(-1)
    field, z4 = primitive_root_of_unity(4)
    assert field is None and z4 * z4 == gq(-1)
    field, z3 = primitive_root_of_unity(3)
    assert field is not None
    assert z3 * z3 * z3 == field.one() and z3 != field.one()


def test_orbit_polynomial_symmetric_spec():
    # Sym(2) at (1, 2): ((z-1)(z-2))^2 = (z^2-3z+2)^2
    p = orbit_polynomial(Symmetric(2), [gq(1), gq(2)])
    want = Poly([gq(2), gq(-3), gq(1)])
    assert p == want * want


def test_orbit_polynomial_cyclic_spec():
    p3 = orbit_polynomial(Cyclic(3), [gq(1)])
    assert p3 == Poly([gq(-1), QI_ZERO, QI_ZERO, QI_ONE])
    p4 = orbit_polynomial(Cyclic(4), [QI_ZERO])
    assert p4 == Poly([QI_ZERO, QI_ZERO, QI_ZERO, QI_ZERO, QI_ONE])


def test_orbit_polynomial_cyclic_invariance():
    rng = random.Random(8)
    for m in (2, 3, 4, 6):
        for _ in range(5):
            x = gq(QQ(rng.randint(-6, 6), rng.randint(1, 3)))
            base = orbit_polynomial(Cyclic(m), [x])
            # product over all m-th roots of unity collapses to z^m - x^m
            want = Poly([-(x**m)] + [QI_ZERO] * (m - 1) + [QI_ONE])
            assert base == want
            # rotations that stay inside Q(i) leave the orbit unchanged
            if m in (2, 4):
                _, zeta = primitive_root_of_unity(m)
                rot = orbit_polynomial(Cyclic(m), [zeta * x])
                assert rot == base


def test_orbit_polynomial_symmetric_invariance():
    rng = random.Random(9)
    for _ in range(10):
        pt = [gq(rng.randint(-4, 4)) for _ in range(3)]
        base = orbit_polynomial(Symmetric(3), pt)
        for perm in sym_generators(3):
            assert orbit_polynomial(Symmetric(3), apply_permutation(perm, pt)) == base


def test_orbit_too_large_guard():
    try:
        orbit_polynomial(Symmetric(4), [gq(1), gq(2), gq(3), gq(4)])
        assert False
    except TooLarge:
        pass


def test_product_rep_orbit():
    rep = Product([Cyclic(2), Cyclic(2)])
    p = orbit_polynomial(rep, [gq(1), gq(3)])
    # each factor orbit is (z-x)(z+x), raised to |G|/|G_f| = 4/2 = 2
    f1 = Poly([gq(-1), QI_ZERO, QI_ONE])
    f2 = Poly([gq(-9), QI_ZERO, QI_ONE])
    assert p == f1 * f1 * f2 * f2


def test_monic_curve_translate_and_eval():
    t = t_var()
    curve = vieta_from_roots(Symmetric(2), [t, t.scale(gq(-1))])
    moved = curve.translate(gq(2))
    # roots at t = 2 + u are +-(2+u); a2 = -(2+u)^2
    a2 = moved.components[1]
    assert a2.coef(0) == gq(-4) and a2.coef(1) == gq(-4) and a2.coef(2) == gq(-1)
    p0 = moved.poly_at()
    assert p0 == Poly([gq(-4), QI_ZERO, QI_ONE])


def test_translate_requires_exact():
    t = TruncatedSeries([QI_ZERO, GQ(1)], 5, QI_ZERO)
    curve = MonicCurve(Symmetric(1), (t,))
    try:
        curve.translate(gq(1))
        assert False
    except ValueError:
        pass


def test_descriptors():
    assert Symmetric(3).descriptor() == "sym:3"
    assert Cyclic(4).descriptor() == "cyc:4"
    assert Product([Symmetric(2), Cyclic(3)]).descriptor() == "prod:[sym:2,cyc:3]"
