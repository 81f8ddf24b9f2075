import random

from orbitlift.algext import NumberField
from orbitlift.gaussian import GaussianRational as GQ, QI_ZERO, QI_ONE
from orbitlift.hensel import (
    NotCoprime,
    hensel_split,
    mth_root_series,
    newton_root_series,
    series_div,
)
from orbitlift.poly import Poly
from orbitlift.rationals import QQ
from orbitlift.series import TruncatedSeries, series_const, series_var


def gq(x):
    return GQ(x)


def sc(x):
    return series_const(gq(x))


T = 10


def test_square_root_of_one_plus_t():
    t = series_var(QI_ZERO)
    F = Poly([sc(-1) - t, sc(0), sc(1)])
    g1, g2 = hensel_split(F, [Poly([gq(-1), gq(1)]), Poly([gq(1), gq(1)])], T)
    r = g1.coeffs[0].scale(gq(-1))
    want = [QQ(1), QQ(1, 2), QQ(-1, 8), QQ(1, 16), QQ(-5, 128)]
    for k, w in enumerate(want):
        assert r.coef(k) == gq(w)
    r2 = g2.coeffs[0].scale(gq(-1))
    for k, w in enumerate(want):
        assert r2.coef(k) == gq(-w)


def test_single_factor_passthrough():
    t = series_var(QI_ZERO)
    F = Poly([sc(-1) - t, sc(0), sc(1)])
    out = hensel_split(F, [Poly([gq(-1), gq(0), gq(1)])], T)
    assert len(out) == 1
    assert out[0].degree == 2
    assert out[0].coeffs[0].coef(1) == gq(-1)


def test_two_simple_roots_shift():
    t = series_var(QI_ZERO)
    # (z-1)(z-2) + t
    G = Poly([sc(2) + t, sc(-3), sc(1)])
    h1, h2 = hensel_split(G, [Poly([gq(-1), gq(1)]), Poly([gq(-2), gq(1)])], T)
    r1 = h1.coeffs[0].scale(gq(-1))
    r2 = h2.coeffs[0].scale(gq(-1))
    assert r1.coef(0) == gq(1) and r1.coef(1) == gq(1)
    assert r2.coef(0) == gq(2) and r2.coef(1) == gq(-1)
    prod = h1 * h2
    for k in range(T + 1):
        for d in range(3):
            assert prod.coeffs[d].coef(k) == G.coeffs[d].coef(k)


def test_not_coprime_raises():
    t = series_var(QI_ZERO)
    H = Poly([sc(1) - t, sc(-2), sc(1)])
    lin = Poly([gq(-1), gq(1)])
    try:
        hensel_split(H, [lin, lin], T)
        assert False
    except NotCoprime:
        pass


def test_seed_product_mismatch_raises():
    t = series_var(QI_ZERO)
    F = Poly([sc(-1) - t, sc(0), sc(1)])
    try:
        hensel_split(F, [Poly([gq(-2), gq(1)]), Poly([gq(1), gq(1)])], T)
        assert False
    except ValueError:
        pass


def test_multiplicity_block_splits_from_simple_root():
    t = series_var(QI_ZERO)
    # z^3 - z^2 - t: at t = 0 factors z^2 * (z - 1)
    F = Poly([t.scale(gq(-1)), sc(0), sc(-1), sc(1)])
    quad, lin = hensel_split(F, [Poly([QI_ZERO, QI_ZERO, QI_ONE]), Poly([gq(-1), gq(1)])], T)
    assert quad.degree == 2 and lin.degree == 1
    prod = quad * lin
    for k in range(T + 1):
        for d in range(4):
            assert prod.coeffs[d].coef(k) == F.coeffs[d].coef(k)
    # the quadratic block keeps constant-term valuation 1: z^2 ~ -t
    assert quad.coeffs[0].coef(0) == QI_ZERO
    assert quad.coeffs[0].coef(1) != QI_ZERO


def test_random_split_multiplies_back():
    rng = random.Random(13)
    t = series_var(QI_ZERO)
    for _ in range(15):
        roots = rng.sample(range(-5, 6), rng.choice([2, 3]))
        pert = [rng.randint(-3, 3) for _ in roots]
        # prod (z - root_i) + t * (random poly of degree < n)
        F = Poly([sc(1)])
        for r in roots:
            F = F * Poly([sc(-r), sc(1)])
        noise = Poly([(t.scale(gq(p))) for p in pert])
        F = F + noise
        seeds = [Poly([gq(-r), gq(1)]) for r in roots]
        parts = hensel_split(F, seeds, T)
        prod = parts[0]
        for p in parts[1:]:
            prod = prod * p
        for k in range(T + 1):
            for d in range(len(roots) + 1):
                assert prod.coeffs[d].coef(k) == F.coeffs[d].coef(k)


def test_newton_root_matches_hensel():
    t = series_var(QI_ZERO)
    F = Poly([sc(-1) - t, sc(0), sc(1)])
    r = newton_root_series(F, gq(1), T)
    g1, _ = hensel_split(F, [Poly([gq(-1), gq(1)]), Poly([gq(1), gq(1)])], T)
    want = g1.coeffs[0].scale(gq(-1))
    for k in range(T + 1):
        assert r.coef(k) == want.coef(k)


def test_newton_rejects_multiple_root():
    t = series_var(QI_ZERO)
    F = Poly([t.scale(gq(-1)), sc(0), sc(1)])  # z^2 - t
    try:
        newton_root_series(F, QI_ZERO, T)
        assert False
    except ZeroDivisionError:
        pass


def test_newton_over_extension_field():
    K = NumberField(Poly([gq(-2), gq(0), gq(1)]))
    z0 = K.zero()
    tK = series_var(z0)
    FK = Poly(
        [
            series_const(K.convert(gq(-2)), z0) - tK,
            series_const(z0, z0),
            series_const(K.one(), z0),
        ]
    )
    r = newton_root_series(FK, K.gen(), T)
    sq = (r * r).truncate(T)
    tgt = (series_const(K.convert(gq(2)), z0) + tK).truncate(T)
    for k in range(T + 1):
        assert sq.coef(k) == tgt.coef(k)


def test_mth_root_series():
    t = series_var(QI_ZERO)
    a = (sc(1) + t).truncate(T)
    rho = mth_root_series(a, 3, gq(1), T)
    assert rho.coef(1) == gq(QQ(1, 3))
    assert rho.coef(2) == gq(QQ(-1, 9))
    cube = (rho * rho * rho).truncate(T)
    for k in range(T + 1):
        assert cube.coef(k) == a.coef(k)


def test_mth_root_seed_choice_preserved():
    t = series_var(QI_ZERO)
    a = (sc(1) + t).truncate(T)
    rho = mth_root_series(a, 2, gq(-1), T)
    assert rho.coef(0) == gq(-1)
    sq = (rho * rho).truncate(T)
    for k in range(T + 1):
        assert sq.coef(k) == a.coef(k)


def test_series_div_geometric():
    t = series_var(QI_ZERO)
    one = sc(1).truncate(T)
    q = series_div(one, (sc(1) - t).truncate(T), T)
    for k in range(T + 1):
        assert q.coef(k) == QI_ONE


def test_series_div_times_back():
    rng = random.Random(17)
    for _ in range(10):
        u = TruncatedSeries([gq(rng.randint(-4, 4)) for _ in range(T + 1)], T, QI_ZERO)
        vc = [gq(rng.randint(1, 4))] + [gq(rng.randint(-4, 4)) for _ in range(T)]
        v = TruncatedSeries(vc, T, QI_ZERO)
        w = series_div(u, v, T)
        back = (w * v).truncate(T)
        for k in range(T + 1):
            assert back.coef(k) == u.coef(k)
