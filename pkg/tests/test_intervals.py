import random

import pytest

from orbitlift.rationals import QQ
from orbitlift.gaussian import gq, GaussianRational
from orbitlift.poly import Poly
from orbitlift.intervals import (
    BoxC,
    RatInterval,
    WIDTH_DEFAULT,
    Embedding,
    embeddings_of,
    eval_poly_box,
    exact_nth_root,
    isolate_complex_roots,
    nth_root_interval,
)
from orbitlift.algext import NumberField
from orbitlift.realroots import (
    RealAlgebraic,
    count_real_roots,
    isolate_real_roots,
    real_zeros_of_gaussian_poly,
)


def qp(*ints):
    return Poly([gq(c) for c in ints])


def test_interval_arithmetic_contains():
    rng = random.Random(3)
    for _ in range(100):
        a = sorted(QQ(rng.randint(-20, 20), rng.randint(1, 5)) for _ in range(2))
        b = sorted(QQ(rng.randint(-20, 20), rng.randint(1, 5)) for _ in range(2))
        ia = RatInterval(a[0], a[1])
        ib = RatInterval(b[0], b[1])
        xa = a[0] + (a[1] - a[0]) * QQ(rng.randint(0, 7), 7)
        xb = b[0] + (b[1] - b[0]) * QQ(rng.randint(0, 7), 7)
        assert (ia + ib).contains(xa + xb)
        assert (ia - ib).contains(xa - xb)
        assert (ia * ib).contains(xa * xb)
        if not ib.contains(QQ(0)):
            assert (ia / ib).contains(xa / xb)


def test_round_out_keeps_containment():
    iv = RatInterval(QQ(1, 3), QQ(2, 3))
    out = iv.round_out(40)
    assert out.lo <= QQ(1, 3) and out.hi >= QQ(2, 3)
    assert out.width() <= iv.width() + QQ(1, 2 ** 38)


def test_exact_nth_root():
    assert exact_nth_root(QQ(16, 81), 4) == QQ(2, 3)
    assert exact_nth_root(QQ(27), 3) == QQ(3)
    assert exact_nth_root(QQ(2), 2) is None


def test_nth_root_interval_certified():
    for q, n in ((QQ(1, 2), 2), (QQ(5), 3), (QQ(7, 3), 5)):
        iv = nth_root_interval(q, n, QQ(1, 10 ** 30))
        assert iv.width() <= QQ(1, 10 ** 30)
        assert iv.lo ** n <= q <= iv.hi ** n


def test_box_arithmetic():
    b1 = BoxC(RatInterval(QQ(1), QQ(1)), RatInterval(QQ(1), QQ(1)))  # 1+i
    b2 = b1 * b1
    assert b2.contains(gq(0, 2))  # (1+i)^2 = 2i
    inv = BoxC(RatInterval(QQ(1), QQ(1)), RatInterval(QQ(0), QQ(0))) / b1
    assert inv.contains(gq(QQ(1, 2), QQ(-1, 2)))


def test_isolate_complex_roots_quadratic():
    boxes = isolate_complex_roots(qp(1, 0, 1))
    mids = sorted(complex(b.mid()), key=lambda z: z.imag) if False else None
    assert len(boxes) == 2
    found = set()
    for b in boxes:
        if b.contains(gq(0, 1)):
            found.add("i")
        if b.contains(gq(0, -1)):
            found.add("-i")
    assert found == {"i", "-i"}


def test_isolate_complex_roots_random_products():
    rng = random.Random(31)
    for _ in range(10):
        roots = set()
        while len(roots) < 3:
            roots.add((rng.randint(-4, 4), rng.randint(-4, 4)))
        p = qp(1)
        for re, im in roots:
            p = p * Poly([-gq(re, im), gq(1)])
        boxes = isolate_complex_roots(p)
        assert len(boxes) == 3
        for re, im in roots:
            assert sum(1 for b in boxes if b.contains(gq(re, im))) == 1


def test_embedding_eval_box():
    F = NumberField(qp(-2, 0, 1))
    embs = embeddings_of(F)
    assert len(embs) == 2
    x = F.gen()
    for emb in embs:
        box = emb.eval_box(x * x, QQ(1, 10 ** 20))
        assert box.contains(gq(2))
        assert box.width() <= QQ(1, 10 ** 20)


def test_real_root_isolation_mixed():
    p = qp(0, -2, 0, 1)  # t(t^2 - 2)
    roots = isolate_real_roots(p, QQ(-2), QQ(2))
    assert len(roots) == 3
    kinds = [isinstance(r, RealAlgebraic) for r in roots]
    assert kinds == [True, False, True]
    assert roots[1] == QQ(0)
    assert float(roots[0]) == pytest.approx(-1.4142135, abs=1e-5)
    assert float(roots[2]) == pytest.approx(1.4142135, abs=1e-5)


def test_real_root_isolation_disjoint_intervals():
    p = qp(0, -2, 0, 1)
    roots = isolate_real_roots(p, QQ(-2), QQ(2))
    ivs = []
    for r in roots:
        if isinstance(r, RealAlgebraic):
            ivs.append((r.interval.lo, r.interval.hi))
        else:
            ivs.append((QQ(r), QQ(r)))
    for i in range(len(ivs)):
        for j in range(i + 1, len(ivs)):
            assert ivs[i][1] < ivs[j][0] or ivs[j][1] < ivs[i][0]


def test_count_real_roots_sturm():
    p = qp(-1, 0, 0, 0, 1)  # t^4 - 1: real roots -1, 1
    assert count_real_roots(p, QQ(-2), QQ(2)) == 2
    assert count_real_roots(p, QQ(0), QQ(2)) == 1


def test_real_zeros_gaussian_poly():
    w = qp(-2, 0, 1)
    zs = real_zeros_of_gaussian_poly(w, QQ(-2), QQ(2))
    assert len(zs) == 2
    # (t - i)(t - 1): only the real root 1
    w2 = Poly([gq(0, 1), gq(-1, -1), gq(1)])
    zs2 = real_zeros_of_gaussian_poly(w2, QQ(-5), QQ(5))
    assert zs2 == [QQ(1)]
    assert real_zeros_of_gaussian_poly(Poly([]), QQ(0), QQ(1)) is None
    assert real_zeros_of_gaussian_poly(qp(3), QQ(0), QQ(1)) == []


def test_real_algebraic_refine_and_sign():
    p = qp(-2, 0, 1)
    roots = isolate_real_roots(p, QQ(0), QQ(2))
    (r,) = roots
    r.refine(QQ(1, 10 ** 12))
    assert r.interval.width() <= QQ(1, 10 ** 12)
    assert r.sign_vs(QQ(1)) > 0
    assert r.sign_vs(QQ(3, 2)) < 0


def test_real_algebraic_field_embedding():
    p = qp(-3, 0, 1)
    (neg, pos) = isolate_real_roots(p, QQ(-2), QQ(2))
    F, emb, gen = pos.field_embedding()
    box = emb.eval_box(gen * gen, QQ(1, 10 ** 15))
    assert box.contains(gq(3))
    box_neg = emb.eval_box(gen, QQ(1, 10 ** 10))
    assert box_neg.re.lo > 0  # embedding tracks the positive root
