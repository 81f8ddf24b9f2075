"""Certified interval arithmetic over exact rationals.

Real intervals and complex rectangles with outward dyadic rounding.  Float
computations (numpy/mpmath root finding) are used only to produce initial
guesses; every certification step (interval Newton contraction, sign
checks, bisection) runs in exact rational arithmetic, so widths like
1e-30 are meaningful bounds, not float noise.
"""

from .gaussian import GaussianRational, QI_ZERO
from .poly import poly_gcd
from .rationals import QQ, q_floor_div

WIDTH_DEFAULT = QQ(1, 10**30)


def _round_down(q, prec):
    scale = 1 << prec
    return QQ(q_floor_div(q * scale, QQ(1)), scale)


def _round_up(q, prec):
    scale = 1 << prec
    n = q * scale
    f = q_floor_div(n, QQ(1))
    if n == f:
        return QQ(f, scale)
    return QQ(f + 1, scale)


class RatInterval:
    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        if hi is None:
            hi = lo
        if lo > hi:
            raise ValueError("inverted interval")
        self.lo = lo
        self.hi = hi

    @staticmethod
    def of(q):
        q = QQ(q)
        return RatInterval(q, q)

    def width(self):
        return self.hi - self.lo

    def mid(self):
        return (self.lo + self.hi) / 2

    def contains(self, q):
        return self.lo <= q <= self.hi

    def contains_zero(self):
        return self.lo <= 0 <= self.hi

    def strictly_inside(self, other):
        return other.lo < self.lo and self.hi < other.hi

    def intersect(self, other):
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo > hi:
            return None
        return RatInterval(lo, hi)

    def hull(self, other):
        return RatInterval(min(self.lo, other.lo), max(self.hi, other.hi))

    def __add__(self, other):
        if isinstance(other, RatInterval):
            return RatInterval(self.lo + other.lo, self.hi + other.hi)
        return RatInterval(self.lo + other, self.hi + other)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, RatInterval):
            return RatInterval(self.lo - other.hi, self.hi - other.lo)
        return RatInterval(self.lo - other, self.hi - other)

    def __rsub__(self, other):
        return RatInterval(other - self.hi, other - self.lo)

    def __neg__(self):
        return RatInterval(-self.hi, -self.lo)

    def __mul__(self, other):
        if not isinstance(other, RatInterval):
            if other >= 0:
                return RatInterval(self.lo * other, self.hi * other)
            return RatInterval(self.hi * other, self.lo * other)
        cands = (
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        )
        return RatInterval(min(cands), max(cands))

    __rmul__ = __mul__

    def inverse(self):
        if self.contains_zero():
            raise ZeroDivisionError("interval contains zero")
        return RatInterval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other):
        if isinstance(other, RatInterval):
            return self * other.inverse()
        return self * (QQ(1) / QQ(other))

    def abs_upper(self):
        return max(abs(self.lo), abs(self.hi))

    def abs_lower(self):
        if self.contains_zero():
            return QQ(0)
        return min(abs(self.lo), abs(self.hi))

    def round_out(self, prec):
        return RatInterval(_round_down(self.lo, prec), _round_up(self.hi, prec))

    def __repr__(self):
        return f"[{self.lo}, {self.hi}]"


class BoxC:
    """Axis-aligned rectangle in the complex plane with rational corners."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=None):
        self.re = re
        self.im = im if im is not None else RatInterval.of(0)

    @staticmethod
    def of(z):
        if isinstance(z, GaussianRational):
            return BoxC(RatInterval.of(z.re), RatInterval.of(z.im))
        return BoxC(RatInterval.of(QQ(z)), RatInterval.of(0))

    def width(self):
        return max(self.re.width(), self.im.width())

    def mid(self):
        return GaussianRational(self.re.mid(), self.im.mid())

    def contains(self, z):
        z = GaussianRational.coerce(z)
        return self.re.contains(z.re) and self.im.contains(z.im)

    def contains_zero(self):
        return self.re.contains_zero() and self.im.contains_zero()

    def strictly_inside(self, other):
        return self.re.strictly_inside(other.re) and self.im.strictly_inside(other.im)

    def intersect(self, other):
        re = self.re.intersect(other.re)
        im = self.im.intersect(other.im)
        if re is None or im is None:
            return None
        return BoxC(re, im)

    def disjoint(self, other):
        return self.intersect(other) is None

    def __add__(self, other):
        other = _as_box(other)
        return BoxC(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_box(other)
        return BoxC(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return _as_box(other) - self

    def __neg__(self):
        return BoxC(-self.re, -self.im)

    def __mul__(self, other):
        other = _as_box(other)
        return BoxC(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def conj(self):
        return BoxC(self.re, -self.im)

    def abs2(self):
        rl, rh = self.re.lo, self.re.hi
        il, ih = self.im.lo, self.im.hi
        rlo = QQ(0) if self.re.contains_zero() else min(rl * rl, rh * rh)
        ilo = QQ(0) if self.im.contains_zero() else min(il * il, ih * ih)
        rhi = max(rl * rl, rh * rh)
        ihi = max(il * il, ih * ih)
        return RatInterval(rlo + ilo, rhi + ihi)

    def abs_upper(self):
        return self.re.abs_upper() + self.im.abs_upper()

    def __truediv__(self, other):
        other = _as_box(other)
        n = self * other.conj()
        d = other.abs2()
        if d.contains_zero():
            raise ZeroDivisionError("divisor box contains zero")
        return BoxC(n.re / d, n.im / d)

    def __rtruediv__(self, other):
        return _as_box(other) / self

    def round_out(self, prec):
        return BoxC(self.re.round_out(prec), self.im.round_out(prec))

    def __repr__(self):
        return f"BoxC({self.re!r}, {self.im!r})"


def _as_box(x):
    if isinstance(x, BoxC):
        return x
    if isinstance(x, RatInterval):
        return BoxC(x)
    return BoxC.of(x)


def eval_poly_box(p, box):
    """Interval Horner evaluation of a Q(i)-coefficient polynomial."""
    acc = BoxC.of(QI_ZERO)
    for c in reversed(p.coeffs):
        acc = acc * box + BoxC.of(c)
    return acc


# -- nth roots ----------------------------------------------------------------


def _iroot(n_int, k):
    try:
        from gmpy2 import iroot

        r, exact = iroot(n_int, k)
        return int(r), bool(exact)
    except ImportError:  # pragma: no cover
        r = round(n_int ** (1.0 / k))
        for cand in (r - 1, r, r + 1):
            if cand >= 0 and cand**k == n_int:
                return cand, True
        return max(r, 0), False


def exact_nth_root(q, n):
    """q**(1/n) as an exact rational, or None (q >= 0 rational)."""
    if q < 0:
        raise ValueError("negative radicand")
    if q == 0:
        return QQ(0)
    rn, en = _iroot(int(q.numerator), n)
    rd, ed = _iroot(int(q.denominator), n)
    if en and ed:
        return QQ(rn, rd)
    return None


def nth_root_interval(q, n, width):
    """Certified enclosure of q**(1/n) for rational q >= 0."""
    ex = exact_nth_root(q, n)
    if ex is not None:
        return RatInterval(ex, ex)
    fq = float(q)
    guess = QQ(*_float_to_frac(fq ** (1.0 / n)))
    lo, hi = guess * QQ(9, 10), guess * QQ(11, 10)
    while lo**n > q:
        lo = lo * QQ(9, 10)
    while hi**n < q:
        hi = hi * QQ(11, 10)
    # bisection with exact sign checks
    while hi - lo > width:
        mid = (lo + hi) / 2
        if mid**n <= q:
            lo = mid
        else:
            hi = mid
    return RatInterval(lo, hi)


def _float_to_frac(x):
    from fractions import Fraction

    f = Fraction(x)
    return f.numerator, f.denominator


# -- certified complex root isolation ------------------------------------------


def _newton_step_box(p, dp, box, prec):
    m = box.mid()
    fm = BoxC.of(p.eval(m))
    dfx = eval_poly_box(dp, box)
    cand = BoxC.of(m) - fm / dfx
    return cand.round_out(prec)


def refine_root_box(p, box, width, dp=None, max_iter=200):
    """Shrink a certified root box of p below width via interval Newton."""
    if dp is None:
        dp = p.derivative()
    prec = _prec_for(width)
    it = 0
    while box.width() > width:
        it += 1
        if it > max_iter:
            raise RuntimeError("root box refinement did not converge")
        try:
            cand = _newton_step_box(p, dp, box, prec)
        except ZeroDivisionError:
            prec += 32
            box = _bisect_shrink(p, box, prec)
            continue
        nxt = cand.intersect(box)
        if nxt is None or nxt.width() >= box.width():
            prec += 32
            box = _bisect_shrink(p, box, prec)
            continue
        box = nxt
    return box


def _prec_for(width):
    import math

    return max(32, int(-math.log2(float(width))) + 24)


def _bisect_shrink(p, box, prec):
    """Fallback: quadrisect and keep the subbox where Newton contracts or
    where an exact sign-based exclusion cannot rule the root out."""
    dp = p.derivative()
    halves_re = _split(box.re)
    halves_im = _split(box.im)
    keep = []
    for r in halves_re:
        for i in halves_im:
            sub = BoxC(r, i)
            try:
                cand = _newton_step_box(p, dp, sub, prec)
            except ZeroDivisionError:
                keep.append(sub)
                continue
            if cand.intersect(sub) is not None:
                keep.append(sub)
    if len(keep) == 1:
        return keep[0]
    if not keep:
        raise RuntimeError("lost root during bisection")
    out = keep[0]
    for b in keep[1:]:
        out = BoxC(out.re.hull(b.re), out.im.hull(b.im))
    return out


def _split(iv):
    m = iv.mid()
    return RatInterval(iv.lo, m), RatInterval(m, iv.hi)


def _float_guesses(p):
    import numpy as np

    coeffs = [complex(c) for c in reversed(p.coeffs)]
    try:
        return [complex(z) for z in np.roots(coeffs)]
    except Exception:
        return None


def _mpmath_guesses(p, dps):
    import mpmath

    with mpmath.workdps(dps):

        def to_mp(q):
            return mpmath.mpf(int(q.numerator)) / mpmath.mpf(int(q.denominator))

        coeffs = [
            mpmath.mpc(to_mp(c.re), to_mp(c.im)) for c in reversed(p.coeffs)
        ]
        roots = mpmath.polyroots(coeffs, maxsteps=200, extraprec=120)
        return [complex(r) for r in roots]


def isolate_complex_roots(p, width=QQ(1, 10**12)):
    """Certified pairwise-disjoint root boxes of a squarefree polynomial.

    Guesses come from floats; certification is interval Newton contraction
    (existence and uniqueness per box), and the count equals the degree, so
    the boxes biject onto the roots.
    """
    if p.degree < 1:
        return []
    if poly_gcd(p, p.derivative()).degree != 0:
        raise ValueError("isolate_complex_roots needs a squarefree polynomial")
    dp = p.derivative()
    for attempt, guesses in enumerate(_guess_sources(p)):
        if guesses is None:
            continue
        boxes = _certify_guesses(p, dp, guesses, width)
        if boxes is not None:
            return boxes
    raise RuntimeError("failed to certify complex roots")


def _guess_sources(p):
    yield _float_guesses(p)
    for dps in (40, 80, 160):
        try:
            yield _mpmath_guesses(p, dps)
        except Exception:
            yield None


def _certify_guesses(p, dp, guesses, width):
    n = p.degree
    if len(guesses) != n:
        return None
    boxes = []
    for z in guesses:
        box = _certify_one(p, dp, z)
        if box is None:
            return None
        boxes.append(box)
    for i in range(n):
        for j in range(i + 1, n):
            if not boxes[i].disjoint(boxes[j]):
                return None
    return [refine_root_box(p, b, width, dp) for b in boxes]


def _certify_one(p, dp, z):
    for radius_exp in range(7, 60, 6):
        r = QQ(1, 1 << radius_exp)
        re = QQ(*_float_to_frac(z.real))
        im = QQ(*_float_to_frac(z.imag))
        box = BoxC(
            RatInterval(re - r, re + r), RatInterval(im - r, im + r)
        )
        prec = radius_exp + 40
        try:
            cand = _newton_step_box(p, dp, box, prec)
        except ZeroDivisionError:
            continue
        if cand.strictly_inside(box):
            inter = cand.intersect(box)
            return inter if inter is not None else cand
    return None


# -- embeddings of one-step extensions ------------------------------------------


class Embedding:
    """A number field together with a certified box pinning one root of its
    modulus; evaluates field elements to arbitrarily narrow boxes."""

    __slots__ = ("field", "box", "_dmod")

    def __init__(self, field, box):
        self.field = field
        self.box = box
        self._dmod = field.modulus.derivative() if field is not None else None

    def refine(self, width):
        if self.field is None:
            return
        if self.box.width() > width:
            self.box = refine_root_box(self.field.modulus, self.box, width, self._dmod)

    def eval_box(self, elem, width=WIDTH_DEFAULT, max_iter=60):
        """Certified box for an element of the field (or a base scalar)."""
        from .algext import AlgebraicScalar

        if not isinstance(elem, AlgebraicScalar):
            return BoxC.of(GaussianRational.coerce(elem))
        target = self.box.width()
        for _ in range(max_iter):
            out = eval_poly_box(elem.poly, self.box)
            if out.width() <= width:
                return out
            # the needed root precision scales with the magnitude of the
            # element's coordinates, which series coefficients make huge;
            # jump straight to the implied target instead of fixed steps
            blowup = out.width() / self.box.width()
            target = min(target / 256, width / (2 * blowup))
            self.refine(target)
        raise RuntimeError("embedding evaluation failed to reach target width")


def embeddings_of(field, width=QQ(1, 10**12)):
    if field is None:
        return [Embedding(None, BoxC.of(QI_ZERO))]
    return [Embedding(field, b) for b in isolate_complex_roots(field.modulus, width)]
