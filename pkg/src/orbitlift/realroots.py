"""Real root isolation over the rationals via Sturm sequences.

Polynomials are Poly instances with real Gaussian-rational coefficients.
Roots are returned either as exact rationals or as RealAlgebraic values:
a squarefree defining polynomial plus an isolating interval containing
exactly one real root (certified by the sign-variation count).
"""

from .gaussian import GaussianRational, QI_ZERO
from .intervals import BoxC, Embedding, RatInterval
from .poly import Poly, poly_gcd, squarefree_part
from .rationals import QQ

from .algext import NumberField, find_rational_roots


class RealAlgebraic:
    """An irrational real root: squarefree minpoly + isolating interval."""

    __slots__ = ("minpoly", "interval")

    def __init__(self, minpoly, interval):
        self.minpoly = minpoly
        self.interval = interval

    def refine(self, width):
        lo, hi = self.interval.lo, self.interval.hi
        slo = _sign_at(self.minpoly, lo)
        while hi - lo > width:
            mid = (lo + hi) / 2
            sm = _sign_at(self.minpoly, mid)
            if sm == 0:
                # dyadic midpoints never hit irrational roots; a hit means
                # the root is rational after all
                raise RuntimeError("rational root slipped into RealAlgebraic")
            if sm == slo:
                lo = mid
            else:
                hi = mid
        self.interval = RatInterval(lo, hi)

    def sign_vs(self, q):
        """Sign of (self - q) for rational q."""
        if not self.interval.contains(q):
            return -1 if self.interval.hi < q else 1
        if not self.minpoly.eval(GaussianRational(q)):
            raise RuntimeError("RealAlgebraic compared against its own root")
        width = self.interval.width()
        while self.interval.contains(q):
            width = width / 16
            self.refine(width)
        return -1 if self.interval.hi < q else 1

    def field_embedding(self):
        """(NumberField, Embedding, generator) realizing this root exactly."""
        field = NumberField(self.minpoly.monic())
        box = BoxC(self.interval, RatInterval.of(QQ(0)))
        return field, Embedding(field, box), field.gen()

    def __float__(self):
        if self.interval.width() > QQ(1, 10 ** 17):
            self.refine(QQ(1, 10 ** 17))
        return float(self.interval.mid())

    def __repr__(self):
        return f"RealAlgebraic({self.interval!r})"


def _sign_at(p, x):
    v = p.eval(GaussianRational(x))
    if not v:
        return 0
    return 1 if v.re > 0 else -1


def sturm_chain(p):
    chain = [p, p.derivative()]
    while chain[-1]:
        r = chain[-2].divmod(chain[-1])[1]
        if not r:
            break
        chain.append(-r)
    return chain


def _variations(chain, x):
    signs = []
    for q in chain:
        s = _sign_at(q, x)
        if s != 0:
            signs.append(s)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_real_roots(p, lo, hi):
    """Number of distinct real roots of squarefree p in (lo, hi]."""
    chain = sturm_chain(p)
    return _variations(chain, lo) - _variations(chain, hi)


def isolate_real_roots(p, lo, hi):
    """Roots of p in [lo, hi]: list of QQ (exact) and RealAlgebraic values.

    p must have real coefficients; multiplicities are discarded.
    """
    for c in p.coeffs:
        if c.im:
            raise ValueError("isolate_real_roots needs real coefficients")
    sf = squarefree_part(p).monic()
    rational, rest = find_rational_roots(sf)
    out = []
    for r in rational:
        if r.im:
            continue
        if lo <= r.re <= hi:
            out.append(QQ(r.re))
    for e in (lo, hi):
        while rest.degree >= 1 and not rest.eval(GaussianRational(e)):
            # rational endpoint root the float guesses missed
            out.append(QQ(e))
            rest = rest.divmod_monic(Poly([GaussianRational(-e), GaussianRational(1)]))[0]
    if rest.degree >= 1:
        chain = sturm_chain(rest)
        stack = [(lo, hi, _variations(chain, lo), _variations(chain, hi))]
        while stack:
            a, b, va, vb = stack.pop()
            n = va - vb
            if n == 0:
                continue
            if n == 1:
                out.append(RealAlgebraic(rest, RatInterval(a, b)))
                continue
            mid = (a + b) / 2
            while not rest.eval(GaussianRational(mid)):
                mid = (a + mid) / 2
            vm = _variations(chain, mid)
            stack.append((a, mid, va, vm))
            stack.append((mid, b, vm, vb))
    return sorted(disjoin_roots(out), key=_root_key)


def _root_key(r):
    if isinstance(r, RealAlgebraic):
        return (float(r), 1)
    return (float(r), 0)


def disjoin_roots(roots):
    """Refine RealAlgebraic intervals until all roots are pairwise separated."""
    changed = True
    while changed:
        changed = False
        for i in range(len(roots)):
            for j in range(i + 1, len(roots)):
                a, b = roots[i], roots[j]
                ia = _as_interval(a)
                ib = _as_interval(b)
                if ia.intersect(ib) is not None:
                    for r in (a, b):
                        if isinstance(r, RealAlgebraic):
                            r.refine(r.interval.width() / 16)
                    changed = True
    return roots


def _as_interval(r):
    if isinstance(r, RealAlgebraic):
        return r.interval
    return RatInterval(QQ(r), QQ(r))


def real_zeros_of_gaussian_poly(w, lo, hi):
    """Real zeros of a Q(i)-coefficient polynomial on [lo, hi].

    These are the common real roots of the real and imaginary parts.
    Returns None when w is identically zero on the interval (w == 0).
    """
    if not w:
        return None
    wr = Poly([GaussianRational(c.re) for c in w.coeffs])
    wi = Poly([GaussianRational(c.im) for c in w.coeffs])
    if not wi:
        g = wr
    elif not wr:
        g = wi
    else:
        g = poly_gcd(wr, wi)
        if g.degree == 0:
            return []
    if g.degree == 0:
        return []
    return disjoin_roots(isolate_real_roots(g, lo, hi))
