"""One-step algebraic extensions of Q(i) with dynamic evaluation.

An extension element is a residue polynomial modulo a monic squarefree
modulus over the Gaussian rationals.  The modulus is *not* assumed
irreducible: inverting a zero divisor raises SplitRequest carrying the
discovered factorization, and callers rerun the computation over each
factor (dynamic evaluation).  Moduli always live over Q(i) itself; when a
computation over an extension needs a further root, the two extensions are
merged into a single one-step extension by a primitive element (resultant
norm plus a gcd), so no towers are ever built.  Merges whose degree would
exceed MAX_EXT_DEGREE raise UnsupportedTower.
"""

from .gaussian import GaussianRational, QI_ONE, QI_ZERO
from .poly import (
    Poly,
    const_poly,
    det_gauss,
    poly_ext_gcd,
    poly_gcd,
    squarefree_part,
)
from .rationals import QQ

MAX_EXT_DEGREE = 24


class SplitRequest(Exception):
    """A modulus factored mid-computation; rerun over each factor."""

    def __init__(self, modulus, factors):
        super().__init__(f"modulus of degree {modulus.degree} split")
        self.modulus = modulus
        self.factors = factors


class UnsupportedTower(Exception):
    """A second-level extension (or an oversized merge) was required."""


class NumberField:
    """Q(i)[x] / (modulus), modulus monic squarefree of degree >= 2."""

    __slots__ = ("modulus",)

    def __init__(self, modulus):
        if modulus.degree < 2:
            raise ValueError("extension modulus must have degree >= 2")
        self.modulus = modulus

    @property
    def degree(self):
        return self.modulus.degree

    def zero(self):
        return AlgebraicScalar(self, Poly())

    def one(self):
        return AlgebraicScalar(self, const_poly(QI_ONE))

    def gen(self):
        return AlgebraicScalar(self, Poly([QI_ZERO, QI_ONE]))

    def convert(self, x):
        """Coerce a base scalar (or element of this field) into the field."""
        if isinstance(x, AlgebraicScalar):
            if x.field.modulus == self.modulus:
                return x
            raise TypeError("cannot mix distinct extension fields")
        return AlgebraicScalar(self, const_poly(GaussianRational.coerce(x)))

    def reduce(self, poly):
        """Element with residue poly mod modulus (poly over Q(i))."""
        return AlgebraicScalar(self, poly.divmod_monic(self.modulus)[1])

    def __eq__(self, other):
        if isinstance(other, NumberField):
            return self.modulus == other.modulus
        return NotImplemented

    def __hash__(self):
        return hash(self.modulus)

    def __repr__(self):
        return f"NumberField(deg {self.degree})"


class AlgebraicScalar:
    __slots__ = ("field", "poly")

    def __init__(self, field, poly):
        self.field = field
        self.poly = poly

    def _coerce(self, other):
        if isinstance(other, AlgebraicScalar):
            if other.field.modulus != self.field.modulus:
                raise TypeError("cannot mix distinct extension fields")
            return other
        if isinstance(other, (GaussianRational, int)) or type(other) is type(QQ(0)):
            return self.field.convert(other)
        return None

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return AlgebraicScalar(self.field, self.poly + o.poly)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return AlgebraicScalar(self.field, self.poly - o.poly)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return AlgebraicScalar(self.field, o.poly - self.poly)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.field.reduce(self.poly * o.poly)

    __rmul__ = __mul__

    def __neg__(self):
        return AlgebraicScalar(self.field, -self.poly)

    def inverse(self):
        """Inverse mod modulus; raises SplitRequest on a zero divisor."""
        if not self.poly:
            raise ZeroDivisionError("inverse of zero in extension field")
        g, s, _ = poly_ext_gcd(self.poly, self.field.modulus)
        if g.degree == 0:
            return self.field.reduce(s.scale(g.coeffs[0].inverse()))
        other = self.field.modulus.divmod(g)[0].monic()
        raise SplitRequest(self.field.modulus, [g, other])

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers")
        out = self.field.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- structure ---------------------------------------------------------

    def ring_one(self):
        return self.field.one()

    def ring_zero(self):
        return self.field.zero()

    def conj(self):
        """Entrywise Gaussian conjugation of the residue (used for real
        moduli only, where it is a field operation)."""
        return AlgebraicScalar(self.field, self.poly.map_coeffs(lambda c: c.conj()))

    def __bool__(self):
        return bool(self.poly)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.poly == o.poly

    def __hash__(self):
        if self.poly.degree <= 0:
            base = self.poly.coeffs[0] if self.poly.coeffs else QI_ZERO
            return hash(base)
        return hash((self.field.modulus.coeffs, self.poly.coeffs))

    def __str__(self):
        from .poly import format_poly_plain

        return f"({format_poly_plain(self.poly, 'x')} mod {format_poly_plain(self.field.modulus, 'x')})"

    __repr__ = __str__


# -- scalar helpers ----------------------------------------------------------


def conv_scalar(field, x):
    """Coerce x into the scalars of `field` (None means the base field)."""
    if field is None:
        if isinstance(x, AlgebraicScalar):
            if x.poly.degree <= 0:
                return x.poly.coeffs[0] if x.poly.coeffs else QI_ZERO
            raise TypeError("nonconstant extension element in base field context")
        return GaussianRational.coerce(x)
    return field.convert(x)


def field_one(field):
    return QI_ONE if field is None else field.one()


def field_zero(field):
    return QI_ZERO if field is None else field.zero()


def field_degree(field):
    return 1 if field is None else field.degree


def scalar_residue(x):
    """Residue polynomial of x over Q(i) (constant poly for base scalars)."""
    if isinstance(x, AlgebraicScalar):
        return x.poly
    return const_poly(GaussianRational.coerce(x))


# -- dynamic evaluation driver ------------------------------------------------


def make_subfield(factor):
    """(field, conv, gen) for a modulus factor; degree-1 factors collapse
    to the base field with gen equal to the pinned rational value."""
    if factor.degree == 1:
        root = -factor.coeffs[0]
        return None, (lambda elem: scalar_residue(elem).eval(root)), root
    sub = NumberField(factor)
    return sub, (lambda elem: sub.reduce(scalar_residue(elem))), sub.gen()


def run_split_branches(field, task, conv=None, gen=None):
    """Run task(field, conv, gen) resolving SplitRequests of field's modulus.

    conv maps elements of the *original* field into the current one; tasks
    must route every captured extension element through it.  gen is the
    current image of the original generator (None over the base field with
    no extension in play).  Returns a list of (field, result) pairs, one
    per surviving modulus factor.
    """
    if conv is None:
        conv = lambda elem: elem  # noqa: E731
    if gen is None and field is not None:
        gen = field.gen()
    try:
        return [(field, task(field, conv, gen))]
    except SplitRequest as sr:
        if field is None or sr.modulus != field.modulus:
            raise
        out = []
        for factor in sr.factors:
            sub, step, sub_gen = make_subfield(factor)
            out.extend(
                run_split_branches(
                    sub, task, (lambda e, s=step, c=conv: s(c(e))), sub_gen
                )
            )
        return out


# -- rational root hunting -----------------------------------------------------


def _snap_fraction(x, bound):
    from fractions import Fraction

    try:
        return QQ(Fraction(x).limit_denominator(bound))
    except (OverflowError, ValueError):
        return None


def _rational_candidates(z):
    """Plausible exact Gaussian rationals near a complex float."""
    out = []
    for bound in (1, 12, 720, 10**6, 10**12):
        re = _snap_fraction(z.real, bound)
        im = _snap_fraction(z.imag, bound)
        if re is None or im is None:
            continue
        cand = GaussianRational(re, im)
        if cand not in out:
            out.append(cand)
    return out


def find_rational_roots(p):
    """(roots, cofactor): verified Q(i) roots of p and the deflated factor.

    Heuristic float guesses, each verified exactly; a miss only means a
    root stays represented through an extension, never an unsound result.
    """
    import numpy as np

    roots = []
    work = p.monic()
    while work.degree >= 1:
        coeffs = [complex(c) for c in reversed(work.coeffs)]
        try:
            guesses = np.roots(coeffs)
        except Exception:
            break
        found = None
        for z in guesses:
            for cand in _rational_candidates(z):
                if not work.eval(cand):
                    found = cand
                    break
            if found is not None:
                break
        if found is None:
            break
        roots.append(found)
        work = work.divmod_monic(Poly([-found, QI_ONE]))[0]
    return roots, work


def rational_nth_root(q, n):
    """A rational z with z^n == q, preferring max (Re, Im) lex, else None."""
    if not q:
        return GaussianRational(0)
    roots, _ = find_rational_roots(
        Poly([-q] + [QI_ZERO] * (n - 1) + [QI_ONE])
    )
    # find_rational_roots deflates: collect all rational roots of x^n - q
    best = None
    for r in roots:
        if best is None or (r.re, r.im) > (best.re, best.im):
            best = r
    return best


# -- adjoining roots / extension merging ---------------------------------------


def adjoin_root(field, h):
    """Adjoin a root of monic squarefree h (degree >= 2) over `field`.

    Returns a list of branches [(new_field, embed, root)]: embed maps old
    scalars into the new field, root satisfies embed(h)(root) = 0.  Over the
    base field this is a single fresh extension; over an existing extension
    the two are merged into one step via a primitive element, which may
    split into several branches if the merged modulus factors on the way.
    """
    if h.degree < 2:
        raise ValueError("adjoin_root expects degree >= 2")
    if field is None:
        rational, rest = find_rational_roots(h)
        out = [(None, lambda x: x, r) for r in rational]
        if rest.degree == 1:
            out.append((None, lambda x: x, -rest.coeffs[0]))
        elif rest.degree >= 2:
            new = NumberField(rest)
            out.append((new, new.convert, new.gen()))
        return out
    return _merge_extension(field, h)


def _merge_extension(field, h):
    g = field.modulus
    if g.degree * h.degree > MAX_EXT_DEGREE:
        raise UnsupportedTower(
            f"merged extension degree {g.degree * h.degree} exceeds {MAX_EXT_DEGREE}"
        )
    for lam_int in (1, -1, 2, -2, 3, -3, 5, 7, 11):
        lam = GaussianRational(lam_int)
        H = _norm_of_shifted(field, h, lam)
        if not H or H.degree != g.degree * h.degree:
            continue
        H = H.monic()
        if poly_gcd(H, H.derivative()).degree != 0:
            continue
        return _finish_merge(field, h, lam, H)
    raise UnsupportedTower("no squarefree primitive element found in merge")


def _norm_of_shifted(field, h, lam):
    """Res_x(g(x), h(theta - lam*x)) as a polynomial in theta over Q(i)."""
    g = field.modulus
    f_deg = g.degree
    e_deg = h.degree
    # h coefficients as residue polys in x
    hx = [scalar_residue(c) for c in h.coeffs]
    deg_bound = f_deg * e_deg
    pts = []
    theta = QQ(0)
    step = QQ(1)
    while len(pts) < deg_bound + 1:
        t = GaussianRational(theta)
        # substitute z = theta - lam*x: build poly in x of evaluated coeffs
        acc = Poly()  # poly in x over Q(i)
        z_of_x = Poly([t, -lam])
        for c in reversed(hx):
            acc = acc * z_of_x + c
        acc = acc.divmod_monic(g)[1]
        pts.append((t, _resultant_formal(g, acc, f_deg - 1)))
        theta += step
    return interpolate_qi(pts)


def _resultant_formal(p, q, q_formal_degree):
    """Res(p, q) with q held at a formal degree (entries may be zero)."""
    if q_formal_degree < 0:
        q_formal_degree = 0
    qc = list(q.coeffs) + [QI_ZERO] * (q_formal_degree + 1 - len(q.coeffs))
    if len(qc) == 1:
        return qc[0] ** p.degree
    m = p.degree
    l = len(qc) - 1
    width = m + l
    rows = []
    pc = list(reversed(p.coeffs))
    qcr = list(reversed(qc))
    for r in range(l):
        row = [QI_ZERO] * width
        for j, c in enumerate(pc):
            row[r + j] = c
        rows.append(row)
    for r in range(m):
        row = [QI_ZERO] * width
        for j, c in enumerate(qcr):
            row[r + j] = c
        rows.append(row)
    return det_gauss(rows, QI_ZERO)


def interpolate_qi(points):
    """Lagrange interpolation over Q(i); points are (x, y) exact pairs."""
    out = Poly()
    for k, (xk, yk) in enumerate(points):
        if not yk:
            continue
        num = const_poly(yk)
        den = QI_ONE
        for j, (xj, _) in enumerate(points):
            if j == k:
                continue
            num = num * Poly([-xj, QI_ONE])
            den = den * (xk - xj)
        out = out + num.scale(den.inverse())
    return out


def _finish_merge(field, h, lam, H):
    g = field.modulus
    new = NumberField(H)

    def build(nf, conv, gen):
        cv = (lambda c: c) if nf is None else nf.convert
        theta = gen
        gx = g if nf is None else g.map_coeffs(cv)
        # h(theta - lam*x) as a polynomial in x over the merged field
        z_of_x = Poly([theta, cv(-lam)])
        acc = Poly()
        for c in [scalar_residue(cc) for cc in reversed(h.coeffs)]:
            acc = acc * z_of_x + c.map_coeffs(cv)
        d = poly_gcd(gx, acc)
        if d.degree != 1:
            raise UnsupportedTower("merge gcd not linear; degenerate shift")
        x_img = -d.coeffs[0]
        root = theta - cv(lam) * x_img
        return x_img, root

    branches = []
    for nf, (x_img, root) in run_split_branches(new, build):
        if nf is None:
            # merged branch collapsed to rationals; embed by evaluation
            def embed(elem, xi=x_img):
                return scalar_residue(elem).eval(xi)

        else:

            def embed(elem, nf=nf, xi=x_img):
                rp = scalar_residue(elem)
                acc = nf.zero()
                for c in reversed(rp.coeffs):
                    acc = acc * xi + nf.convert(c)
                return acc

        branches.append((nf, embed, root))
    return branches
