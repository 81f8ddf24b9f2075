"""Finite-group representations with closed-form invariant generators.

Three families: Symmetric(n) acting on C^n with elementary symmetric
generators (degrees 1..n), Cyclic(m) acting on C by a primitive m-th root of
unity with generator z^m (degree m), and finite products of these with the
concatenated generators.  Curves in the quotient are stored through the
generator values; for Symmetric(n) the convention is

    P(t)(z) = z^n + sum_j (-1)^j a_j(t) z^(n-j),

so a_j is the j-th elementary symmetric function of the root tuple.
"""

import math
from functools import reduce

from .rationals import QQ
from .gaussian import GaussianRational, gq, QI_ONE, QI_ZERO
from .poly import Poly, const_poly, squarefree_decomposition
from .series import TruncatedSeries, series_from_poly
from .algext import (
    AlgebraicScalar,
    adjoin_root,
    conv_scalar,
    field_one,
    field_zero,
    run_split_branches,
)


class TooLarge(Exception):
    """Orbit polynomial request beyond the |G| * dim V <= 30 guard."""


class RepresentationSpec:
    __slots__ = ("kind", "n", "factors")

    def __init__(self, kind, n=0, factors=()):
        self.kind = kind
        self.n = n
        self.factors = tuple(factors)

    def degrees(self):
        if self.kind == "sym":
            return tuple(range(1, self.n + 1))
        if self.kind == "cyc":
            return (self.n,)
        out = ()
        for f in self.factors:
            out = out + f.degrees()
        return out

    def dim(self):
        if self.kind == "sym":
            return self.n
        if self.kind == "cyc":
            return 1
        return sum(f.dim() for f in self.factors)

    def group_order(self):
        if self.kind == "sym":
            return math.factorial(self.n)
        if self.kind == "cyc":
            return self.n
        return reduce(lambda a, b: a * b, (f.group_order() for f in self.factors), 1)

    def component_slices(self):
        """Index ranges of each product factor inside the component list."""
        if self.kind != "prod":
            return [(self, 0, len(self.degrees()))]
        out = []
        at = 0
        for f in self.factors:
            k = len(f.degrees())
            out.append((f, at, at + k))
            at += k
        return out

    def descriptor(self):
        if self.kind == "sym":
            return f"sym:{self.n}"
        if self.kind == "cyc":
            return f"cyc:{self.n}"
        return "prod:[" + ",".join(f.descriptor() for f in self.factors) + "]"

    def __eq__(self, other):
        if not isinstance(other, RepresentationSpec):
            return NotImplemented
        return (self.kind, self.n, self.factors) == (other.kind, other.n, other.factors)

    def __hash__(self):
        return hash((self.kind, self.n, self.factors))

    def __repr__(self):
        return self.descriptor()


def Symmetric(n):
    if n < 1:
        raise ValueError("Symmetric(n) needs n >= 1")
    return RepresentationSpec("sym", n)


def Cyclic(m):
    if m < 1:
        raise ValueError("Cyclic(m) needs m >= 1")
    return RepresentationSpec("cyc", m)


def Product(factors):
    factors = list(factors)
    if not factors:
        raise ValueError("Product needs at least one factor")
    return RepresentationSpec("prod", 0, factors)


class StratumSignature:
    """Isotropy data of a quotient point.

    Symmetric(n): the partition of n by root multiplicities, sorted
    descending.  Cyclic(m): ("zero",) or ("nonzero",).  Product: the tuple of
    factor signatures.
    """

    __slots__ = ("data",)

    def __init__(self, data):
        self.data = tuple(data)

    @property
    def parts(self):
        return self.data

    def distinct_count(self):
        """Number of parts: stratum dimension for Symmetric(n)."""
        return len(self.data)

    def __eq__(self, other):
        if not isinstance(other, StratumSignature):
            return NotImplemented
        return self.data == other.data

    def __hash__(self):
        return hash(self.data)

    def __repr__(self):
        return "{" + ",".join(str(p) for p in self.data) + "}"


class MonicCurve:
    """A curve in the quotient, stored as generator-value series."""

    __slots__ = ("rep", "components")

    def __init__(self, rep, components):
        components = tuple(components)
        if len(components) != len(rep.degrees()):
            raise ValueError(
                f"{rep.descriptor()} needs {len(rep.degrees())} components, got {len(components)}"
            )
        self.rep = rep
        self.components = components

    def is_exact(self):
        return all(c.exact for c in self.components)

    def degree(self):
        """Degree of the fiber polynomial for Symmetric; dim V in general."""
        return self.rep.dim()

    def z_poly(self):
        """P(t)(z) as a Poly in z with TruncatedSeries coefficients (Symmetric only)."""
        if self.rep.kind != "sym":
            raise ValueError("z_poly applies to Symmetric curves")
        n = self.rep.n
        czero = self.components[0].czero if self.components else QI_ZERO
        one = TruncatedSeries([_one_like(czero)], None, czero)
        coeffs = [None] * (n + 1)
        coeffs[n] = one
        for j in range(1, n + 1):
            a = self.components[j - 1]
            coeffs[n - j] = a if j % 2 == 0 else -a
        return Poly(coeffs)

    def poly_at(self, scalar_zero=None):
        """P(0)(z) over the scalar field (constant terms of the components)."""
        if self.rep.kind != "sym":
            raise ValueError("poly_at applies to Symmetric curves")
        n = self.rep.n
        czero = self.components[0].czero if self.components else QI_ZERO
        one = _one_like(czero)
        coeffs = [czero] * (n + 1)
        coeffs[n] = one
        for j in range(1, n + 1):
            v = self.components[j - 1].coef(0)
            coeffs[n - j] = v if j % 2 == 0 else -v
        return Poly(coeffs)

    def translate(self, t0):
        """The curve reparameterized to base point t0 (components of t0 + t).

        Only exact components can be translated honestly; t0 may be a scalar
        of the components' coefficient field.
        """
        if not t0:
            return self
        out = []
        for c in self.components:
            if not c.exact:
                raise ValueError("cannot translate a truncated curve off 0")
            out.append(series_from_poly(Poly(list(c.coeffs)).taylor_shift(t0), c.czero))
        return MonicCurve(self.rep, out)

    def map_coeffs(self, f, czero):
        return MonicCurve(
            self.rep, [c.map_coeffs(f, czero) for c in self.components]
        )

    def __eq__(self, other):
        if not isinstance(other, MonicCurve):
            return NotImplemented
        return self.rep == other.rep and self.components == other.components

    def __repr__(self):
        comps = ", ".join(str(c) for c in self.components)
        return f"MonicCurve({self.rep.descriptor()}; {comps})"


def _one_like(czero):
    one = getattr(czero, "ring_one", None)
    return one() if one else czero + 1


def vieta_from_roots(rep, roots):
    """MonicCurve with a_j = e_j(roots) for Symmetric(n)."""
    if rep.kind != "sym":
        raise ValueError("vieta_from_roots applies to Symmetric reps")
    n = rep.n
    roots = list(roots)
    if len(roots) != n:
        raise ValueError(f"need {n} roots")
    czero = roots[0].czero if roots else QI_ZERO
    one = TruncatedSeries([_one_like(czero)], None, czero)
    prod = Poly([one])
    for r in roots:
        prod = prod * Poly([-r, one])
    comps = []
    for j in range(1, n + 1):
        cj = prod.coef(n - j)
        comps.append(cj if j % 2 == 0 else -cj)
    return MonicCurve(rep, comps)


def _partition_of_poly(p):
    """Multiplicity partition of a monic squarefree-decomposable polynomial."""
    parts = []
    for g, e in squarefree_decomposition(p):
        parts.extend([e] * g.degree)
    return tuple(sorted(parts, reverse=True))


def stratum_signature(rep, point, field=None):
    """Isotropy signature of a quotient point.

    Symmetric: point is the monic fiber polynomial P(t0); the signature is
    its root-multiplicity partition (dynamic evaluation branches must agree,
    and this is asserted).  Cyclic: point is the scalar generator value.
    Product: point is a tuple, one entry per factor.
    """
    if rep.kind == "sym":
        def task(f, conv, gen):
            q = point.map_coeffs(conv) if f is not None or field is not None else point
            return _partition_of_poly(q)

        if field is None:
            return StratumSignature(_partition_of_poly(point))
        results = [sig for _, sig in run_split_branches(field, task)]
        first = results[0]
        if any(r != first for r in results[1:]):
            raise AssertionError("stratum signature differs across branches")
        return StratumSignature(first)
    if rep.kind == "cyc":
        return StratumSignature(("zero",) if not point else ("nonzero",))
    sigs = []
    for (f, lo, hi), sub in zip(rep.component_slices(), point):
        sigs.append(stratum_signature(f, sub, field))
    return StratumSignature(tuple(s.data for s in sigs))


def tschirnhaus_center(p):
    """Mean of the roots of a monic polynomial: a_1 / n.

    Shifting z by this value kills the degree-(n-1) coefficient.
    """
    n = p.degree
    if n < 1:
        raise ValueError("degree >= 1 required")
    a1 = -p.coef(n - 1)
    inv_n = _inv_int(a1, n)
    return a1 * inv_n


def _inv_int(sample, n):
    one = getattr(sample, "ring_one", None)
    if one is not None:
        one = one()
    else:
        one = gq(1)
    acc = one
    for _ in range(n - 1):
        acc = acc + one
    return acc.inverse() if hasattr(acc, "inverse") else 1 / acc


def cyclotomic_poly(m):
    """The m-th cyclotomic polynomial over the Gaussian rationals."""
    # x^m - 1 = prod over d | m of Phi_d
    num = Poly([gq(-1)] + [QI_ZERO] * (m - 1) + [QI_ONE])
    den = Poly([QI_ONE])
    for d in range(1, m):
        if m % d == 0:
            den = den * cyclotomic_poly(d)
    q, r = num.divmod_monic(den)
    if r:
        raise AssertionError("cyclotomic division not exact")
    return q


def primitive_root_of_unity(m):
    """(field, zeta) with zeta a primitive m-th root of unity.

    field is None when zeta is a Gaussian rational (m = 1, 2, 4).
    """
    if m == 1:
        return None, QI_ONE
    if m == 2:
        return None, -QI_ONE
    phi = cyclotomic_poly(m)
    branches = adjoin_root(None, phi)
    field, _, zeta = branches[0]
    return field, zeta


def orbit_polynomial(rep, x, field=None, zeta=None):
    """The monic polynomial with roots pr_i(g.x) over all g in G and i.

    Degree (dim V) * |G|; its coefficients are invariant under the group.
    x is a tuple of scalars (length dim V) over `field` (None = base).
    For Cyclic factors, `zeta` must be a primitive root in `field` when
    field is given; otherwise an extension is built internally.
    """
    if rep.group_order() * rep.dim() > 30:
        raise TooLarge(
            f"|G| * dim V = {rep.group_order() * rep.dim()} exceeds the desk guard 30"
        )
    if rep.kind == "sym":
        xs = list(x)
        one = field_one(field)
        base = Poly([one])
        for xi in xs:
            base = base * Poly([-conv_scalar(field, xi), one])
        return _poly_pow(base, rep.group_order())
    if rep.kind == "cyc":
        m = rep.n
        (xv,) = tuple(x) if isinstance(x, (tuple, list)) else (x,)
        if zeta is None:
            zfield, zeta_v = primitive_root_of_unity(m)
            if field is not None and zfield is not None:
                raise ValueError("pass zeta explicitly for extension-field points")
            work_field = zfield if field is None else field
            conv = (lambda s: conv_scalar(work_field, s))
            zeta_w = zeta_v
        else:
            work_field = field
            conv = (lambda s: conv_scalar(work_field, s))
            zeta_w = zeta
        xv = conv(xv)
        one = field_one(work_field)
        prod = Poly([one])
        g = one
        for _ in range(m):
            prod = prod * Poly([-(g * xv), one])
            g = g * zeta_w
        if work_field is not None and field is None:
            # built an internal extension: the result must descend to the base
            out = []
            for c in prod.coeffs:
                if isinstance(c, AlgebraicScalar):
                    if c.poly.degree > 0:
                        raise AssertionError("orbit polynomial coefficient not invariant")
                    out.append(c.poly.coef(0) if c.poly.degree == 0 else QI_ZERO)
                else:
                    out.append(c)
            return Poly(out)
        return prod
    # product: P1^(|G2|...) * P2^(|G1|...), one block per factor
    out = Poly([field_one(field)])
    order = rep.group_order()
    for (f, lo, hi), sub in zip(rep.component_slices(), _split_point(rep, x)):
        pf = orbit_polynomial(f, sub, field, zeta)
        out = out * _poly_pow(pf, order // f.group_order())
    return out


def _split_point(rep, x):
    xs = list(x)
    out = []
    at = 0
    for f in rep.factors:
        d = f.dim()
        out.append(tuple(xs[at : at + d]))
        at += d
    return out


def _poly_pow(p, e):
    out = Poly([p.coeffs[-1].ring_one() if hasattr(p.coeffs[-1], "ring_one") else gq(1)])
    acc = p
    while e:
        if e & 1:
            out = out * acc
        e >>= 1
        if e:
            acc = acc * acc
    return out


def sym_generators(n):
    """Generating permutations of Sym(n) as index tuples (images of 0..n-1)."""
    if n == 1:
        return [tuple(range(1))]
    swap = tuple([1, 0] + list(range(2, n)))
    cycle = tuple(list(range(1, n)) + [0])
    return [swap, cycle]


def apply_permutation(perm, x):
    """y with y_i = x_{perm(i)}."""
    xs = list(x)
    return tuple(xs[perm[i]] for i in range(len(xs)))
