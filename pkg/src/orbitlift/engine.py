"""Local lifting of curves through finite-group quotient coordinates.

Given a curve written in the invariant coordinates of a symmetric, cyclic, or
product quotient, produce the root channels z(s) with t = t0 + eps * s^N,
exactly over towers of number fields, together with the reduction trace that
produced them and a certified order up to which the coefficientwise identity
sigma(roots) = c(t) has been checked.

The driver alternates three moves on the mean-reduced curve: strip a common
parameter power (Reduce), split the fiber polynomial into root clusters over
a possibly extended field (SliceSplit), and solve unramified channels by
Newton iteration (Principal).  Zero divisors met along the way split the
scalar ring and every affected computation is rerun per factor.
"""

import math

from .rationals import QQ
from .gaussian import GaussianRational, QI_ONE, QI_ZERO
from .poly import (
    Poly,
    charpoly_berkowitz,
    det_berkowitz,
    gcd_bivariate,
    poly_gcd,
    squarefree_decomposition,
    subresultant_psc,
)
from .series import (
    INF,
    InsufficientValuation,
    TruncatedSeries,
    UndeterminedAtOrder,
    series_const,
)
from .algext import (
    AlgebraicScalar,
    SplitRequest,
    adjoin_root,
    conv_scalar,
    field_degree,
    field_one,
    field_zero,
    run_split_branches,
    scalar_residue,
)
from .intervals import BoxC, RatInterval, embeddings_of, eval_poly_box
from .realroots import RealAlgebraic, real_zeros_of_gaussian_poly
from .reps import MonicCurve, StratumSignature, Symmetric
from .puiseux import PuiseuxSeries
from .hensel import hensel_split, mth_root_series, newton_root_series


class NonflatUndetermined(Exception):
    """The truncation window is too short to certify the next reduction."""

    def __init__(self, msg, order=None):
        super().__init__(msg)
        self.order = order


class NotSplittable(Exception):
    """Slice decomposition asked for at a point with a single root cluster."""


class AllZero(Exception):
    """Reduction asked for on the identically zero curve."""


# -- reduction trace ----------------------------------------------------------


class ReductionStep:
    """One node of the reduction trace.

    kind is one of "reduce" (carries the slope m and the power d),
    "remove-fixed", "principal", "slice" (carries cluster sizes and one child
    trace per cluster branch), or "product" (one child trace per factor).
    """

    __slots__ = ("kind", "m", "d", "sizes", "children")

    def __init__(self, kind, m=None, d=None, sizes=None, children=None):
        self.kind = kind
        self.m = m
        self.d = d
        self.sizes = sizes
        self.children = children

    def __repr__(self):
        if self.kind == "reduce":
            return f"Reduce(m={self.m}, d={self.d})"
        if self.kind == "slice":
            inner = " | ".join(format_trace(ch) for ch in self.children)
            sizes = ",".join(str(s) for s in self.sizes)
            return "SliceSplit{" + sizes + "}[" + inner + "]"
        if self.kind == "product":
            inner = " | ".join(format_trace(ch) for ch in self.children)
            return "Product[" + inner + "]"
        if self.kind == "remove-fixed":
            return "RemoveFixed"
        return "Principal"


def format_trace(steps):
    return " -> ".join(repr(s) for s in steps)


def linear_traces(steps):
    """Expand a nested trace into its root-to-leaf linear step sequences."""
    steps = list(steps)
    for i, st in enumerate(steps):
        if st.children is not None:
            out = []
            for ch in st.children:
                for tail in linear_traces(ch):
                    out.append(steps[:i + 1] + tail)
            return out if out else [steps]
    return [steps]


# -- lift containers ----------------------------------------------------------


class LiftEntry:
    """One Galois-folded root channel: a series body over a scalar field.

    conv maps scalars of the field the lift was requested over into the
    entry's field; it accumulates as the recursion composes extensions.
    """

    __slots__ = ("field", "body", "conv")

    def __init__(self, field, body, conv=None):
        self.field = field
        self.body = body
        self.conv = conv if conv is not None else (lambda x: x)

    def compose(self, outer):
        inner = self.conv
        self.conv = lambda x, _i=inner, _o=outer: _i(_o(x))


class LiftBranch:
    """All entries for one approach side (or both, when two_sided)."""

    __slots__ = ("sign", "two_sided", "entries")

    def __init__(self, sign, two_sided, entries):
        self.sign = sign
        self.two_sided = two_sided
        self.entries = list(entries)


class LocalLift:
    """Local lift of a quotient curve at a base point.

    branches holds one two-sided branch when the ramification N is odd and
    one branch per approach sign when N is even.  certificate_order is None
    when the product identity over the fiber polynomial was verified
    exactly, else the order through which it was checked.
    """

    def __init__(self, curve, base_point, base_field, ramification, branches,
                 trace, certificate_order):
        self.curve = curve
        self.base_point = base_point
        self.base_field = base_field
        self.ramification = ramification
        self.branches = tuple(branches)
        self.trace = tuple(trace)
        self.certificate_order = certificate_order
        self._channels = {}

    @property
    def N(self):
        return self.ramification

    def branch(self, sign=1):
        for b in self.branches:
            if b.two_sided or b.sign == sign:
                return b
        raise ValueError(f"no branch for sign {sign}")

    def channels(self, sign=1):
        """The fiber root channels for one approach side, as Puiseux data."""
        sign = 1 if sign >= 0 else -1
        if sign in self._channels:
            return self._channels[sign]
        br = self.branch(sign)
        n = _fiber_count(self.curve.rep)
        if self.base_field is None:
            chans = []
            for e in br.entries:
                if e.field is None:
                    chans.append(PuiseuxSeries(self.base_point, self.ramification,
                                               sign, e.body, None, br.two_sided))
                else:
                    for emb in embeddings_of(e.field):
                        chans.append(PuiseuxSeries(self.base_point,
                                                   self.ramification, sign,
                                                   e.body, emb, br.two_sided))
            if len(chans) != n:
                raise AssertionError(
                    f"expected {n} root channels, found {len(chans)}")
        else:
            chans = self._match_base_channels(br, sign, n)
        self._channels[sign] = chans
        return chans

    def _match_base_channels(self, br, sign, n):
        # keep only the conjugate channels whose copy of the base generator
        # sits over the real base point
        tau = self.base_point
        cands = []
        for e in br.entries:
            if e.field is None:
                continue
            gk = e.conv(self.base_field.gen())
            for emb in embeddings_of(e.field):
                cands.append((e, emb, gk))
        width = QQ(1, 10 ** 12)
        keep = cands
        for _ in range(60):
            tau.refine(min(width, tau.interval.width()))
            tbox = BoxC(RatInterval(tau.interval.lo, tau.interval.hi),
                        RatInterval.of(QQ(0)))
            keep = [(e, emb, gk) for (e, emb, gk) in keep
                    if not emb.eval_box(gk, width).disjoint(tbox)]
            if len(keep) == n:
                return [PuiseuxSeries(tau, self.ramification, sign, e.body, emb,
                                      br.two_sided) for (e, emb, _gk) in keep]
            if len(keep) < n:
                raise AssertionError("lost root channels over the base point")
            width = width / 2 ** 10
        raise AssertionError(
            "could not isolate root channels over the base point")


# -- fiber polynomial plumbing --------------------------------------------------


def _series_one(field):
    return TruncatedSeries([field_one(field)], None, field_zero(field))


def _series_zero(field):
    return TruncatedSeries([], None, field_zero(field))


def _zpoly(comps, field):
    """Monic fiber polynomial in z with series coefficients."""
    n = len(comps)
    cs = [None] * (n + 1)
    cs[n] = _series_one(field)
    for j in range(1, n + 1):
        a = comps[j - 1]
        cs[n - j] = a if j % 2 == 0 else -a
    return Poly(cs)


def _comps_of_zpoly(F, field):
    n = F.degree
    out = []
    for j in range(1, n + 1):
        c = F.coef(n - j)
        if c is None:
            c = _series_zero(field)
        out.append(c if j % 2 == 0 else -c)
    return out


def _poly_at0(comps, field):
    """Scalar fiber polynomial at t = 0."""
    n = len(comps)
    cs = [None] * (n + 1)
    cs[n] = field_one(field)
    for j in range(1, n + 1):
        v = comps[j - 1].coef(0)
        cs[n - j] = v if j % 2 == 0 else -v
    return Poly(cs)


def _map_zpoly(F, cv, field):
    cz = field_zero(field)
    return F.map_coeffs(lambda s: s.map_coeffs(cv, cz))


def _fiber_count(rep):
    if rep.kind == "prod":
        return sum(_fiber_count(f) for f, _lo, _hi in rep.component_slices())
    return rep.n


def _poly_pow(p, e):
    out = None
    acc = p
    while e:
        if e & 1:
            out = acc if out is None else out * acc
        e >>= 1
        if e:
            acc = acc * acc
    if out is None:
        lc = p.coeffs[-1]
        one = lc.ring_one() if hasattr(lc, "ring_one") else QI_ONE
        out = Poly([one])
    return out


def _ensure_regular(field, c):
    """Require a unit leading scalar; zero divisors split the scalar ring."""
    if field is None:
        if not c:
            raise ArithmeticError("leading scalar is zero")
        return
    r = scalar_residue(c)
    if not r:
        raise ArithmeticError("leading scalar is zero")
    g = poly_gcd(r, field.modulus)
    if g.degree > 0:
        other = field.modulus.divmod(g)[0].monic()
        raise SplitRequest(field.modulus, [g, other])


def _w_cap(F, W):
    """Working order capped at what the data actually determines."""
    cap = W
    for c in F.coeffs:
        ko = c.known_order()
        if ko != INF:
            cap = min(cap, int(ko))
    return cap


def _w_cap_series(f, W):
    ko = f.known_order()
    return W if ko == INF else min(W, int(ko))


def _identity(x):
    return x


# -- symmetric quotient recursion ------------------------------------------------


def _lift_sym(comps, field, eps, W, variant):
    """Lift a symmetric-quotient curve germ; returns (N, entries, steps).

    Components are series in t on input; entry bodies are series in s on
    output, with t = eps * s^N.  The first parameter substitution on each
    channel consumes the requested sign eps.
    """
    n = len(comps)
    if n == 1:
        body = comps[0].substitute_power(1, eps)
        return 1, [LiftEntry(field, body)], [ReductionStep("principal")]

    steps = []
    comps = list(comps)
    gamma = comps[0].scale(conv_scalar(field, GaussianRational.coerce(QQ(1, n))))
    if gamma:
        F = _zpoly(comps, field).taylor_shift(gamma)
        comps = _comps_of_zpoly(F, field)
        if any(comps[0].coeffs):
            raise AssertionError("recentering left a nonzero mean")
        # the recentered mean vanishes identically, not merely to the window
        comps[0] = _series_zero(field)
        steps.append(ReductionStep("remove-fixed"))

    if all(c.exact and not c.coeffs for c in comps):
        N = 1
        entries = [LiftEntry(field, _series_zero(field)) for _ in range(n)]
        steps.append(ReductionStep("principal"))
    elif not any(comps):
        order = min(c.order for c in comps if not c.exact)
        if order + 1 < W:
            raise NonflatUndetermined(
                f"all components vanish through order {order}", order)
        # the window fills the working order, so the zero lift is certified
        # as far as this run can check anything
        zb = TruncatedSeries([], order, field_zero(field))
        N = 1
        entries = [LiftEntry(field, zb) for _ in range(n)]
        steps.append(ReductionStep("principal"))
    else:
        p0 = _poly_at0(comps, field)
        if not any(p0.coeffs[:n]):
            N, entries, sub = _reduce_and_recurse(comps, field, eps, W, variant)
        else:
            N, entries, sub = _slice_and_recurse(comps, field, eps, W, variant)
        steps.extend(sub)

    if gamma:
        for e in entries:
            g_e = gamma.map_coeffs(e.conv, field_zero(e.field))
            e.body = e.body + g_e.substitute_power(N, eps)
    return N, entries, steps


def _reduce_data(comps, field):
    """Reduction slope m = min val(c_k)/k and the minimal d with d*m >= 1."""
    m = None
    pending = []
    for k, a in enumerate(comps, start=1):
        if a.exact and not a.coeffs:
            continue
        v = a.valuation()
        if isinstance(v, UndeterminedAtOrder):
            pending.append((k, v.order))
            continue
        if v == INF:
            continue
        _ensure_regular(field, a.coef(int(v)))
        mk = QQ(int(v), k)
        if m is None or mk < m:
            m = mk
    if m is None:
        if not pending:
            raise AllZero("every component is the zero series")
        order = min(o for _k, o in pending)
        raise NonflatUndetermined(
            f"no leading valuation is determined through order {order}", order)
    for k, o in pending:
        # a window-zero component is harmless only if its hidden valuation
        # cannot undercut the slope
        if QQ(o + 1, k) < m:
            raise NonflatUndetermined(
                f"component {k} vanishes through order {o}, "
                f"below the reduction slope {m}", o)
    d = 1 if m >= 1 else -(-m.denominator // m.numerator)
    return m, d


def _reduce_and_recurse(comps, field, eps, W, variant):
    m, d = _reduce_data(comps, field)
    bcomps = []
    for k, a in enumerate(comps, start=1):
        if a.exact and not a.coeffs:
            bcomps.append(a)
            continue
        try:
            bcomps.append(a.substitute_power(d, eps).shift_divide(k))
        except InsufficientValuation as exc:
            if exc.undetermined_at is None:
                raise
            raise NonflatUndetermined(str(exc), exc.undetermined_at) from exc
    N_c, entries, sub = _lift_sym(bcomps, field, 1, W, variant)
    for e in entries:
        e.body = e.body.shift_up(N_c)
    return d * N_c, entries, [ReductionStep("reduce", m=m, d=d)] + sub


def _slice_and_recurse(comps, field, eps, W, variant):
    Pz = _zpoly(comps, field)
    p0 = _poly_at0(comps, field)
    classes = squarefree_decomposition(p0)
    if len(classes) == 1 and classes[0][0].degree == 1:
        raise AssertionError("mean-reduced fiber cannot cluster at one root")
    if variant:
        r = variant % len(classes)
        classes = classes[r:] + classes[:r]
    if len(classes) > 1:
        seeds = [_poly_pow(g, mult) for g, mult in classes]
        factors = hensel_split(Pz, seeds, _w_cap(Pz, W))
    else:
        factors = [Pz]

    results = []
    sizes = []
    for (g, mult), Fi in zip(classes, factors):
        if g.degree == 1:
            branches = [(field, _identity, -g.coeffs[0])]
        else:
            branches = adjoin_root(field, g)
        for fld2, embed, theta in branches:
            task = _cluster_task(Pz, Fi, g, mult, theta, embed, eps, W, variant)
            if fld2 is None or fld2 is field:
                results.append(task(fld2, _identity, None))
            else:
                results.extend(res for _leaf, res in run_split_branches(fld2, task))
            while len(sizes) < len(results):
                sizes.append(mult)

    N = 1
    for N_j, _e, _s in results:
        N = N * N_j // math.gcd(N, N_j)
    entries = []
    children = []
    for N_j, ents, sub in results:
        if N // N_j > 1:
            for e in ents:
                e.body = e.body.substitute_power(N // N_j, 1)
        entries.extend(ents)
        children.append(tuple(sub))
    node = ReductionStep("slice", sizes=tuple(sizes),
                         children=tuple(children))
    return N, entries, [node]


def _cluster_task(Pz, Fi, g, mult, theta, embed, eps, W, variant):
    """Task run per scalar-ring branch: lift the cluster at one root of g."""

    def task(leaf, conv, _gen):
        def cv(x, _c=conv, _e=embed):
            return _c(_e(x))

        czero = field_zero(leaf)
        th = conv(theta)
        if mult == 1:
            Fz = _map_zpoly(Pz, cv, leaf)
            body = newton_root_series(Fz, th, _w_cap(Fz, W))
            entry = LiftEntry(leaf, body.substitute_power(1, eps))
            entry.compose(cv)
            return 1, [entry], [ReductionStep("principal")]

        Fl = _map_zpoly(Fi, cv, leaf)
        if g.degree > 1:
            # peel the theta-cluster off its conjugates
            gl = g.map_coeffs(cv)
            lin = Poly([-th, field_one(leaf)])
            cof, rem = gl.divmod_monic(lin)
            if rem:
                raise AssertionError(
                    "adjoined root must divide its class polynomial")
            seeds = [_poly_pow(lin, mult), _poly_pow(cof, mult)]
            Fl = hensel_split(Fl, seeds, _w_cap(Fl, W))[0]
        shifted = Fl.taylor_shift(series_const(th, czero))
        sub = _comps_of_zpoly(shifted, leaf)
        N_j, entries, sub_steps = _lift_sym(sub, leaf, eps, W, variant)
        for e in entries:
            th_e = e.conv(th)
            e.body = e.body + series_const(th_e, field_zero(e.field))
            e.compose(cv)
        return N_j, entries, sub_steps

    return task


# -- cyclic quotient recursion -----------------------------------------------------


def _lift_cyc(a, mdeg, field, eps, W, variant):
    """Lift z^mdeg = a(t); same reduction schedule as the symmetric case."""
    czero = field_zero(field)
    if mdeg == 1:
        body = a.substitute_power(1, eps)
        return 1, [LiftEntry(field, body)], [ReductionStep("principal")]
    if a.exact and not a.coeffs:
        entries = [LiftEntry(field, _series_zero(field)) for _ in range(mdeg)]
        return 1, entries, [ReductionStep("principal")]
    if not a:
        raise NonflatUndetermined(
            f"coordinate vanishes through order {a.order}", a.order)
    v = a.valuation()
    if isinstance(v, UndeterminedAtOrder):
        raise NonflatUndetermined(
            f"valuation undetermined at order {v.order}", v.order)
    v = int(v)
    _ensure_regular(field, a.coef(v))

    if v == 0:
        h = Poly([-a.coef(0)] + [czero] * (mdeg - 1) + [field_one(field)])
        results = []
        for fld2, embed, rho0 in adjoin_root(field, h):
            task = _cyc_root_task(a, mdeg, rho0, embed, eps, W)
            if fld2 is None or fld2 is field:
                results.append(task(fld2, _identity, None))
            else:
                results.extend(res for _leaf, res in run_split_branches(fld2, task))
        entries = [e for ents in results for e in ents]
        return 1, entries, [ReductionStep("principal")]

    d = 1 if v >= mdeg else -(-mdeg // v)
    try:
        b = a.substitute_power(d, eps).shift_divide(mdeg)
    except InsufficientValuation as exc:
        if exc.undetermined_at is None:
            raise
        raise NonflatUndetermined(str(exc), exc.undetermined_at) from exc
    N_c, entries, sub = _lift_cyc(b, mdeg, field, 1, W, variant)
    for e in entries:
        e.body = e.body.shift_up(N_c)
    step = ReductionStep("reduce", m=QQ(v, mdeg), d=d)
    return d * N_c, entries, [step] + sub


def _cyc_root_task(a, mdeg, rho0, embed, eps, W):
    def task(leaf, conv, _gen):
        def cv(x, _c=conv, _e=embed):
            return _c(_e(x))

        al = a.map_coeffs(cv, field_zero(leaf))
        rho = mth_root_series(al.substitute_power(1, eps), mdeg, conv(rho0),
                              _w_cap_series(al, W))
        entry = LiftEntry(leaf, rho)
        entry.compose(cv)
        return [entry]

    return task


# -- dispatch and certificate --------------------------------------------------------


def _lift_top(rep, comps, field, eps, W, variant):
    if rep.kind == "sym":
        return _lift_sym(list(comps), field, eps, W, variant)
    if rep.kind == "cyc":
        return _lift_cyc(comps[0], rep.n, field, eps, W, variant)
    parts = [_lift_top(factor, comps[lo:hi], field, eps, W, variant)
             for factor, lo, hi in rep.component_slices()]
    N = 1
    for N_f, _e, _s in parts:
        N = N * N_f // math.gcd(N, N_f)
    entries = []
    children = []
    for N_f, ents, sub in parts:
        if N // N_f > 1:
            for e in ents:
                e.body = e.body.substitute_power(N // N_f, 1)
        entries.extend(ents)
        children.append(tuple(sub))
    return N, entries, [ReductionStep("product", children=tuple(children))]


def _target_zpoly(rep, comps, field, N, eps):
    """The fiber polynomial after substituting t = eps * s^N."""
    if rep.kind == "sym":
        return _zpoly([c.substitute_power(N, eps) for c in comps], field)
    if rep.kind == "cyc":
        czero = field_zero(field)
        cs = [-comps[0].substitute_power(N, eps)]
        cs += [TruncatedSeries([], None, czero) for _ in range(rep.n - 1)]
        cs.append(_series_one(field))
        return Poly(cs)
    out = None
    for factor, lo, hi in rep.component_slices():
        f = _target_zpoly(factor, comps[lo:hi], field, N, eps)
        out = f if out is None else out * f
    return out


def _vec(x, D):
    r = scalar_residue(x)
    out = []
    for i in range(D):
        c = r.coef(i)
        out.append(c if c is not None else QI_ZERO)
    return out


def _gauss_inverse(M):
    """Exact inverse of a Gaussian-rational matrix."""
    D = len(M)
    aug = [list(M[i]) + [QI_ONE if j == i else QI_ZERO for j in range(D)]
           for i in range(D)]
    for col in range(D):
        piv = None
        for r in range(col, D):
            if aug[r][col]:
                piv = r
                break
        if piv is None:
            raise ArithmeticError("relative basis matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = aug[col][col].inverse()
        aug[col] = [v * inv for v in aug[col]]
        for r in range(D):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[D:] for row in aug]


def _dot(row, vec):
    acc = QI_ZERO
    for a, b in zip(row, vec):
        if a and b:
            acc = acc + a * b
    return acc


def _entry_factor(entry, base):
    """Characteristic polynomial of the entry's body relative to the base field.

    Its roots over an algebraic closure are exactly the conjugate root
    channels the entry folds together, so the product over all entries must
    reproduce the substituted fiber polynomial.
    """
    body = entry.body
    if entry.field is None:
        if base is not None:
            raise ArithmeticError(
                "entry field does not contain the base point field")
        return Poly([-body, _series_one(None)])
    e0 = field_degree(base)
    D = entry.field.degree
    drel, rem = divmod(D, e0)
    if rem:
        raise ArithmeticError("entry field does not contain the base point field")
    EF = entry.field
    y = EF.gen()
    g0 = entry.conv(base.gen()) if base is not None else EF.one()

    # mixed basis g0^a * y^k of the entry field over the base field
    cols = []
    acc_a = EF.one()
    for _a in range(e0):
        acc = acc_a
        for _k in range(drel):
            cols.append(_vec(acc, D))
            acc = acc * y
        acc_a = acc_a * g0
    minv = _gauss_inverse([[cols[c][i] for c in range(D)] for i in range(D)])

    bz = field_zero(base)
    ypows = [EF.one()]
    for _ in range(drel - 1):
        ypows.append(ypows[-1] * y)
    rows = [[None] * drel for _ in range(drel)]
    for k in range(drel):
        colvals = [[] for _ in range(drel)]
        for l in range(len(body.coeffs)):
            w = _vec(body.coeffs[l] * ypows[k], D)
            coords = [_dot(minv[i], w) for i in range(D)]
            for kp in range(drel):
                if base is None:
                    colvals[kp].append(coords[kp])
                else:
                    colvals[kp].append(AlgebraicScalar(
                        base, Poly([coords[a * drel + kp] for a in range(e0)])))
        for kp in range(drel):
            rows[kp][k] = TruncatedSeries(colvals[kp], body.order, bz)
    chi = charpoly_berkowitz(rows, _series_one(base))
    return Poly(chi)


def _certify(entries, field, target):
    """Check prod of entry factors == target, coefficient by coefficient.

    Returns None when every compared coefficient series is exact, else the
    smallest order through which the identity is certified.  Raises on any
    mismatch inside the certified window.
    """
    prod = None
    for e in entries:
        f = _entry_factor(e, field)
        prod = f if prod is None else prod * f
    czero = field_zero(field)
    if prod is None or prod.degree != target.degree:
        raise AssertionError("lift certificate: wrong total degree")
    cert = INF
    for j in range(target.degree + 1):
        a = prod.coef(j)
        a = TruncatedSeries([], None, czero) if a is None else a
        b = target.coef(j)
        b = TruncatedSeries([], None, czero) if b is None else b
        common = min(a.known_order(), b.known_order())
        if common == INF:
            hi = max(len(a.coeffs), len(b.coeffs)) - 1
        else:
            hi = int(common)
            cert = min(cert, common)
        for l in range(hi + 1):
            if a.coef(l) != b.coef(l):
                raise AssertionError(f"lift certificate mismatch at z^{j} t^{l}")
    return None if cert == INF else int(cert)


def _merge_cert(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


# -- top-level driver ---------------------------------------------------------------


def _rebase(curve, t0):
    """Translate the curve so the base point sits at parameter 0."""
    if isinstance(t0, RealAlgebraic):
        field, _emb, gen = t0.field_embedding()
        moved = curve.map_coeffs(field.convert, field.zero()).translate(gen)
        return t0, field, list(moved.components)
    q = QQ(t0)
    if q:
        moved = curve.translate(GaussianRational.coerce(q))
        return q, None, list(moved.components)
    return q, None, list(curve.components)


def _initial_order(comps, T, n):
    vmax = 0
    cap = INF
    for c in comps:
        if c.exact and not c.coeffs:
            continue
        cap = min(cap, c.known_order())
        v = c.val_lower_bound()
        if v != INF:
            vmax = max(vmax, int(v))
    return T + 4 + n * (vmax + 1), cap


def _leaf_for_point(leaves, tau, gen_of):
    """Pick the scalar-ring branch whose residue field contains the base point."""
    width = QQ(1, 10 ** 6)
    for _ in range(80):
        tbox = BoxC(RatInterval(tau.interval.lo, tau.interval.hi),
                    RatInterval.of(QQ(0)))
        live = []
        for field, data in leaves:
            gen = gen_of(data)
            if field is None:
                probe = Poly([-GaussianRational.coerce(gen), QI_ONE])
            else:
                probe = field.modulus
            if eval_poly_box(probe, tbox).contains_zero():
                live.append((field, data))
        if len(live) == 1:
            return live[0]
        if not live:
            raise ArithmeticError("base point lost by every split branch")
        tau.refine(width)
        width = width / 2 ** 6
    raise ArithmeticError(
        "could not isolate the base point among split branches")


def local_lift(curve, t0=0, T=16, _variant=0):
    """Lift a quotient curve locally at t0 to certified Puiseux channels.

    Returns a LocalLift whose branches carry the root channels z(s) with
    t = t0 + eps * s^N; the coefficientwise identity between the substituted
    curve and the symmetric functions of the channels is checked through
    certificate_order (None means exact).  Raises NonflatUndetermined when
    the truncation window cannot support the next reduction step.
    """
    rep = curve.rep
    n = _fiber_count(rep)
    base_point, base_field, comps = _rebase(curve, t0)
    W, cap = _initial_order(comps, T, n)
    last = None
    for _round in range(5):
        def attempt(field, conv, gen, _W=W):
            czero = field_zero(field)
            work = [c.map_coeffs(conv, czero) for c in comps]
            N, entries, steps = _lift_top(rep, work, field, 1, _W, _variant)
            cert = _certify(entries, field, _target_zpoly(rep, work, field, N, 1))
            if N % 2:
                return N, (LiftBranch(1, True, entries),), tuple(steps), cert, gen
            N2, entries2, _ = _lift_top(rep, work, field, -1, _W, _variant)
            if N2 != N:
                raise AssertionError("ramification differs between approach sides")
            cert2 = _certify(entries2, field,
                             _target_zpoly(rep, work, field, N2, -1))
            branches = (LiftBranch(1, False, entries),
                        LiftBranch(-1, False, entries2))
            return N, branches, tuple(steps), _merge_cert(cert, cert2), gen

        if base_field is None:
            chosen_field, data = None, attempt(None, _identity, None)
        else:
            leaves = run_split_branches(base_field, attempt)
            if len(leaves) == 1:
                chosen_field, data = leaves[0]
            else:
                chosen_field, data = _leaf_for_point(leaves, base_point,
                                                     lambda d: d[4])
        N, branches, steps, cert, _gen = data
        last = (chosen_field, N, branches, steps, cert)
        if cert is None or cert >= T:
            break
        if cap != INF and W >= cap:
            break
        W *= 2
    else:
        raise ArithmeticError(f"certificate order stalled below the target {T}")

    chosen_field, N, branches, steps, cert = last
    for path in linear_traces(list(steps)):
        # the termination measure restarts after a slice; only adjacent
        # Reduce steps obey m1 = d*m - 1 < m
        for prev, nxt in zip(path, path[1:]):
            if prev.kind == "reduce" and nxt.kind == "reduce":
                if nxt.m != prev.d * prev.m - 1 or not nxt.m < prev.m:
                    raise AssertionError(
                        "reduction slopes must satisfy m1 = d*m - 1 < m")
    lift = LocalLift(curve, base_point, chosen_field, N, branches, steps, cert)
    for b in lift.branches:
        lift.channels(b.sign)
    return lift


# -- public single-step operations ----------------------------------------------------


def _component_weights(rep):
    if rep.kind == "sym":
        return list(range(1, rep.n + 1))
    if rep.kind == "cyc":
        return [rep.n]
    out = []
    for factor, _lo, _hi in rep.component_slices():
        out.extend(_component_weights(factor))
    return out


def reduce_step(curve, sign=1):
    """One weighted reduction c_k(t) -> c_k(sign * u^d) / u^(d * v_k), d minimal.

    The weight is k for the k-th symmetric component and the cyclic order for
    a cyclic coordinate.  Returns (d, reduced curve).
    """
    comps = list(curve.components)
    weights = _component_weights(curve.rep)
    if all(c.exact and not c.coeffs for c in comps):
        raise AllZero("cannot reduce the zero curve")
    m = None
    for c, k in zip(comps, weights):
        if c.exact and not c.coeffs:
            continue
        v = c.valuation()
        if isinstance(v, UndeterminedAtOrder) or v == INF:
            continue
        if v == 0:
            raise InsufficientValuation(
                "a component has valuation 0; reduction needs positive valuation")
        mk = QQ(int(v), k)
        if m is None or mk < m:
            m = mk
    if m is None:
        order = min(c.order for c in comps if not c.exact)
        raise InsufficientValuation(
            "no component valuation is determined", undetermined_at=order)
    for c, k in zip(comps, weights):
        if c.exact and not c.coeffs:
            continue
        v = c.valuation()
        if isinstance(v, UndeterminedAtOrder) and QQ(v.order + 1, k) < m:
            raise InsufficientValuation(
                f"window of length {v.order + 1} cannot certify slope {m}",
                undetermined_at=v.order)
    d = 1 if m >= 1 else -(-m.denominator // m.numerator)
    out = []
    for c, k in zip(comps, weights):
        if c.exact and not c.coeffs:
            out.append(c)
        else:
            out.append(c.substitute_power(d, sign).shift_divide(k))
    return d, MonicCurve(curve.rep, tuple(out))


class SliceCluster:
    """One root cluster of the fiber polynomial at the base point.

    center is the mean root path of the cluster (a series over field); curve
    is the recentered symmetric sub-curve of degree size.
    """

    __slots__ = ("center", "curve", "field", "size")

    def __init__(self, center, curve, field, size):
        self.center = center
        self.curve = curve
        self.field = field
        self.size = size

    def __repr__(self):
        return f"SliceCluster(size={self.size})"


def slice_split(curve, t0=0, T=16):
    """Split a symmetric-quotient curve into recentered root clusters at t0.

    One cluster per root of the fiber polynomial at t0, folded to one
    representative per squarefree class when roots are conjugate over the
    scalar field.  Raises NotSplittable when all roots coincide.
    """
    if curve.rep.kind != "sym":
        raise ValueError("slice decomposition is defined for symmetric quotients")
    base_point, base_field, comps = _rebase(curve, t0)

    def task(field, conv, gen):
        czero = field_zero(field)
        work = [c.map_coeffs(conv, czero) for c in comps]
        return _slice_clusters(work, field, T), gen

    if base_field is None:
        clusters, _ = task(None, _identity, None)
        return clusters
    leaves = run_split_branches(base_field, task)
    if len(leaves) == 1:
        return leaves[0][1][0]
    _fld, (clusters, _gen) = _leaf_for_point(leaves, base_point, lambda d: d[1])
    return clusters


def _slice_clusters(comps, field, T):
    Pz = _zpoly(comps, field)
    p0 = _poly_at0(comps, field)
    classes = squarefree_decomposition(p0)
    if len(classes) == 1 and classes[0][0].degree == 1:
        raise NotSplittable("the fiber polynomial has a single repeated root")
    cap = _w_cap(Pz, T)
    if len(classes) > 1:
        seeds = [_poly_pow(g, mult) for g, mult in classes]
        factors = hensel_split(Pz, seeds, cap)
    else:
        factors = [Pz]
    out = []
    for (g, mult), Fi in zip(classes, factors):
        if g.degree == 1:
            branches = [(field, _identity, -g.coeffs[0])]
        else:
            branches = adjoin_root(field, g)
        for fld2, embed, theta in branches:
            task = _cluster_split_task(Fi, g, mult, theta, embed, cap)
            if fld2 is None or fld2 is field:
                out.append(task(fld2, _identity, None))
            else:
                out.extend(res for _leaf, res in run_split_branches(fld2, task))
    return out


def _cluster_split_task(Fi, g, mult, theta, embed, cap):
    def task(leaf, conv, _gen):
        def cv(x, _c=conv, _e=embed):
            return _c(_e(x))

        th = conv(theta)
        Fl = _map_zpoly(Fi, cv, leaf)
        if g.degree > 1:
            gl = g.map_coeffs(cv)
            lin = Poly([-th, field_one(leaf)])
            cof, rem = gl.divmod_monic(lin)
            if rem:
                raise AssertionError(
                    "adjoined root must divide its class polynomial")
            seeds = [_poly_pow(lin, mult), _poly_pow(cof, mult)]
            Fl = hensel_split(Fl, seeds, cap)[0]
        c1 = Fl.coef(mult - 1)
        c1 = _series_zero(leaf) if c1 is None else c1
        inv_m = conv_scalar(leaf, GaussianRational.coerce(QQ(1, mult)))
        center = (-c1).scale(inv_m)
        rec = Fl.taylor_shift(center)
        sub = tuple(_comps_of_zpoly(rec, leaf))
        return SliceCluster(center, MonicCurve(Symmetric(mult), sub), leaf, mult)

    return task


# -- normal nonflatness witness --------------------------------------------------------


class WitnessReport:
    """Generic stratum signature near the base point plus the vanishing order
    of the stratum witness there."""

    __slots__ = ("signature", "valuation")

    def __init__(self, signature, valuation):
        self.signature = signature
        self.valuation = valuation

    def __repr__(self):
        return f"WitnessReport({self.signature!r}, valuation={self.valuation})"


def _bivar_fiber_poly(rep, comps):
    """Fiber polynomial with exact polynomial coefficients in t."""
    for a in comps:
        if not a.exact:
            raise ValueError("exact curve required")
    one_t = Poly([QI_ONE])
    if rep.kind == "cyc":
        cs = [-Poly(list(comps[0].coeffs))]
        cs += [Poly([]) for _ in range(rep.n - 1)]
        cs.append(one_t)
        return Poly(cs)
    n = len(comps)
    cs = [None] * (n + 1)
    cs[n] = one_t
    for j in range(1, n + 1):
        pa = Poly(list(comps[j - 1].coeffs))
        cs[n - j] = pa if j % 2 == 0 else -pa
    return Poly(cs)


def _dz(G, zero):
    """z-derivative of a fiber polynomial whose coefficients do not support
    scaling by raw ints."""
    cs = []
    for k in range(1, G.degree + 1):
        c = G.coef(k)
        if c is None:
            cs.append(zero)
        else:
            cs.append(c.scale(GaussianRational.coerce(QQ(k))))
    return Poly(cs)


def _chain_exact(P):
    """Gcd-chain degrees and the combined level witness of an exact fiber
    polynomial.  The witness vanishes exactly where some chain degree jumps,
    i.e. where the multiplicity partition of the fiber degenerates."""
    degs = [P.degree]
    wit = Poly([QI_ONE])
    G = P
    while G.degree > 0:
        dG = _dz(G, Poly([]))
        g = gcd_bivariate(G, dG)
        k = g.degree
        w = subresultant_psc(G, dG, k, zero=Poly([]), one=Poly([QI_ONE]),
                             ring=True)
        wit = wit * w
        degs.append(k)
        if k == 0:
            break
        G = g
    return degs, wit


def _pc(P, i, zero):
    if i < 0:
        return zero
    c = P.coef(i)
    return zero if c is None else c


def _subres_poly_series(p, q, k, field):
    """The k-th subresultant polynomial of p, q over the series ring."""
    zero = _series_zero(field)
    one = _series_one(field)
    m, l = p.degree, q.degree
    size = m + l - 2 * k
    rows = []
    for i in range(l - k):
        rows.append([_pc(p, m + i - c, zero) for c in range(m + l)])
    for i in range(m - k):
        rows.append([_pc(q, l + i - c, zero) for c in range(m + l)])
    cs = []
    for j in range(k + 1):
        cols = list(range(size - 1)) + [m + l - 1 - k - j]
        sub = [[row[c] for c in cols] for row in rows]
        cs.append(det_berkowitz(sub, one))
    return Poly(cs)


def _chain_series(P, field):
    """(chain degrees, witness valuation at 0) for a truncated fiber
    polynomial; the valuation comes back as UndeterminedAtOrder when some
    window cannot decide a chain level."""
    degs = [P.degree]
    total = 0
    G = P
    while G.degree > 0:
        dG = _dz(G, _series_zero(field))
        level = None
        for k in range(dG.degree + 1):
            w = subresultant_psc(G, dG, k, zero=_series_zero(field),
                                 one=_series_one(field), ring=True)
            if w.exact and not w.coeffs:
                continue
            v = w.valuation()
            if isinstance(v, UndeterminedAtOrder):
                return degs, v
            if v == INF:
                continue
            level = (k, int(v))
            break
        if level is None:
            raise ArithmeticError("witness chain failed to terminate")
        k, v = level
        degs.append(k)
        total += v
        if k == 0:
            break
        G = _subres_poly_series(G, dG, k, field)
    return degs, total


def _partition_from_degrees(degs):
    # degs[j] = number of roots counted with multiplicity reduced j times
    e = [degs[j - 1] - degs[j] for j in range(1, len(degs))]
    parts = []
    for j in range(len(e), 0, -1):
        higher = e[j] if j < len(e) else 0
        parts.extend([j] * (e[j - 1] - higher))
    return tuple(sorted(parts, reverse=True))


def _zero_at_root(c, K, tau):
    """Does the scalar c vanish in the residue field at the real root tau?"""
    r = scalar_residue(c)
    h = poly_gcd(r, K.modulus)
    if h.degree == 0:
        return False
    roots = real_zeros_of_gaussian_poly(h, tau.interval.lo, tau.interval.hi)
    return bool(roots)


def _val_at(w, t0):
    """Vanishing order of an exact witness polynomial at a real point."""
    if isinstance(t0, RealAlgebraic):
        K, _emb, _gen = t0.field_embedding()
        sh = w.map_coeffs(K.convert).taylor_shift(K.gen())
        for k, c in enumerate(sh.coeffs):
            if not c:
                continue
            if not _zero_at_root(c, K, t0):
                return k
        raise ArithmeticError("witness vanishes identically at the base point")
    sh = w.taylor_shift(GaussianRational.coerce(QQ(t0)))
    for k, c in enumerate(sh.coeffs):
        if c:
            return k
    raise ArithmeticError("witness polynomial is zero")


def witness_polynomial(curve):
    """(generic signature, exact witness polynomial in t) for an exact curve.

    The witness vanishes exactly at the parameters where the stratum
    signature of the curve degenerates below its generic value.
    """
    rep = curve.rep
    if rep.kind == "prod":
        sigs = []
        wit = Poly([QI_ONE])
        for factor, lo, hi in rep.component_slices():
            sub = MonicCurve(factor, tuple(curve.components[lo:hi]))
            s, w = witness_polynomial(sub)
            sigs.append(s.data)
            wit = wit * w
        return StratumSignature(tuple(sigs)), wit
    if rep.kind == "cyc":
        a = curve.components[0]
        if not a.exact:
            raise ValueError("exact curve required")
        if not a.coeffs:
            return StratumSignature(("zero",)), Poly([QI_ONE])
        P = _bivar_fiber_poly(rep, curve.components)
        _degs, wit = _chain_exact(P)
        return StratumSignature(("nonzero",)), wit
    P = _bivar_fiber_poly(rep, curve.components)
    degs, wit = _chain_exact(P)
    return StratumSignature(_partition_from_degrees(degs)), wit


def nonflat_witness(curve, t0=0):
    """Generic stratum signature near t0 and the witness valuation there.

    For truncated curves (supported at t0 = 0 only) the result may be an
    UndeterminedAtOrder value when the window cannot decide the chain.
    """
    rep = curve.rep
    if rep.kind == "prod":
        sigs = []
        val = 0
        worst = None
        for factor, lo, hi in rep.component_slices():
            sub = MonicCurve(factor, tuple(curve.components[lo:hi]))
            r = nonflat_witness(sub, t0)
            if isinstance(r, UndeterminedAtOrder):
                worst = r if worst is None or r.order < worst.order else worst
                continue
            sigs.append(r.signature.data)
            val += r.valuation
        if worst is not None:
            return worst
        return WitnessReport(StratumSignature(tuple(sigs)), val)

    if curve.is_exact():
        sig, wit = witness_polynomial(curve)
        return WitnessReport(sig, _val_at(wit, t0))

    if isinstance(t0, RealAlgebraic) or QQ(t0) != 0:
        raise ValueError("truncated curves support the witness only at t = 0")
    if rep.kind == "cyc":
        a = curve.components[0]
        if not a:
            return UndeterminedAtOrder(a.order)
        cs = [-a] + [TruncatedSeries([], None, QI_ZERO)] * (rep.n - 1)
        cs.append(_series_one(None))
        _degs, val = _chain_series(Poly(cs), None)
        if isinstance(val, UndeterminedAtOrder):
            return val
        return WitnessReport(StratumSignature(("nonzero",)), val)
    P = _zpoly(list(curve.components), None)
    degs, val = _chain_series(P, None)
    if isinstance(val, UndeterminedAtOrder):
        return val
    return WitnessReport(StratumSignature(_partition_from_degrees(degs)), val)
