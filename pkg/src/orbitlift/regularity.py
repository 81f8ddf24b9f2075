"""Differentiability of lifted curves.

A curve is 1-flat at a contact point when, after splitting the fiber into
root clusters and removing each cluster's mean, the k-th symmetric component
vanishes to order at least k.  That valuation test decides whether a global
differentiable lift exists; when it passes, the lift is built by gluing with
junction permutations constrained to match one-sided derivative lists.
"""

from .rationals import QQ
from .gaussian import GaussianRational
from .series import INF, UndeterminedAtOrder
from .reps import MonicCurve, Symmetric
from .algext import conv_scalar, field_zero
from .realroots import RealAlgebraic
from .engine import (
    NonflatUndetermined,
    NotSplittable,
    slice_split,
    _comps_of_zpoly,
    _rebase,
    _zpoly,
)
from .globallift import (
    DerivativeMismatch,
    exceptional_points,
    glue_global,
    float_of,
    _point_text,
)


class NotOneFlat(Exception):
    """The curve fails the 1-flatness test; carries the full report."""

    def __init__(self, report):
        super().__init__("curve is not 1-flat; no differentiable lift exists")
        self.report = report


class ClusterVerdict:
    """Valuation check of one recentered root cluster.

    degrees holds the required orders d'_k = 1..size; valuations the
    observed component valuations (INF for identically zero).  A singleton
    cluster is a principal contact and passes with empty lists.
    """

    __slots__ = ("center", "size", "degrees", "valuations", "ok", "failing_index")

    def __init__(self, center, size, degrees, valuations, ok, failing_index=None):
        self.center = center
        self.size = size
        self.degrees = tuple(degrees)
        self.valuations = tuple(valuations)
        self.ok = ok
        self.failing_index = failing_index

    def __repr__(self):
        word = "pass" if self.ok else f"fail at k={self.failing_index}"
        return f"ClusterVerdict(size={self.size}, {word})"


class ContactPoint:
    __slots__ = ("t", "clusters", "ok")

    def __init__(self, t, clusters):
        self.t = t
        self.clusters = tuple(clusters)
        self.ok = all(c.ok for c in self.clusters)

    def __repr__(self):
        return f"ContactPoint(t={float_of(self.t)}, {'pass' if self.ok else 'fail'})"


class FlatnessReport:
    """1-flatness verdicts at every contact point of an interval.

    slice_degree is the maximum cluster degree encountered; it bounds the
    smoothness the input would need if it were merely finitely
    differentiable, which exact polynomial data satisfies automatically.
    """

    __slots__ = ("contact_points", "overall", "slice_degree")

    def __init__(self, contact_points, slice_degree):
        self.contact_points = tuple(contact_points)
        self.overall = all(p.ok for p in self.contact_points)
        self.slice_degree = slice_degree

    def __repr__(self):
        return (f"FlatnessReport({len(self.contact_points)} contact points, "
                f"{'pass' if self.overall else 'fail'})")


def _required_valuation(series, k):
    """Decide valuation(series) >= k, honestly under truncation.

    Returns (ok, display valuation).  Raises NonflatUndetermined when the
    known window cannot separate the two outcomes.
    """
    v = series.valuation()
    if isinstance(v, UndeterminedAtOrder):
        # all known coefficients vanish: the true valuation exceeds the order
        if v.order + 1 >= k:
            return True, v
        raise NonflatUndetermined(
            f"valuation undetermined at order {v.order}, need >= {k}", v.order)
    if v == INF:
        return True, v
    return int(v) >= k, int(v)


def _cluster_verdict(center, comps, size):
    degrees = []
    valuations = []
    ok = True
    failing = None
    for k in range(1, size + 1):
        passed, shown = _required_valuation(comps[k - 1], k)
        degrees.append(k)
        valuations.append(shown)
        if not passed and ok:
            ok = False
            failing = k
    return ClusterVerdict(center, size, degrees, valuations, ok, failing)


def _whole_fiber_cluster(curve, t0, T):
    """Single-cluster fallback when the fiber polynomial has one root class:
    recenter at the mean root path and test the whole curve."""
    _pt, field, comps = _rebase(curve, t0)
    n = len(comps)
    inv_n = conv_scalar(field, GaussianRational.coerce(QQ(1, n)))
    center = (-comps[0]).scale(inv_n)
    rec = _zpoly(comps, field).taylor_shift(center)
    sub = list(_comps_of_zpoly(rec, field))
    return ClusterVerdict._from_components(center.coef(0), sub) if False else \
        _cluster_verdict(center.coef(0), sub, n)


def _sym_clusters(curve, t0, T):
    try:
        clusters = slice_split(curve, t0, T)
    except NotSplittable:
        return [_whole_fiber_cluster(curve, t0, T)]
    out = []
    for cl in clusters:
        if cl.size == 1:
            out.append(ClusterVerdict(cl.center.coef(0), 1, (), (), True))
            continue
        out.append(_cluster_verdict(cl.center.coef(0),
                                    list(cl.curve.components), cl.size))
    return out


def _cyc_cluster(curve, t0):
    """For z^m = a(t): the lift a^(1/m) is differentiable iff the orbit
    component vanishes to order >= m (or not at all)."""
    m = curve.rep.n
    _pt, _field, comps = _rebase(curve, t0)
    a = comps[0]
    if a.coef(0):
        return ClusterVerdict(a.coef(0), 1, (), (), True)
    passed, shown = _required_valuation(a, m)
    return ClusterVerdict(a.coef(0), m, (m,), (shown,), passed,
                          None if passed else m)


def one_flat_test(curve, t0=0, T=16):
    """1-flatness verdict of a curve at one contact point."""
    rep = curve.rep
    if rep.kind == "prod":
        clusters = []
        for factor, a, b in rep.component_slices():
            sub = MonicCurve(factor, curve.components[a:b])
            clusters.extend(one_flat_test(sub, t0, T).clusters)
        return ContactPoint(t0, clusters)
    if rep.kind == "cyc":
        return ContactPoint(t0, [_cyc_cluster(curve, t0)])
    return ContactPoint(t0, _sym_clusters(curve, t0, T))


def flatness_report(curve, lo, hi, T=16):
    """Run the 1-flatness test at every exceptional point of [lo, hi]."""
    exc = exceptional_points(curve, lo, hi)
    entries = [one_flat_test(curve, tau, T) for tau in exc.points]
    degree = max((c.size for e in entries for c in e.clusters), default=1)
    return FlatnessReport(entries, degree)


def differentiable_lift(curve, lo, hi, T=16):
    """Global differentiable lift over [lo, hi], or NotOneFlat with report.

    On pass the glued lift is differentiable: every ramified piece's body
    starts at s^N (so the branch has a linear expansion at the contact
    point), and junction permutations match one-sided derivative lists.
    """
    report = flatness_report(curve, lo, hi, T)
    if not report.overall:
        raise NotOneFlat(report)
    lift = glue_global(curve, lo, hi, T, match_derivatives=True)
    for piece in lift.pieces:
        if piece.N == 1:
            continue
        for ch in piece.channels:
            if ch.body.known_order() < piece.N:
                raise DerivativeMismatch(
                    "certified window shorter than the ramification order")
            for k in range(1, piece.N):
                if ch.body.coef(k):
                    raise DerivativeMismatch(
                        "branch carries a sub-linear term despite a passing "
                        "flatness test")
    return lift


def format_flatness_report(report):
    """Text table: point, cluster, k, valuation, required, verdict."""
    lines = ["flatness: " + ("pass" if report.overall else "fail")]
    lines.append(f"max cluster degree: {report.slice_degree}")
    for cp in report.contact_points:
        lines.append(f"contact t={_point_text(cp.t)}: "
                     + ("pass" if cp.ok else "fail"))
        for i, cl in enumerate(cp.clusters):
            if not cl.degrees:
                lines.append(f"  cluster {i} size 1: principal, pass")
                continue
            for k, v in zip(cl.degrees, cl.valuations):
                shown = "inf" if v == INF else str(v)
                word = "ok" if (v == INF or (not isinstance(v, UndeterminedAtOrder) and v >= k)
                                or isinstance(v, UndeterminedAtOrder)) else "FAIL"
                lines.append(
                    f"  cluster {i} size {cl.size} k={k}: valuation {shown}"
                    f" required {k}: {word}")
    return "\n".join(lines) + "\n"
