"""Global lifting of exact polynomial quotient curves over an interval.

The exceptional set (parameters where the stratum signature degenerates) is
located exactly as real algebraic numbers.  Around each exceptional point the
local Puiseux branches supply the lift; the regular gaps between them are
covered by ordinary one-sided series pieces recentered along a rational grid.
Pieces are glued by matching root lists at the junctions, exactly when both
sides evaluate to rational scalars and by certified interval overlap at width
1e-30 otherwise.

Pieces whose sigma-identity certificate is exact are valid wherever the curve
is, so they are extended maximally instead of being re-expanded step by step.
"""

import math

from scipy.integrate import quad

from .rationals import QQ
from .gaussian import GaussianRational
from .poly import Poly, squarefree_part
from .intervals import BoxC, RatInterval, isolate_complex_roots
from .realroots import RealAlgebraic, real_zeros_of_gaussian_poly
from .algext import AlgebraicScalar
from .engine import local_lift, witness_polynomial
from .series import format_series


class NoMatchingPermutation(Exception):
    """No channel pairing matches across a junction.

    A continuous global lift always admits one, so this signals an internal
    certificate failure; callers must not catch it to degrade gracefully.
    """


class DerivativeMismatch(Exception):
    """No value-matching junction permutation also matches the one-sided
    derivative lists.

    The differentiability theorem rules this out once the flatness test
    passes, so on passing inputs this is an internal certificate failure.
    """


JUNCTION_WIDTH = QQ(1, 10 ** 30)


# -- exceptional set ------------------------------------------------------------


class ExceptionalSet:
    """Sorted real algebraic parameters where the stratum signature drops.

    Each point is exposed as (defining polynomial, isolating rational
    interval); rational points get their linear polynomial and a degenerate
    interval.  Isolating intervals are refined until pairwise disjoint.
    """

    __slots__ = ("points", "signature", "witness")

    def __init__(self, points, signature=None, witness=None):
        self.points = list(points)
        self.signature = signature
        self.witness = witness
        self._disjointify()

    def _disjointify(self):
        for _ in range(200):
            bounds = [point_bounds(p) for p in self.points]
            ok = True
            for (al, ah), (bl, bh) in zip(bounds, bounds[1:]):
                if not ah < bl:
                    ok = False
            if ok:
                return
            for p in self.points:
                if isinstance(p, RealAlgebraic):
                    p.refine(p.interval.width() / 2 ** 8)
        raise ArithmeticError("could not separate exceptional points")

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def pairs(self):
        out = []
        for p in self.points:
            if isinstance(p, RealAlgebraic):
                out.append((p.minpoly, p.interval))
            else:
                q = QQ(p)
                lin = Poly([GaussianRational.coerce(-q), GaussianRational.coerce(QQ(1))])
                out.append((lin, RatInterval.of(q)))
        return out

    def __repr__(self):
        return f"ExceptionalSet({len(self.points)} points)"


def point_bounds(p):
    """Rational lower/upper bounds enclosing a real algebraic point."""
    if isinstance(p, RealAlgebraic):
        return p.interval.lo, p.interval.hi
    q = QQ(p)
    return q, q


def exceptional_points(curve, lo, hi):
    """All parameters in [lo, hi] where the stratum signature degenerates.

    Exact: the points are the real zeros of the stratum witness polynomial,
    isolated as algebraic numbers.
    """
    lo = QQ(lo)
    hi = QQ(hi)
    if not curve.is_exact():
        raise ValueError("exceptional points need an exact polynomial curve")
    sig, wit = witness_polynomial(curve)
    zeros = real_zeros_of_gaussian_poly(wit, lo, hi)
    if zeros is None:
        raise ArithmeticError("stratum witness vanished identically")
    return ExceptionalSet(zeros, signature=sig, witness=wit)


# -- global lift containers ------------------------------------------------------


class GlobalPiece:
    """One tile of a global lift: an ordered channel list valid on [lo, hi].

    channels are PuiseuxSeries already permuted into the global order;
    permutation records how they map back to the local lift's own order.
    """

    __slots__ = ("lo", "hi", "base_point", "N", "sign", "two_sided",
                 "channels", "permutation", "exact")

    def __init__(self, lo, hi, base_point, N, sign, two_sided, channels,
                 permutation, exact):
        self.lo = lo
        self.hi = hi
        self.base_point = base_point
        self.N = N
        self.sign = sign
        self.two_sided = two_sided
        self.channels = tuple(channels)
        self.permutation = tuple(permutation)
        self.exact = exact

    def covers(self, t):
        lo_ok = float(t) >= float_of(self.lo) - 1e-18
        hi_ok = float(t) <= float_of(self.hi) + 1e-18
        return lo_ok and hi_ok

    def __repr__(self):
        side = "±" if self.two_sided else ("+" if self.sign > 0 else "-")
        return (f"GlobalPiece([{float_of(self.lo):.6g}, {float_of(self.hi):.6g}],"
                f" N={self.N}, {side})")


class Junction:
    """A matched piece boundary; width None means the match was exact."""

    __slots__ = ("t", "width", "values")

    def __init__(self, t, width, values):
        self.t = t
        self.width = width
        self.values = tuple(values)

    def __repr__(self):
        how = "exact" if self.width is None else f"width<={float(self.width):.3g}"
        return f"Junction(t={float_of(self.t):.6g}, {how})"


class GlobalLift:
    __slots__ = ("curve", "lo", "hi", "pieces", "junctions", "exceptional")

    def __init__(self, curve, lo, hi, pieces, junctions, exceptional):
        self.curve = curve
        self.lo = lo
        self.hi = hi
        self.pieces = tuple(pieces)
        self.junctions = tuple(junctions)
        self.exceptional = exceptional

    def piece_at(self, t):
        for p in self.pieces:
            if p.covers(t):
                return p
        raise ValueError(f"t = {t} outside the lifted interval")

    def channel_count(self):
        return len(self.pieces[0].channels)

    def float_channels(self):
        """Per-piece channel evaluators t -> complex."""
        return [(p, [ch.float_root_of_t() for ch in p.channels])
                for p in self.pieces]

    def __repr__(self):
        return (f"GlobalLift([{float_of(self.lo)}, {float_of(self.hi)}], "
                f"{len(self.pieces)} pieces, {len(self.junctions)} junctions)")


def float_of(t):
    if isinstance(t, RealAlgebraic):
        return float(t)
    return float(QQ(t))


# -- junction matching ------------------------------------------------------------


def _eval_channel(ch, x):
    """Value at rational x: exact scalar when possible, else a tight box."""
    v = ch.eval(x, JUNCTION_WIDTH)
    return v


def _as_box(v):
    if isinstance(v, BoxC):
        return v
    return BoxC.of(v)


def _inflate(box, pad):
    return BoxC(RatInterval(box.re.lo - pad, box.re.hi + pad),
                RatInterval(box.im.lo - pad, box.im.hi + pad))


def _pair_matches(v, w):
    """Same value up to the junction tolerance; exact scalars must be equal.

    Interval evaluations can come back far tighter than the junction width,
    so both boxes are padded to it: matching means the values agree within
    2 * JUNCTION_WIDTH, not that the raw certified boxes overlap.  Tuples
    (value, derivative) match componentwise.
    """
    if isinstance(v, tuple):
        return all(_pair_matches(a, b) for a, b in zip(v, w))
    if not isinstance(v, BoxC) and not isinstance(w, BoxC):
        return v == w
    a = _inflate(_as_box(v), JUNCTION_WIDTH)
    b = _inflate(_as_box(w), JUNCTION_WIDTH)
    return not a.disjoint(b)


def _match_permutation(cur_vals, new_vals):
    """Permutation sending the new list onto the current ordered list.

    Backtracking search: greedy first-match can dead-end when several values
    coincide within tolerance but carry distinct secondary data.
    """
    n = len(cur_vals)
    used = [False] * n
    perm = [0] * n

    def place(i):
        if i == n:
            return True
        for j in range(n):
            if not used[j] and _pair_matches(cur_vals[i], new_vals[j]):
                used[j] = True
                perm[i] = j
                if place(i + 1):
                    return True
                used[j] = False
        return False

    return tuple(perm) if place(0) else None


def _strip(v):
    return v[0] if isinstance(v, tuple) else v


def _all_exact(vals):
    for v in vals:
        parts = v if isinstance(v, tuple) else (v,)
        if any(isinstance(p, BoxC) for p in parts):
            return False
    return True


def _junction_width(vals):
    width = None
    for v in vals:
        v = _strip(v)
        if isinstance(v, BoxC):
            w = max(v.width(), 2 * JUNCTION_WIDTH)
            width = w if width is None else max(width, w)
    return width


def _mid_complex(v):
    v = _strip(v)
    if isinstance(v, BoxC):
        return complex(float(v.re.mid()), float(v.im.mid()))
    return complex(v)


def _start_value(ch):
    """Channel value at s = 0 (the base point of its local lift)."""
    c = ch.body.coef(0)
    if isinstance(c, AlgebraicScalar):
        return ch.embedding.eval_box(c, JUNCTION_WIDTH)
    return c


def _start_deriv(ch):
    """One-sided derivative at the channel's own base point: sign * coef(N),
    defined only when the terms below s^N vanish."""
    n = ch.ramification
    if ch.body.known_order() < n:
        raise DerivativeMismatch(
            "channel body truncated below its ramification order")
    for k in range(1, n):
        if ch.body.coef(k):
            raise DerivativeMismatch(
                "one-sided derivative undefined at the contact point")
    c = ch.body.coef(n)
    c = c if ch.sign > 0 else -c
    if isinstance(c, AlgebraicScalar):
        return ch.embedding.eval_box(c, JUNCTION_WIDTH)
    return c


# -- gluing -------------------------------------------------------------------------


def dyadic_between(lo, hi):
    """Dyadic rational with the fewest bits inside [lo, hi], lo < hi.

    Chain endpoints are snapped to such values so that step arithmetic never
    compounds the bit length of isolating-interval bounds.
    """
    if not lo < hi:
        raise ValueError("need a nonempty open interval")
    k = 0
    while k <= 4096:
        scale = 2 ** k
        n = math.ceil(lo * scale)
        if n <= math.floor(hi * scale):
            return QQ(n, scale)
        k += 1
    raise ArithmeticError("interval too narrow for a dyadic pick")


def _dist_to_singular(x, taus, boxes):
    """Rational lower bound for the distance from real x to every parameter
    where the fiber structure degenerates (real or complex)."""
    best = None
    for tau in taus:
        lo_b, hi_b = point_bounds(tau)
        d = max(QQ(0), lo_b - x, x - hi_b)
        best = d if best is None else min(best, d)
    for box in boxes:
        dx = max(QQ(0), box.re.lo - x, x - box.re.hi)
        dy = max(QQ(0), box.im.lo, -box.im.hi)
        d = max(dx, dy)
        best = d if best is None else min(best, d)
    return best


class _Gluer:
    def __init__(self, curve, lo, hi, T, exceptional, singular_boxes,
                 match_derivatives=False):
        self.curve = curve
        self.lo = lo
        self.hi = hi
        self.T = max(T, 64)
        self.exc = exceptional
        self.boxes = singular_boxes
        self.match_derivatives = match_derivatives
        self.pieces = []
        self.junctions = []
        self.cursor = lo

    def _channel_data(self, ch, x):
        v = _eval_channel(ch, x)
        if not self.match_derivatives:
            return v
        return (v, ch.eval_derivative(x, JUNCTION_WIDTH))

    def _start_data(self, ch):
        v = _start_value(ch)
        if not self.match_derivatives:
            return v
        return (v, _start_deriv(ch))

    # -- piece emission ---------------------------------------------------

    def _emit(self, piece, junction_t, new_vals, exact_match):
        if self.pieces:
            width = None if exact_match else _junction_width(new_vals)
            self.junctions.append(
                Junction(junction_t, width, [_mid_complex(v) for v in new_vals]))
        self.pieces.append(piece)
        self.cursor = piece.hi

    def _ordered_values_at(self, x):
        prev = self.pieces[-1]
        return [self._channel_data(ch, x) for ch in prev.channels]

    def _glue_channels(self, natural, x):
        """Match a new natural channel list to the running order at x."""
        if not self.pieces:
            return tuple(range(len(natural))), [], True
        cur = self._ordered_values_at(x)
        new = [self._channel_data(ch, x) for ch in natural]
        perm = _match_permutation(cur, new)
        if perm is None:
            return None, None, False
        vals = [new[j] for j in perm]
        return perm, vals, _all_exact(cur + vals)

    # -- regular gaps -------------------------------------------------------

    def cover_gap(self, v):
        """Tile [cursor, v] with ordinary series pieces on a rational grid.

        The step never exceeds a quarter of the certified distance to the
        nearest degeneration parameter, which keeps every evaluation point of
        a truncated piece at ratio <= 1/7 of its convergence radius; junction
        checks then pin the accuracy down.
        """
        while self.cursor < v:
            u = self.cursor
            d = _dist_to_singular(u, self.exc.points, self.boxes)
            if d is None:
                r = v - u
            elif d == 0:
                r = (v - u) / 16
            else:
                r = min(v - u, d / 4)
            placed = False
            for _attempt in range(14):
                if u + r >= v:
                    nxt = v
                else:
                    nxt = dyadic_between(u + r / 2, u + r)
                m = (u + nxt) / 2
                lift = local_lift(self.curve, m, self.T)
                if lift.N != 1:
                    raise AssertionError(
                        "regular gap point produced a ramified lift")
                natural = lift.channels(1)
                perm, vals, exact_match = self._glue_channels(natural, u)
                if perm is None:
                    r = r / 2
                    continue
                hi_end = v if lift.certificate_order is None else nxt
                piece = GlobalPiece(u, hi_end, m, 1, 1, True,
                                    [natural[j] for j in perm], perm,
                                    lift.certificate_order is None)
                self._emit(piece, u, vals, exact_match)
                placed = True
                break
            if not placed:
                raise NoMatchingPermutation(
                    f"no channel matching at t = {u} after refinement")

    # -- exceptional points ---------------------------------------------------

    def cover_exceptional(self, idx, next_bound):
        tau = self.exc.points[idx]
        lift = local_lift(self.curve, tau, self.T)
        lo_b, hi_b = point_bounds(tau)
        room_left = lo_b - self.cursor
        room_right = next_bound - hi_b
        if room_left < 0 or room_right < 0:
            raise AssertionError("exceptional bracket overlaps its neighbors")
        exact = lift.certificate_order is None
        dl = min(room_left, QQ(1)) / 8
        dr = min(room_right, QQ(1)) / 8
        for _attempt in range(14):
            if exact:
                a, b = self.cursor, next_bound
            else:
                a = lo_b if dl == 0 else dyadic_between(lo_b - dl, lo_b - dl / 2)
                b = next_bound if dr == 0 else dyadic_between(hi_b + dr / 2, hi_b + dr)
            if a > self.cursor:
                self.cover_gap(a)
            ok = self._place_branches(lift, tau, a, b)
            if ok:
                return
            if exact:
                break
            dl = dl / 2
            dr = dr / 2
        raise NoMatchingPermutation(
            f"no channel matching around the exceptional point near {float_of(tau)}")

    def _place_branches(self, lift, tau, a, b):
        exact = lift.certificate_order is None
        if lift.N % 2 == 1:
            chans = lift.channels(1)
            perm, vals, exact_match = self._glue_channels(chans, a)
            if perm is None:
                return False
            piece = GlobalPiece(a, b, tau, lift.N, 1, True,
                                [chans[j] for j in perm], perm, exact)
            self._emit(piece, a, vals, exact_match)
            return True
        minus = lift.channels(-1)
        plus = lift.channels(1)
        # a == tau happens only for a rational point at the interval edge
        zero_left = not isinstance(tau, RealAlgebraic) and a == QQ(tau)
        zero_right = not isinstance(tau, RealAlgebraic) and b == QQ(tau)
        if not zero_left:
            perm_m, vals_m, exact_m = self._glue_channels(minus, a)
            if perm_m is None:
                return False
            left = GlobalPiece(a, tau, tau, lift.N, -1, False,
                               [minus[j] for j in perm_m], perm_m, exact)
            # the + side pairs with the - side through the shared fiber at s = 0
            cur0 = [self._start_data(ch) for ch in left.channels]
            new0 = [self._start_data(ch) for ch in plus]
            perm_p = _match_permutation(cur0, new0)
            if perm_p is None:
                # at s = 0 the data are plain coefficients with no truncation
                # tail, so a value-matchable but derivative-unmatchable fiber
                # is a genuine mismatch, not a precision shortfall
                if self.match_derivatives and _match_permutation(
                        [_strip(v) for v in cur0], [_strip(v) for v in new0]):
                    raise DerivativeMismatch(
                        f"derivative lists do not match at {float_of(tau)}")
                return False
            self._emit(left, a, vals_m, exact_m)
            if zero_right:
                return True
            vals0 = [new0[j] for j in perm_p]
            right = GlobalPiece(tau, b, tau, lift.N, 1, False,
                                [plus[j] for j in perm_p], perm_p, exact)
            self._emit(right, tau, vals0, _all_exact(cur0 + vals0))
            return True
        perm_p, vals_p, exact_p = self._glue_channels(plus, QQ(tau))
        if perm_p is None:
            return False
        right = GlobalPiece(tau, b, tau, lift.N, 1, False,
                            [plus[j] for j in perm_p], perm_p, exact)
        self._emit(right, tau, vals_p, exact_p)
        return True

    # -- driver ----------------------------------------------------------------

    def run(self):
        taus = self.exc.points
        for idx in range(len(taus)):
            if idx + 1 < len(taus):
                nxt_lo, _ = point_bounds(taus[idx + 1])
            else:
                nxt_lo = self.hi
            self.cover_exceptional(idx, nxt_lo)
        if self.cursor < self.hi:
            self.cover_gap(self.hi)
        if not self.pieces:
            raise AssertionError("empty interval produced no pieces")
        return GlobalLift(self.curve, self.lo, self.hi, self.pieces,
                          self.junctions, self.exc)


def glue_global(curve, lo, hi, T=16, match_derivatives=False):
    """Continuous global lift of an exact curve over [lo, hi].

    Gaps between exceptional points get unramified series pieces; each
    exceptional point contributes its Puiseux branches (one two-sided piece
    for odd ramification, a -/+ pair for even).  Junction permutations make
    the ordered channel lists agree across every boundary; with
    match_derivatives they must also match the one-sided derivative lists,
    which is the gluing used for differentiable lifts.
    """
    lo = QQ(lo)
    hi = QQ(hi)
    if not hi > lo:
        raise ValueError("interval must have positive length")
    if not curve.is_exact():
        raise ValueError("global lifting needs an exact polynomial curve")
    exc = exceptional_points(curve, lo, hi)
    sf = squarefree_part(exc.witness)
    boxes = isolate_complex_roots(sf) if sf.degree >= 1 else []
    return _Gluer(curve, lo, hi, T, exc, boxes,
                  match_derivatives=match_derivatives).run()


# -- regularity probes ----------------------------------------------------------


class ACCertificate:
    """Structural absolute-continuity certificate plus a numeric TV estimate.

    Each piece is an analytic body composed with the N-th root substitution,
    which is absolutely continuous, and finitely many AC pieces glue to an AC
    function; piece_tv holds per-piece, per-channel total variation over the
    sample grid.
    """

    __slots__ = ("pieces", "piece_tv", "grid_size")

    def __init__(self, pieces, piece_tv, grid_size):
        self.pieces = tuple(pieces)
        self.piece_tv = tuple(tuple(row) for row in piece_tv)
        self.grid_size = grid_size

    def total_variation(self):
        """Per-channel TV summed across pieces."""
        n = len(self.piece_tv[0]) if self.piece_tv else 0
        return tuple(sum(row[k] for row in self.piece_tv) for k in range(n))

    def __repr__(self):
        return f"ACCertificate({len(self.pieces)} pieces)"


def ac_certificate(glift, grid_size=10 ** 4):
    """Absolute-continuity certificate for a global lift."""
    summary = []
    piece_tv = []
    for piece, evals in glift.float_channels():
        lo_f = float_of(piece.lo)
        hi_f = float_of(piece.hi)
        summary.append((piece.N, lo_f, hi_f))
        if hi_f == lo_f:
            piece_tv.append([0.0] * len(evals))
            continue
        step = (hi_f - lo_f) / grid_size
        tvs = []
        for f in evals:
            prev = f(lo_f)
            tv = 0.0
            for i in range(1, grid_size + 1):
                cur = f(lo_f + i * step)
                tv += abs(cur - prev)
                prev = cur
            tvs.append(tv)
        piece_tv.append(tvs)
    return ACCertificate(summary, piece_tv, grid_size)


def lp_probe(glift, p, eps_grid):
    """I(eps) = integral of |r'(t)|^p over {eps <= |t| <= 1} for the first channel.

    Adaptive quadrature with relative tolerance 1e-9 per segment; divergence
    as eps -> 0 is the caller's judgment from the returned trend.
    """
    p = float(p)
    out = []
    segments = []
    for piece in glift.pieces:
        lo_f = float_of(piece.lo)
        hi_f = float_of(piece.hi)
        if hi_f > lo_f:
            df = piece.channels[0].float_derivative_of_t()
            segments.append((lo_f, hi_f, df))
    for eps in eps_grid:
        e = float(eps)
        total = 0.0
        for lo_f, hi_f, df in segments:
            for a, b in ((max(lo_f, e), min(hi_f, 1.0)),
                         (max(lo_f, -1.0), min(hi_f, -e))):
                if b <= a:
                    continue
                val, _err = quad(lambda t: abs(df(t)) ** p, a, b,
                                 epsrel=1e-9, limit=400)
                total += val
        out.append(total)
    return out


class LipschitzReport:
    __slots__ = ("sup", "grid")

    def __init__(self, sup, grid):
        self.sup = sup
        self.grid = tuple(grid)

    def __repr__(self):
        return f"LipschitzReport(sup={self.sup:.6g}, {len(self.grid)} samples)"


def lipschitz_probe(glift, grid):
    """Grid supremum of |channel difference quotients|, all channels."""
    grid = sorted(float(g) for g in grid)
    evals = glift.float_channels()

    def vals(t):
        for piece, fs in evals:
            if piece.covers(t):
                return [f(t) for f in fs]
        raise ValueError(f"grid point {t} outside the lift")

    sup = 0.0
    prev_t = None
    prev_v = None
    for t in grid:
        cur = vals(t)
        if prev_t is not None and t > prev_t:
            for a, b in zip(prev_v, cur):
                sup = max(sup, abs(b - a) / (t - prev_t))
        prev_t, prev_v = t, cur
    return LipschitzReport(sup, grid)


# -- serialization ----------------------------------------------------------------


def perm_cycles(perm):
    """One-line cycle notation; identity prints as ()."""
    seen = [False] * len(perm)
    parts = []
    for i in range(len(perm)):
        if seen[i] or perm[i] == i:
            seen[i] = True
            continue
        cyc = [i]
        seen[i] = True
        j = perm[i]
        while j != i:
            cyc.append(j)
            seen[j] = True
            j = perm[j]
        parts.append("(" + " ".join(str(k) for k in cyc) + ")")
    return "".join(parts) if parts else "()"


def _point_text(t):
    if isinstance(t, RealAlgebraic):
        iv = t.interval
        return f"algebraic[{iv.lo},{iv.hi}]"
    return str(QQ(t))


def format_global_lift(glift):
    lines = ["orbit-lift/1 global"]
    lines.append(f"interval: {QQ(glift.lo)} {QQ(glift.hi)}")
    lines.append(f"pieces: {len(glift.pieces)}")
    for k, piece in enumerate(glift.pieces):
        side = "+-" if piece.two_sided else ("+" if piece.sign > 0 else "-")
        lines.append(
            f"piece {k}: [{_point_text(piece.lo)}, {_point_text(piece.hi)}] "
            f"N={piece.N} sign={side} perm={perm_cycles(piece.permutation)}")
        for ch in piece.channels:
            lines.append("  root: " + format_series(ch.body, "s"))
    lines.append(f"junctions: {len(glift.junctions)}")
    for j in glift.junctions:
        how = "exact" if j.width is None else f"width<={float(j.width):.3e}"
        lines.append(f"  t={_point_text(j.t)} {how}")
    return "\n".join(lines) + "\n"
