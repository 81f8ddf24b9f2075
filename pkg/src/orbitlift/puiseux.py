"""Ramified series branches: t = t0 + sign * s^N with s >= 0.

A branch whose ramification N is odd may be marked two-sided, in which case
negative s is meaningful (t - t0 = sign * s^N is a bijection of the reals)
and a single branch covers both sides of the base point.
"""

from .rationals import QQ
from .gaussian import GaussianRational, QI_ZERO
from .intervals import (
    BoxC,
    RatInterval,
    WIDTH_DEFAULT,
    exact_nth_root,
    nth_root_interval,
)
from .algext import AlgebraicScalar
from .realroots import RealAlgebraic


class WrongSide(Exception):
    """Evaluation requested on the side of the base point not covered."""


class PuiseuxSeries:
    __slots__ = ("base", "ramification", "sign", "body", "embedding", "two_sided")

    def __init__(self, base, ramification, sign, body, embedding=None, two_sided=False):
        # plain ints keep the float evaluators free of wrapped integer types
        ramification = int(ramification)
        sign = int(sign)
        if ramification < 1:
            raise ValueError("ramification must be >= 1")
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if two_sided and ramification % 2 == 0:
            raise ValueError("two-sided branches need odd ramification")
        self.base = base
        self.ramification = ramification
        self.sign = sign
        self.body = body
        self.embedding = embedding
        self.two_sided = two_sided

    def with_body(self, body):
        return PuiseuxSeries(
            self.base, self.ramification, self.sign, body, self.embedding, self.two_sided
        )

    def base_interval(self):
        if isinstance(self.base, RealAlgebraic):
            return self.base.interval
        return RatInterval.of(QQ(self.base))

    def _delta_exact(self, t):
        """t - base as a rational, or None when the base is algebraic."""
        if isinstance(self.base, RealAlgebraic):
            return None
        return QQ(t) - QQ(self.base)

    def _side_of(self, t):
        """Sign of t - base: -1, 0, +1."""
        d = self._delta_exact(t)
        if d is not None:
            return (d > 0) - (d < 0)
        return -self.base.sign_vs(QQ(t))

    def eval_at_s(self, s):
        """Body value at an exact parameter value s (scalar in the body's field)."""
        return self.body.eval(s)

    def eval(self, t, width=WIDTH_DEFAULT):
        """Branch value at parameter t (rational).

        Exact scalar when every ingredient is rational and |t - base| is a
        perfect N-th power; otherwise a certified box of width <= width.
        """
        t = QQ(t)
        side = self._side_of(t)
        if side != 0 and side != self.sign and not (self.two_sided and side == -self.sign):
            raise WrongSide(
                f"t = {t} lies on the {'-' if side < 0 else '+'} side, branch covers {'+' if self.sign > 0 else '-'}"
            )
        negate_s = self.two_sided and side == -self.sign
        delta = self._delta_exact(t)
        if delta is not None:
            mag = delta if delta >= 0 else -delta
            s_exact = exact_nth_root(mag, self.ramification)
            if s_exact is not None and self.embedding is None and self._body_rational():
                s_val = -s_exact if negate_s else s_exact
                return self.body.eval(GaussianRational(s_val))
        return self._eval_interval(t, width, negate_s)

    def _body_rational(self):
        return all(not isinstance(c, AlgebraicScalar) for c in self.body.coeffs)

    def _eval_interval(self, t, width, negate_s):
        prec_width = width / 4
        for _ in range(80):
            s_iv = self._s_interval(t, prec_width)
            if negate_s:
                s_iv = -s_iv
            box = self._body_box(BoxC(s_iv, RatInterval.of(QQ(0))), prec_width)
            if box.width() <= width:
                return box
            prec_width = prec_width / 64
        raise ArithmeticError("interval evaluation failed to reach target width")

    def _s_interval(self, t, width):
        delta = self._delta_exact(t)
        if delta is not None:
            mag = delta if delta >= 0 else -delta
            return nth_root_interval(mag, self.ramification, width)
        base = self.base
        if base.interval.width() > width:
            base.refine(width)
        d_lo = QQ(t) - base.interval.hi
        d_hi = QQ(t) - base.interval.lo
        if d_lo >= 0:
            m_lo, m_hi = d_lo, d_hi
        elif d_hi <= 0:
            m_lo, m_hi = -d_hi, -d_lo
        else:
            m_lo, m_hi = QQ(0), max(-d_lo, d_hi)
        lo_rt = (
            nth_root_interval(m_lo, self.ramification, width).lo if m_lo > 0 else QQ(0)
        )
        hi_rt = (
            nth_root_interval(m_hi, self.ramification, width).hi if m_hi > 0 else QQ(0)
        )
        return RatInterval(lo_rt, hi_rt)

    def _body_box(self, s_box, width):
        out = BoxC.of(QQ(0))
        for c in reversed(self.body.coeffs):
            cb = self._coef_box(c, width)
            out = out * s_box + cb
        return out

    def _coef_box(self, c, width):
        if isinstance(c, AlgebraicScalar):
            if self.embedding is None:
                raise ValueError("algebraic coefficients need an embedding")
            return self.embedding.eval_box(c, width)
        return BoxC.of(c)

    def derivative_body(self):
        """d(body)/ds as a TruncatedSeries."""
        return self.body.derivative()

    def eval_derivative(self, t, width=WIDTH_DEFAULT):
        """Certified d(root)/dt at rational t; chain rule through s = |t-t0|^(1/N).

        At the base point itself the one-sided derivative exists only when the
        body has no terms between s^1 and s^(N-1); it is then the coefficient
        of s^N times the branch sign.  Exact scalar on the fully rational
        path, else a box of width <= width.
        """
        t = QQ(t)
        side = self._side_of(t)
        if side != 0 and side != self.sign and not (self.two_sided and side == -self.sign):
            raise WrongSide(f"t = {t} off-branch")
        n = self.ramification
        if side == 0:
            if self.body.known_order() < n:
                raise ArithmeticError(
                    "body truncated below the ramification order")
            for k in range(1, n):
                if self.body.coef(k):
                    raise ArithmeticError(
                        "one-sided derivative undefined: low-order term survives")
            c = self.body.coef(n)
            c = c if self.sign > 0 else -c
            if isinstance(c, AlgebraicScalar):
                return self.embedding.eval_box(c, width)
            return c
        negate_s = self.two_sided and side == -self.sign
        dbody = self.body.derivative()
        delta = self._delta_exact(t)
        if delta is not None:
            mag = delta if delta >= 0 else -delta
            s_exact = exact_nth_root(mag, n)
            if s_exact is not None and self.embedding is None and self._body_rational():
                s_val = -s_exact if negate_s else s_exact
                num = dbody.eval(GaussianRational(s_val))
                scale = QQ(1) / (self.sign * n * s_val ** (n - 1))
                return num * GaussianRational.coerce(scale)
        prec_width = width / 4
        for _ in range(80):
            s_iv = self._s_interval(t, prec_width)
            if s_iv.lo <= 0:
                # the root power is not invertible yet; refine the base
                prec_width = prec_width / 64
                continue
            if negate_s:
                s_iv = -s_iv
            s_box = BoxC(s_iv, RatInterval.of(QQ(0)))
            num = self.with_body(dbody)._body_box(s_box, prec_width)
            den = BoxC.of(GaussianRational.coerce(QQ(self.sign * n)))
            for _k in range(n - 1):
                den = den * s_box
            out = num / den
            if out.width() <= width:
                return out
            prec_width = prec_width / 64
        raise ArithmeticError("derivative evaluation failed to reach target width")

    def float_root_of_t(self):
        """Callable t -> complex root value, for numeric probes only."""
        coeffs = [self._coef_float(c) for c in self.body.coeffs]
        base = float(self.base) if isinstance(self.base, RealAlgebraic) else float(QQ(self.base))
        n = self.ramification
        sign = self.sign

        def f(t):
            d = (float(t) - base) * sign
            if d < 0:
                if self.two_sided:
                    s = -((-d) ** (1.0 / n))
                else:
                    raise WrongSide(f"t = {t} off-branch")
            else:
                s = d ** (1.0 / n)
            acc = 0j
            for c in reversed(coeffs):
                acc = acc * s + c
            return complex(acc)

        return f

    def float_derivative_of_t(self):
        """Callable t -> complex d(root)/dt on the open side (chain rule)."""
        dbody = [self._coef_float(c) for c in self.body.derivative().coeffs]
        base = float(self.base) if isinstance(self.base, RealAlgebraic) else float(QQ(self.base))
        n = self.ramification
        sign = self.sign

        def df(t):
            d = (float(t) - base) * sign
            if d < 0:
                if not self.two_sided:
                    raise WrongSide(f"t = {t} off-branch")
                s = -((-d) ** (1.0 / n))
            elif d == 0:
                raise ZeroDivisionError("derivative at the ramification point")
            else:
                s = d ** (1.0 / n)
            acc = 0j
            for c in reversed(dbody):
                acc = acc * s + c
            # dt/ds = sign * N * s^(N-1)
            return complex(acc / (sign * n * s ** (n - 1)))

        return df

    def _coef_float(self, c):
        if isinstance(c, AlgebraicScalar):
            box = self.embedding.eval_box(c, QQ(1, 10 ** 20))
            return complex(box.mid())
        return complex(c)

    def __repr__(self):
        sgn = "+" if self.sign > 0 else "-"
        return (
            f"PuiseuxSeries(t = {self.base} {sgn} s^{self.ramification}, "
            f"body = {self.body})"
        )
