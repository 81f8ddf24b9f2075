"""Truncated power series with explicit, pessimistic order tracking.

A series is either exact (a polynomial known completely; order None) or
truncated: coefficients 0..order are known exactly, the tail is unknown.
Every operation computes the order of its result from the orders of its
inputs, never optimistically.  Valuation is three-valued: a nonnegative
integer, INF (exact zero), or UndeterminedAtOrder(T) when a non-exact
series vanishes through its whole stored window.
"""

import math

from .gaussian import QI_ZERO

INF = math.inf


class UndeterminedAtOrder:
    """Truncation cannot decide: all known coefficients vanish."""

    __slots__ = ("order",)

    def __init__(self, order):
        self.order = order

    def __repr__(self):
        return f"UndeterminedAtOrder({self.order})"

    def __eq__(self, other):
        if isinstance(other, UndeterminedAtOrder):
            return self.order == other.order
        return NotImplemented

    def __hash__(self):
        return hash(("UndeterminedAtOrder", self.order))


class InsufficientValuation(Exception):
    """shift_divide asked to divide by t^m without certified valuation m.

    undetermined_at is None when the valuation is provably < m, else the
    truncation order at which certification ran out of known coefficients.
    """

    def __init__(self, msg, undetermined_at=None):
        super().__init__(msg)
        self.undetermined_at = undetermined_at


class TruncatedSeries:
    __slots__ = ("coeffs", "order", "czero")

    def __init__(self, coeffs, order=None, czero=QI_ZERO):
        """order None means exact; otherwise coefficients 0..order are known."""
        coeffs = list(coeffs)
        if order is not None and len(coeffs) > order + 1:
            coeffs = coeffs[: order + 1]
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        self.coeffs = tuple(coeffs)
        self.order = order
        self.czero = czero

    # -- inspection -----------------------------------------------------

    @property
    def exact(self):
        return self.order is None

    def known_order(self):
        return INF if self.order is None else self.order

    def coef(self, k):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return self.czero

    def val_lower_bound(self):
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return INF if self.exact else self.order + 1

    def valuation(self):
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        if self.exact:
            return INF
        return UndeterminedAtOrder(self.order)

    def is_exact_zero(self):
        return self.exact and not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, TruncatedSeries):
            return self.order == other.order and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def agrees_to(self, other, T):
        """Coefficientwise equality through order T (both must know T)."""
        if self.known_order() < T or other.known_order() < T:
            return False
        return all(self.coef(k) == other.coef(k) for k in range(T + 1))

    # -- ring operations ---------------------------------------------------

    def _wrap(self, coeffs, order):
        return TruncatedSeries(coeffs, order, self.czero)

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            other = self._const(other)
        order = _min_order(self.known_order(), other.known_order())
        n = max(len(self.coeffs), len(other.coeffs))
        if order is not None:
            n = min(n, order + 1)
        coeffs = [self.coef(k) + other.coef(k) for k in range(n)]
        return self._wrap(coeffs, order)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, TruncatedSeries):
            other = self._const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return self._wrap([-c for c in self.coeffs], self.order)

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self.scale(other)
        if self.is_exact_zero() or other.is_exact_zero():
            return TruncatedSeries((), None, self.czero)
        o1, o2 = self.known_order(), other.known_order()
        v1, v2 = self.val_lower_bound(), other.val_lower_bound()
        order = _min_order(o1 + v2, o2 + v1)
        n = len(self.coeffs) + len(other.coeffs) - 1
        if order is not None:
            n = min(n, order + 1)
        out = [self.czero] * max(n, 0)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if i + j >= n:
                    break
                if b:
                    out[i + j] = out[i + j] + a * b
        return self._wrap(out, order)

    __rmul__ = __mul__

    def scale(self, s):
        return self._wrap([c * s for c in self.coeffs], self.order)

    def _const(self, s):
        return TruncatedSeries([self.czero + s], None, self.czero)

    # -- the kernel operations ----------------------------------------------

    def substitute_power(self, n, sign=1):
        """f(sign * t^n); truncation order n*T per the kernel contract."""
        if n < 1:
            raise ValueError("power substitution needs n >= 1")
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        order = None if self.exact else n * self.order
        m = len(self.coeffs)
        if m == 0:
            return self._wrap([], order)
        out = [self.czero] * ((m - 1) * n + 1)
        for k, c in enumerate(self.coeffs):
            if c:
                out[k * n] = c if (sign == 1 or k % 2 == 0) else -c
        return self._wrap(out, order)

    def shift_divide(self, m):
        """f / t^m, requiring certified valuation >= m."""
        if m == 0 or self.is_exact_zero():
            return self
        if not self.exact and self.order < m:
            if self.val_lower_bound() > self.order:
                raise InsufficientValuation(
                    f"order {self.order} window too short to divide by t^{m}",
                    undetermined_at=self.order,
                )
            raise InsufficientValuation(
                f"order {self.order} window too short to divide by t^{m}"
            )
        v = self.val_lower_bound()
        if v < m:
            raise InsufficientValuation(f"valuation {v} < {m}")
        order = None if self.exact else self.order - m
        return self._wrap(list(self.coeffs[m:]), order)

    def shift_up(self, m):
        """f * t^m."""
        order = None if self.exact else self.order + m
        return self._wrap([self.czero] * m + list(self.coeffs), order)

    def truncate(self, T):
        """Cap the known window at order T (exact input stays exact if it fits)."""
        if self.exact and len(self.coeffs) <= T + 1:
            return self
        order = T if self.order is None else min(self.order, T)
        return self._wrap(list(self.coeffs[: T + 1]), order)

    def derivative(self):
        order = None if self.exact else self.order - 1
        return self._wrap(
            [c * k for k, c in enumerate(self.coeffs) if k >= 1], order
        )

    def eval(self, x):
        """Horner evaluation of the stored coefficients."""
        if not self.coeffs:
            return self.czero + (x - x)
        acc = self.coeffs[-1] + (x - x)
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    def map_coeffs(self, f, czero=None):
        return TruncatedSeries(
            [f(c) for c in self.coeffs],
            self.order,
            f(self.czero) if czero is None else czero,
        )

    def ring_one(self):
        one = getattr(self.czero, "ring_one", None)
        one = one() if one else 1
        return TruncatedSeries([self.czero + one], None, self.czero)

    def ring_zero(self):
        return TruncatedSeries((), None, self.czero)

    def __str__(self):
        return format_series(self, "t")

    __repr__ = __str__


def _min_order(a, b):
    m = min(a, b)
    return None if m == INF else int(m)


def series_const(c, czero=QI_ZERO, order=None):
    return TruncatedSeries([czero + c], order, czero)


def series_var(czero=QI_ZERO, order=None):
    one = getattr(czero, "ring_one", None)
    one = one() if one else 1
    return TruncatedSeries([czero, czero + one], order, czero)


def series_from_poly(p, czero=QI_ZERO, order=None):
    return TruncatedSeries(list(p.coeffs), order, czero)


def format_series(f, var):
    """Render 'c0 + c1*var + ... + O(var^{T+1})'; exact series omit the O-term."""
    parts = []
    for k, c in enumerate(f.coeffs):
        if not c:
            continue
        cs = str(c)
        if k == 0:
            parts.append(cs)
            continue
        mono = var if k == 1 else f"{var}^{k}"
        if cs == "1":
            parts.append(mono)
        elif cs == "-1":
            parts.append(f"-{mono}")
        elif ("+" in cs[1:]) or ("-" in cs[1:]) or cs.endswith("i"):
            parts.append(f"({cs})*{mono}")
        else:
            parts.append(f"{cs}*{mono}")
    if not parts:
        body = "0"
    else:
        body = parts[0]
        for piece in parts[1:]:
            if piece.startswith("-"):
                body += " - " + piece[1:]
            else:
                body += " + " + piece
    if f.order is not None:
        body += f" + O({var}^{f.order + 1})"
    return body
