"""Hensel lifting of coprime factorizations over truncated power series,
plus Newton solvers for simple roots and m-th roots of unit series."""

from .gaussian import QI_ZERO
from .poly import Poly, poly_ext_gcd, poly_gcd
from .series import TruncatedSeries


class NotCoprime(Exception):
    """Two seed factors share a root."""


def _series_one(czero):
    one = getattr(czero, "ring_one", None)
    one = one() if one else czero + 1
    return TruncatedSeries([one], None, czero)


def _to_series_poly(f0, czero, order):
    return Poly([TruncatedSeries([c], order, czero) for c in f0.coeffs])


def _coef_poly_at(F, k):
    """Coefficient of t^k of a z-polynomial with series coefficients."""
    return Poly([c.coef(k) for c in F.coeffs])


def hensel_split(F, factors0, T):
    """Lift a coprime factorization of F(z, 0) to factors mod t^(T+1).

    F is a Poly in z with TruncatedSeries coefficients, monic in z.  factors0
    are monic scalar Polys, pairwise coprime, with product F(z, 0).  Returns
    one Poly in z with TruncatedSeries coefficients per seed factor; the
    product agrees with F to order T and each factor reduces to its seed.
    """
    n = F.degree
    czero = F.coeffs[0].czero
    lead = F.coeffs[n]
    if not (lead.exact and lead.coef(0) == _series_one(czero).coef(0) and len(lead.coeffs) == 1):
        raise ValueError("F must be monic in z")
    P0 = _coef_poly_at(F, 0)
    acc = factors0[0]
    for f in factors0[1:]:
        acc = acc * f
    if acc != P0:
        raise ValueError("seed factors do not multiply to F(z, 0)")
    for i in range(len(factors0)):
        for j in range(i + 1, len(factors0)):
            if poly_gcd(factors0[i], factors0[j]).degree != 0:
                raise NotCoprime(f"seed factors {i} and {j} share a root")
    if len(factors0) == 1:
        return [F.map_coeffs(lambda c: c.truncate(T))]

    # Bezout data: u_j f_j + v_j Q_j = 1 with Q_j the complementary product
    bezout = []
    for j, fj in enumerate(factors0):
        Qj = None
        for l, fl in enumerate(factors0):
            if l == j:
                continue
            Qj = fl if Qj is None else Qj * fl
        g, u, v = poly_ext_gcd(fj, Qj)
        if g.degree != 0:
            raise NotCoprime("complementary product shares a root")
        inv = g.coeffs[0].inverse() if hasattr(g.coeffs[0], "inverse") else 1 / g.coeffs[0]
        bezout.append((Qj, v.scale(inv)))

    factors = [_to_series_poly(f0, czero, T) for f0 in factors0]
    for k in range(1, T + 1):
        prod = factors[0]
        for f in factors[1:]:
            prod = prod * f
        Ek = _coef_poly_at(F, k) - _coef_poly_at(prod, k)
        if not Ek:
            continue
        for j, fj0 in enumerate(factors0):
            Qj, vj = bezout[j]
            _, dj = (Ek * vj).divmod(fj0)
            if not dj:
                continue
            bump = Poly(
                [TruncatedSeries([c], T, czero).shift_up(k).truncate(T) for c in dj.coeffs]
            )
            factors[j] = factors[j] + bump
    return factors


def series_div(u, v, T):
    """u / v mod t^(T+1) for series with invertible constant term."""
    czero = v.czero
    v0 = v.coef(0)
    if not v0:
        raise ZeroDivisionError("series divisor has zero constant term")
    inv0 = v0.inverse() if hasattr(v0, "inverse") else 1 / v0
    out = []
    for k in range(T + 1):
        acc = u.coef(k)
        for i in range(k):
            acc = acc - out[i] * v.coef(k - i)
        out.append(acc * inv0)
    return TruncatedSeries(out, T, czero)


def newton_root_series(F, r0, T):
    """The unique series root of F(z, t) with r(0) = r0, a simple root of F(z, 0).

    F is a Poly in z with TruncatedSeries coefficients.  Quadratic Newton
    iteration; raises if r0 is not simple.
    """
    czero = F.coeffs[0].czero
    dF = F.derivative()
    r = TruncatedSeries([r0], 0, czero)
    order = 0
    guard = 0
    while order < T:
        order = min(2 * order + 1, T)
        guard += 1
        if guard > 64:
            raise ArithmeticError("Newton iteration failed to converge")
        rw = TruncatedSeries(list(r.coeffs), order, czero)
        fv = _eval_z(F, rw, order)
        dv = _eval_z(dF, rw, order)
        if not dv.coef(0):
            raise ZeroDivisionError("seed is not a simple root")
        r = rw - series_div(fv, dv, order)
    out = r.truncate(T)
    # when the root happens to be a polynomial, certify it exactly
    if all(c.exact for c in F.coeffs):
        cand = TruncatedSeries(list(out.coeffs), None, czero)
        acc = TruncatedSeries([], None, czero)
        for c in reversed(F.coeffs):
            acc = acc * cand + c
        if acc.exact and not any(acc.coeffs):
            return cand
    return out


def _eval_z(F, r, order):
    czero = r.czero
    acc = TruncatedSeries([], order, czero)
    for c in reversed(F.coeffs):
        acc = (acc * r + c).truncate(order)
    return acc


def mth_root_series(a, m, rho0, T):
    """Series rho with rho^m = a mod t^(T+1), rho(0) = rho0 (a unit root).

    Requires rho0^m = a(0) and m invertible; Newton iteration.
    """
    czero = a.czero
    if m == 1:
        return a.truncate(T)
    rho = TruncatedSeries([rho0], 0, czero)
    m_scalar = _scalar_int(rho0, m)
    m_inv = m_scalar.inverse() if hasattr(m_scalar, "inverse") else 1 / m_scalar
    order = 0
    guard = 0
    while order < T:
        order = min(2 * order + 1, T)
        guard += 1
        if guard > 64:
            raise ArithmeticError("root iteration failed to converge")
        rw = TruncatedSeries(list(rho.coeffs), order, czero)
        pw = _series_pow(rw, m - 1, order)
        err = (pw * rw - a).truncate(order)
        rho = rw - series_div(err, pw, order).scale(m_inv)
    out = rho.truncate(T)
    if a.exact:
        cand = TruncatedSeries(list(out.coeffs), None, czero)
        acc = cand
        for _ in range(m - 1):
            acc = acc * cand
        diff = acc - a
        if diff.exact and not any(diff.coeffs):
            return cand
    return out


def _series_pow(f, e, order):
    czero = f.czero
    one = getattr(czero, "ring_one", None)
    one = one() if one else czero + 1
    out = TruncatedSeries([one], order, czero)
    acc = f
    while e:
        if e & 1:
            out = (out * acc).truncate(order)
        e >>= 1
        if e:
            acc = (acc * acc).truncate(order)
    return out


def _scalar_int(sample, k):
    one = getattr(sample, "ring_one", None)
    one = one() if one else 1
    acc = one - one
    for _ in range(k):
        acc = acc + one
    return acc
