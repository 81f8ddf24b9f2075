"""Dense univariate polynomials over an exact coefficient ring.

The coefficient type is duck-typed: anything supporting +, -, *, unary -,
bool() (exact zero test) works for ring operations, and / is required only
on paths that genuinely divide (monic gcd, Gaussian elimination).  This lets
the same code run over Gaussian rationals, one-step algebraic extensions
(where division may raise SplitRequest), truncated power series, and nested
polynomials.

Principal subresultant coefficients follow the Sylvester-matrix determinant
convention: psc_k(p, q) is the determinant of the square submatrix of the
Sylvester matrix of (p, q) obtained by deleting the last 2k rows, the last
k columns of p-rows and the last k columns of q-rows.  In particular psc_0
is the resultant, e.g. psc_0(z^2 - 1, 2z) = -4 while psc_1(z^2, 2z) = 2.
For r the number of distinct roots of p, psc_k(p, p') vanishes exactly for
k < deg(p) - r.
"""

from .gaussian import GaussianRational, QI_ONE


class Poly:
    """Polynomial sum(coeffs[k] * X^k); trailing zeros are trimmed."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        coeffs = list(coeffs)
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        self.coeffs = tuple(coeffs)

    # -- basic structure -------------------------------------------------

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __bool__(self):
        return bool(self.coeffs)

    @property
    def lc(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coef(self, k):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return None  # caller handles ring zero

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] = out[k] + c
        return Poly(out)

    def __sub__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        if not self or not other:
            return Poly()
        a, b = self.coeffs, other.coeffs
        out = [None] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if not ca:
                continue
            for j, cb in enumerate(b):
                t = ca * cb
                out[i + j] = t if out[i + j] is None else out[i + j] + t
        zero = (a[0] - a[0]) if a else None
        return Poly([zero if c is None else c for c in out])

    def scale(self, s):
        return Poly([c * s for c in self.coeffs])

    def shift_up(self, k):
        """Multiply by X^k."""
        if not self:
            return self
        zero = self.coeffs[0] - self.coeffs[0]
        return Poly([zero] * k + list(self.coeffs))

    def divmod_monic(self, d):
        """Quotient and remainder by a *monic* divisor; ring-safe."""
        if not d or not _is_one(d.lc):
            raise ValueError("divisor must be monic")
        r = list(self.coeffs)
        dd = d.degree
        if self.degree < dd:
            return Poly(), self
        q = [None] * (self.degree - dd + 1)
        for k in range(self.degree - dd, -1, -1):
            c = r[k + dd]
            q[k] = c
            if c:
                for j, cd in enumerate(d.coeffs[:-1]):
                    r[k + j] = r[k + j] - c * cd
            r[k + dd] = c - c
        return Poly(q), Poly(r[:dd])

    def divmod(self, d):
        """Quotient and remainder; divides by lc(d), so needs a field."""
        if not d:
            raise ZeroDivisionError("polynomial division by zero")
        inv = _inv(d.lc)
        q, r = self.divmod_monic(d.scale(inv))
        return q.scale(inv), r

    def monic(self):
        if not self:
            return self
        return self.scale(_inv(self.lc))

    # -- calculus / evaluation ---------------------------------------------

    def derivative(self):
        return Poly([c * k for k, c in enumerate(self.coeffs) if k >= 1])

    def eval(self, x):
        """Horner evaluation; x may live in any ring accepting the coeffs."""
        if not self.coeffs:
            return x - x
        acc = self.coeffs[-1]
        if len(self.coeffs) == 1:
            return acc + (x - x)
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    def compose(self, q, one=None):
        """self(q) for a polynomial q (Horner over Poly)."""
        out = Poly()
        for c in reversed(self.coeffs):
            out = out * q + const_poly(c)
        return out

    def taylor_shift(self, a):
        """self(X + a)."""
        out = Poly()
        x_plus_a = Poly([a, a.ring_one() if hasattr(a, "ring_one") else _one_like(a)])
        for c in reversed(self.coeffs):
            out = out * x_plus_a + const_poly(c)
        return out

    def map_coeffs(self, f):
        return Poly([f(c) for c in self.coeffs])

    def __repr__(self):
        return f"Poly({list(self.coeffs)!r})"

    def __str__(self):
        return format_poly_plain(self, "x")


def format_poly_plain(p, var):
    """Human form 'c0 + c1*var + c2*var^2', sparse, no sign folding on coefficients."""
    if p.degree < 0:
        return "0"
    parts = []
    for k, c in enumerate(p.coeffs):
        if not c:
            continue
        cs = str(c)
        if k == 0:
            parts.append(cs)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            if cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append(f"-{mono}")
            elif ("+" in cs[1:]) or ("-" in cs[1:]) or cs.endswith("i"):
                parts.append(f"({cs})*{mono}")
            else:
                parts.append(f"{cs}*{mono}")
    out = parts[0]
    for piece in parts[1:]:
        if piece.startswith("-"):
            out += " - " + piece[1:]
        else:
            out += " + " + piece
    return out


def const_poly(c):
    return Poly([c])


def x_poly(one=QI_ONE):
    """The monomial X over a ring with the given one."""
    return Poly([one - one, one])


def monomial(k, one=QI_ONE):
    zero = one - one
    return Poly([zero] * k + [one])


def _one_like(c):
    if hasattr(c, "ring_one"):
        return c.ring_one()
    return QI_ONE


def _is_one(c):
    return not (c - _one_like(c))


def _inv(c):
    if hasattr(c, "inverse"):
        return c.inverse()
    return 1 / c


# -- gcd family (field coefficients) ---------------------------------------


def poly_gcd(p, q):
    """Monic gcd by the Euclidean algorithm over a field."""
    a, b = p, q
    while b:
        a, b = b, a.divmod(b)[1]
    if not a:
        return a
    return a.monic()


def poly_ext_gcd(p, q):
    """(g, s, t) with s*p + t*q = g, g the monic gcd."""
    one_c = _one_like((p.coeffs or q.coeffs)[0])
    zero = one_c - one_c
    r0, r1 = p, q
    s0, s1 = const_poly(one_c), Poly()
    t0, t1 = Poly(), const_poly(one_c)
    while r1:
        qt, rr = r0.divmod(r1)
        r0, r1 = r1, rr
        s0, s1 = s1, s0 - qt * s1
        t0, t1 = t1, t0 - qt * t1
    if not r0:
        return r0, s0, t0
    inv = _inv(r0.lc)
    return r0.scale(inv), s0.scale(inv), t0.scale(inv)


def squarefree_decomposition(p):
    """Yun's algorithm: list of (factor_i, i) with p = lc * prod factor_i^i.

    Factors are monic and pairwise coprime; factors equal to 1 are omitted.
    Characteristic zero is assumed.
    """
    if not p:
        raise ValueError("squarefree decomposition of zero polynomial")
    p = p.monic()
    if p.degree == 0:
        return []
    dp = p.derivative()
    a = poly_gcd(p, dp)
    b = p.divmod(a)[0]
    c = dp.divmod(a)[0]
    d = c - b.derivative()
    out = []
    i = 1
    while b.degree > 0:
        f = poly_gcd(b, d)
        if f.degree > 0:
            out.append((f, i))
        b = b.divmod(f)[0]
        c = d.divmod(f)[0]
        d = c - b.derivative()
        i += 1
    return out


def squarefree_part(p):
    out = None
    for f, _ in squarefree_decomposition(p):
        out = f if out is None else out * f
    if out is None:
        return const_poly(_one_like(p.coeffs[0]))
    return out


# -- gcd over a UFD coefficient domain (primitive PRS) -----------------------


def content(p, coeff_gcd):
    """gcd of the coefficients, via the supplied coefficient-domain gcd."""
    c = None
    for a in p.coeffs:
        if not a:
            continue
        c = a if c is None else coeff_gcd(c, a)
    return c


def primitive_part(p, coeff_gcd, coeff_div):
    c = content(p, coeff_gcd)
    if c is None:
        return p, None
    return p.map_coeffs(lambda a: coeff_div(a, c)), c


def gcd_primitive(p, q, coeff_gcd, coeff_div, coeff_one):
    """Monic-over-fraction-field gcd of p, q with UFD coefficients.

    Returns a primitive polynomial over the coefficient domain whose
    fraction-field monic normalization is the gcd.  Uses pseudo-division
    with content removal each step (primitive PRS).
    """
    a, _ = primitive_part(p, coeff_gcd, coeff_div)
    b, _ = primitive_part(q, coeff_gcd, coeff_div)
    if not a:
        return b
    if not b:
        return a
    while True:
        if b.degree > a.degree:
            a, b = b, a
        # pseudo-remainder of a by b
        r = _pseudo_rem(a, b)
        if not r:
            return b
        r, _ = primitive_part(r, coeff_gcd, coeff_div)
        a, b = b, r


def _pseudo_rem(a, b):
    """Division-free remainder: lc(b)^j * a mod b for some j >= 0.

    The stray lc(b) power is harmless here because callers re-extract the
    primitive part immediately.
    """
    lb = b.lc
    r = a
    while r and r.degree >= b.degree:
        k = r.degree - b.degree
        rc = r.lc
        r = r.scale(lb) - b.shift_up(k).scale(rc)
    return r


def gcd_bivariate(p, q):
    """gcd of polynomials whose coefficients are Poly over GaussianRational.

    The result is normalized to have monic leading coefficient (as a
    polynomial in the inner variable) and primitive content.
    """

    def cdiv(a, c):
        quo, rem = a.divmod(c)
        if rem:
            raise ArithmeticError("non-exact coefficient division")
        return quo

    g = gcd_primitive(p, q, poly_gcd, cdiv, const_poly(QI_ONE))
    if g and g.lc.degree >= 0:
        inv_lead = g.lc.lc.inverse()
        g = g.map_coeffs(lambda a: a.scale(inv_lead))
    return g


# -- determinants and subresultants -----------------------------------------


def det_gauss(rows, zero):
    """Determinant over a field by Gaussian elimination with exact zero tests.

    Division by a pivot may raise SplitRequest over an extension; callers
    branch and retry.
    """
    n = len(rows)
    m = [list(r) for r in rows]
    sign = 1
    det = None
    for col in range(n):
        piv = None
        for r in range(col, n):
            if m[r][col]:
                piv = r
                break
        if piv is None:
            return zero
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            sign = -sign
        pc = m[col][col]
        det = pc if det is None else det * pc
        inv = _inv(pc)
        for r in range(col + 1, n):
            f = m[r][col]
            if not f:
                continue
            f = f * inv
            for c in range(col + 1, n):
                m[r][c] = m[r][c] - f * m[col][c]
    if det is None:
        return zero
    return det if sign == 1 else -det


def det_berkowitz(rows, one):
    """Division-free determinant (Berkowitz); works over any commutative ring."""
    cp = charpoly_berkowitz(rows, one)
    n = len(rows)
    d = cp[0]
    return d if n % 2 == 0 else -d


def charpoly_berkowitz(rows, one):
    """Coefficients [c_0..c_n] of det(X*I - A), c_n = 1, any commutative ring."""
    n = len(rows)
    zero = one - one
    if n == 0:
        return [one]
    a = rows
    # vectors are coefficient columns, length grows each stage
    v = [one, -a[0][0]]  # charpoly of leading 1x1 block: X - a00
    for k in range(1, n):
        # Toeplitz column for stage k: [1, -a_kk, -R*C, -R*A_k*C, ...]
        R = a[k][:k]
        C = [a[i][k] for i in range(k)]
        akk = a[k][k]
        col = [one, -akk]
        w = C
        for _ in range(k - 1):
            s = zero
            for i in range(k):
                if R[i]:
                    s = s + R[i] * w[i]
            col.append(-s)
            w = _mat_vec(a, w, k)
        s = zero
        for i in range(k):
            if R[i]:
                s = s + R[i] * w[i]
        col.append(-s)
        # multiply Toeplitz(col) by v
        new_len = len(v) + 1
        nv = [zero] * new_len
        for i in range(new_len):
            s = zero
            for j in range(len(v)):
                if i - j < 0 or i - j >= len(col):
                    continue
                s = s + col[i - j] * v[j]
            nv[i] = s
        v = nv
    # v holds charpoly coefficients highest degree first
    return list(reversed(v))


def _mat_vec(a, w, k):
    out = []
    for i in range(k):
        s = None
        for j in range(k):
            t = a[i][j] * w[j]
            s = t if s is None else s + t
        out.append(s)
    return out


def sylvester_psc_matrix(p, q, k, zero):
    """Submatrix of the Sylvester matrix whose determinant is psc_k(p, q)."""
    m, l = p.degree, q.degree
    if not (m > l >= 0):
        raise ValueError("require deg p > deg q >= 0")
    size = m + l - 2 * k
    if size <= 0:
        raise ValueError("k too large for psc")
    rows = []
    # l - k rows of p, m - k rows of q; columns are degrees m+l-1-k-j ... :
    # build full shifted coefficient rows, then truncate to `size` columns.
    width = m + l
    pc = list(reversed(p.coeffs))  # degree-descending
    qc = list(reversed(q.coeffs))
    for r in range(l - k):
        row = [zero] * width
        for j, c in enumerate(pc):
            row[r + j] = c
        rows.append(row[:size])
    for r in range(m - k):
        row = [zero] * width
        for j, c in enumerate(qc):
            row[r + j] = c
        rows.append(row[:size])
    return rows


def subresultant_psc(p, q, k, zero=None, one=None, ring=False):
    """psc_k(p, q) via the Sylvester determinant convention.

    With ring=False coefficients must form a field (Gaussian elimination);
    with ring=True a division-free determinant is used so truncated-series
    or polynomial coefficients are fine.
    """
    if zero is None:
        zero = p.coeffs[0] - p.coeffs[0]
    rows = sylvester_psc_matrix(p, q, k, zero)
    if ring:
        if one is None:
            raise ValueError("ring determinant needs explicit one")
        return det_berkowitz(rows, one)
    return det_gauss(rows, zero)


def resultant(p, q, zero=None, one=None, ring=False):
    return subresultant_psc(p, q, 0, zero=zero, one=one, ring=ring)


def discriminant(p, one=QI_ONE):
    """disc(p) = (-1)^(n(n-1)/2) * Res(p, p') / lc(p) over a field."""
    n = p.degree
    if n < 1:
        raise ValueError("discriminant needs degree >= 1")
    if n == 1:
        return one
    r = resultant(p, p.derivative())
    r = r * _inv(p.lc)
    if (n * (n - 1) // 2) % 2:
        return -r
    return r
