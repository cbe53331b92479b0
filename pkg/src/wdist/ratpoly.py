"""Exact rational kernel.

Rationals are :class:`fractions.Fraction`.  The public polynomial types are
:class:`UniPoly` (dense, highest degree first) and :class:`MPoly` (sparse,
exponent tuples).  The heavy paths run on plain integer coefficient lists
stored lowest degree first; those helpers carry a ``zp_`` prefix.
"""
from __future__ import annotations

from decimal import Decimal
from fractions import Fraction
from math import gcd as igcd, lcm as ilcm
from typing import Iterable, Sequence

from .errors import DegreeTooLow

Rat = Fraction

# Primes below 2**61 used for modular shortcuts.
_PRIMES = (2305843009213693951, 2305843009213693921, 2305843009213693907,
           2305843009213693723, 2305843009213693693)


def as_rat(x) -> Fraction:
    """Parse ints, Fractions, decimal or ``p/q`` strings into a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if "/" in s:
            p, q = s.split("/")
            return Fraction(int(p), int(q))
        return Fraction(Decimal(s))
    if isinstance(x, (float, Decimal)):
        return Fraction(x)
    raise TypeError(f"cannot read {x!r} as a rational")


def _norm(c):
    # keep integers as ints, they are much cheaper than Fractions
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


# ---------------------------------------------------------------------------
# integer polynomial helpers (lowest degree first)

def zp_trim(p: list) -> list:
    while p and not p[-1]:
        p.pop()
    return p


def zp_add(p, q):
    if len(p) < len(q):
        p, q = q, p
    r = list(p)
    for i, c in enumerate(q):
        r[i] += c
    return zp_trim(r)


def zp_sub(p, q):
    r = list(p) + [0] * max(0, len(q) - len(p))
    for i, c in enumerate(q):
        r[i] -= c
    return zp_trim(r)


def zp_scale(p, c):
    if not c:
        return []
    return [c * x for x in p]


def zp_mul(p, q):
    if not p or not q:
        return []
    if len(p) < len(q):
        p, q = q, p
    r = [0] * (len(p) + len(q) - 1)
    for j, b in enumerate(q):
        if b:
            for i, a in enumerate(p):
                r[i + j] += a * b
    return zp_trim(r)


def zp_deriv(p):
    return zp_trim([i * p[i] for i in range(1, len(p))])


def zp_eval(p, x):
    r = 0
    for c in reversed(p):
        r = r * x + c
    return r


def zp_eval_hom(p, num, den):
    """den**deg(p) * p(num/den) as an exact integer (den > 0)."""
    r = 0
    dp = 1
    for c in reversed(p):
        r = r * num + c * dp
        dp *= den
    return r


def zp_sign_at(p, x: Fraction) -> int:
    v = zp_eval_hom(p, x.numerator, x.denominator)
    return (v > 0) - (v < 0)


def zp_content(p) -> int:
    g = 0
    for c in p:
        g = igcd(g, c)
        if g == 1:
            break
    return g


def zp_primitive(p):
    """Primitive part with a positive leading coefficient."""
    if not p:
        return []
    g = zp_content(p)
    if p[-1] < 0:
        g = -g
    if g == 1:
        return list(p)
    return [c // g for c in p]


def zp_from_fractions(p: Sequence) -> tuple[Fraction, list]:
    """Write a rational list as ``scale * integer list`` with the integer list
    primitive and the scale rational."""
    p = [Fraction(c) for c in p]
    while p and not p[-1]:
        p.pop()
    if not p:
        return Fraction(0), []
    den = 1
    for c in p:
        den = ilcm(den, c.denominator)
    ints = [c.numerator * (den // c.denominator) for c in p]
    prim = zp_primitive(ints)
    return Fraction(ints[-1], den * prim[-1]), prim


def zp_divexact(a, b):
    """Quotient a/b over Z, or None when b does not divide a in Z[x]."""
    a = list(a)
    db = len(b) - 1
    if db < 0:
        raise ZeroDivisionError
    if len(a) - 1 < db:
        return [] if not a else None
    q = [0] * (len(a) - db)
    lb = b[-1]
    for k in range(len(a) - 1 - db, -1, -1):
        c = a[k + db]
        if c:
            t, r = divmod(c, lb)
            if r:
                return None
            q[k] = t
            for i in range(db + 1):
                a[k + i] -= t * b[i]
    if any(a[:db]):
        return None
    return zp_trim(q)


def zp_prem(a, b):
    """Pseudo-remainder of a by b."""
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(a) - 1 >= db and a:
        c = a[-1]
        k = len(a) - 1 - db
        a = [lb * x for x in a]
        for i in range(db + 1):
            a[k + i] -= c * b[i]
        a.pop()
        zp_trim(a)
    return a


def zp_max_norm(p) -> int:
    return max((abs(c) for c in p), default=0)


def _from_xi_adic(h, xi):
    out = []
    half = xi // 2
    while h:
        r = h % xi
        if r > half:
            r -= xi
        out.append(r)
        h = (h - r) // xi
    return out


def _gcd_heuristic(f, g):
    bound = 2 * min(zp_max_norm(f), zp_max_norm(g)) + 29
    xi = bound
    for _ in range(6):
        ff, gg = zp_eval(f, xi), zp_eval(g, xi)
        if ff and gg:
            h = zp_primitive(_from_xi_adic(igcd(ff, gg), xi))
            if h and zp_divexact(f, h) is not None and zp_divexact(g, h) is not None:
                return h
        xi = xi * 73794 // 27011 + 1
    return None


def _gcd_prs(f, g):
    if len(f) < len(g):
        f, g = g, f
    while g:
        r = zp_prem(f, g)
        f, g = g, zp_primitive(r)
    return zp_primitive(f)


def zp_gcd(f, g):
    """Primitive gcd over Z (positive leading coefficient)."""
    f, g = zp_primitive(f), zp_primitive(g)
    if not f:
        return g
    if not g:
        return f
    if len(f) == 1 or len(g) == 1:
        return [1]
    h = _gcd_heuristic(f, g)
    if h is None:
        h = _gcd_prs(f, g)
    return h


def _mod_gcd_degree(f, g, p):
    a = zp_trim([c % p for c in f])
    b = zp_trim([c % p for c in g])
    while b:
        inv = pow(b[-1], -1, p)
        while len(a) >= len(b):
            c = a[-1] * inv % p
            k = len(a) - len(b)
            for i in range(len(b)):
                a[k + i] = (a[k + i] - c * b[i]) % p
            a.pop()
            zp_trim(a)
        a, b = b, a
    return len(a) - 1


def zp_is_squarefree(f) -> bool:
    """Exact square-freeness test.  A prime not dividing deg*lc that gives a
    constant modular gcd proves the claim; otherwise use the integer gcd."""
    if len(f) <= 2:
        return True
    d = zp_deriv(f)
    for p in _PRIMES:
        if (f[-1] * (len(f) - 1)) % p == 0:
            continue
        if _mod_gcd_degree(f, d, p) == 0:
            return True
        break
    return len(zp_gcd(f, d)) == 1


def zp_sqf(f) -> list[tuple[list, int]]:
    """Square-free decomposition (Yun) of a nonconstant integer polynomial.
    Returns primitive factors with multiplicities; constants are dropped."""
    f = zp_primitive(f)
    if len(f) <= 1:
        return []
    if zp_is_squarefree(f):
        return [(f, 1)]
    df = zp_deriv(f)
    a0 = zp_gcd(f, df)
    b = zp_divexact(f, a0)
    c = zp_divexact(df, a0)
    d = zp_sub(c, zp_deriv(b))
    out = []
    i = 1
    while len(b) > 1:
        a = zp_gcd(b, d)
        if len(a) > 1:
            out.append((a, i))
        b = zp_divexact(b, a)
        c = zp_divexact(d, a)
        d = zp_sub(c, zp_deriv(b))
        i += 1
    return out


# ---------------------------------------------------------------------------
# interpolation and integer determinants

def interpolate(nodes: Sequence, values: Sequence) -> list:
    """Coefficients (lowest first) of the polynomial through the points.
    Integer results come back as ints."""
    n = len(nodes)
    xs = [Fraction(x) for x in nodes]
    dd = [Fraction(v) for v in values]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j])
    coeffs = [Fraction(0)] * n
    # expand the Newton form from the innermost bracket outwards
    poly = [dd[-1]]
    for k in range(n - 2, -1, -1):
        shifted = [Fraction(0)] + poly
        for i in range(len(poly)):
            shifted[i] -= xs[k] * poly[i]
        shifted[0] += dd[k]
        poly = shifted
    coeffs[:len(poly)] = poly
    out = [_norm(c) for c in coeffs]
    while out and not out[-1]:
        out.pop()
    return out


def bareiss_int(M, pivoting: bool = True):
    """Determinant of a square integer matrix by fraction-free elimination.

    With ``pivoting=False`` a vanishing pivot makes the call return None,
    which callers treat as a degenerate node.
    """
    a = [list(r) for r in M]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            if not pivoting:
                return None
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        p = a[k][k]
        rk = a[k]
        for i in range(k + 1, n):
            ri = a[i]
            f = ri[k]
            for j in range(k + 1, n):
                ri[j] = (p * ri[j] - f * rk[j]) // prev
        prev = p
    return sign * a[n - 1][n - 1]


def bareiss_leading(M):
    """Leading principal minors of an integer matrix without pivoting.

    Returns ``(minors, reduced)`` where ``minors[k]`` is the (k+1)-th
    leading minor and ``reduced`` the fully eliminated array (entry
    ``reduced[i][j]`` for j > i holds the minor of rows 0..i and columns
    0..i-1 plus j).  Returns None if a pivot other than the last vanishes.
    """
    a = [list(r) for r in M]
    n = len(a)
    prev = 1
    minors = []
    for k in range(n):
        p = a[k][k]
        minors.append(p)
        if k == n - 1:
            break
        if p == 0:
            return None
        rk = a[k]
        for i in range(k + 1, n):
            ri = a[i]
            f = ri[k]
            for j in range(k + 1, n):
                ri[j] = (p * ri[j] - f * rk[j]) // prev
        prev = p
    return minors, a


def _exquo(a, b):
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        # entries may be rationals that happen to be integral
        return _norm(Fraction(a, b)) if r else q
    if isinstance(a, (int, Fraction)) and isinstance(b, (int, Fraction)):
        return _norm(Fraction(a) / b)
    return a.exquo(b)


def _is_zero(x) -> bool:
    return x == 0 if isinstance(x, (int, Fraction)) else x.is_zero()


def det_bareiss(M):
    """Exact determinant of a square matrix whose entries are ints,
    Fractions, UniPoly or MPoly (one type per call)."""
    a = [list(r) for r in M]
    n = len(a)
    if n == 0:
        return 1
    sample = next((x for r in a for x in r if not isinstance(x, (int, Fraction))), None)
    if sample is not None:
        a = [[x if not isinstance(x, (int, Fraction)) else sample.constant(x) for x in r] for r in a]
    sign = 1
    prev = None
    for k in range(n - 1):
        if _is_zero(a[k][k]):
            for i in range(k + 1, n):
                if not _is_zero(a[i][k]):
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return a[0][0] * 0
        p = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                t = p * a[i][j] - a[i][k] * a[k][j]
                a[i][j] = t if prev is None else _exquo(t, prev)
        prev = p
    d = a[n - 1][n - 1]
    return d if sign > 0 else -d


def _row_scale_to_int(row):
    den = 1
    for c in row:
        den = ilcm(den, c.denominator)
    return den, [c.numerator * (den // c.denominator) for c in row]


def det_interp(M, degree_bound: int | None = None, extra_nodes: int = 1) -> "UniPoly":
    """Determinant of a matrix of UniPoly entries (one variable) by
    evaluation at consecutive integers and interpolation.

    The default bound is the sum of row-wise maximal degrees.  Nodes where
    a pivot vanishes are skipped.  ``extra_nodes`` additional nodes check
    the interpolant.
    """
    n = len(M)
    var = next((x.var for r in M for x in r if isinstance(x, UniPoly)), "z")
    P = [[x if isinstance(x, UniPoly) else UniPoly.const(x, var) for x in r] for r in M]
    # clear denominators row by row, det scales by the product
    scale = Fraction(1)
    rows = []
    for r in P:
        den = 1
        for x in r:
            for c in x.coeffs:
                den = ilcm(den, c.denominator)
        scale /= den
        rows.append([[int(c * den) for c in x.low] for x in r])
    if degree_bound is None:
        degree_bound = sum(max((len(x) - 1 for x in r), default=0) for r in rows)
    degree_bound = max(degree_bound, 0)
    need = degree_bound + 1 + extra_nodes
    nodes, vals = [], []
    x = 0
    misses = 0
    while len(nodes) < need:
        num = [[zp_eval(e, x) for e in r] for r in rows]
        v = bareiss_int(num, pivoting=misses > 4 * need)
        if v is None:
            misses += 1
        else:
            nodes.append(x)
            vals.append(v)
        x += 1
    coeffs = interpolate(nodes[:degree_bound + 1], vals[:degree_bound + 1])
    for xn, vn in zip(nodes[degree_bound + 1:], vals[degree_bound + 1:]):
        if zp_eval(coeffs, xn) != vn:
            raise ArithmeticError("determinant degree bound violated")
    return UniPoly.from_low([Fraction(c) * scale for c in coeffs], var)


# ---------------------------------------------------------------------------
# univariate polynomials

class UniPoly:
    """Dense univariate polynomial over Q, coefficients highest degree first."""

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs: Iterable = (), var: str = "z"):
        cs = [as_rat(c) for c in coeffs]
        i = 0
        while i < len(cs) and cs[i] == 0:
            i += 1
        self.coeffs = tuple(cs[i:])
        self.var = var

    @classmethod
    def from_low(cls, low: Iterable, var: str = "z") -> "UniPoly":
        return cls(list(low)[::-1], var)

    @classmethod
    def const(cls, c, var: str = "z") -> "UniPoly":
        return cls([c], var)

    def constant(self, c) -> "UniPoly":
        return UniPoly([c], self.var)

    @property
    def low(self) -> list:
        return list(self.coeffs[::-1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def coeff(self, k: int) -> Fraction:
        d = self.degree
        return self.coeffs[d - k] if 0 <= k <= d else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x):
        r = 0 * x
        for c in self.coeffs:
            r = r * x + c
        return r

    def eval_mp(self, x):
        """Horner evaluation for mpmath numbers (coefficients converted)."""
        import mpmath
        r = mpmath.mpf(0) * x
        for c in self.coeffs:
            r = r * x + mpmath.mpf(c.numerator) / c.denominator
        return r

    def _lift(self, other):
        if isinstance(other, UniPoly):
            return other
        return UniPoly.const(other, self.var)

    def __add__(self, other):
        o = self._lift(other)
        a, b = self.low, o.low
        if len(a) < len(b):
            a, b = b, a
        r = list(a)
        for i, c in enumerate(b):
            r[i] += c
        return UniPoly.from_low(r, self.var)

    __radd__ = __add__

    def __neg__(self):
        return UniPoly([-c for c in self.coeffs], self.var)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, UniPoly):
            c = as_rat(other)
            return UniPoly([c * x for x in self.coeffs], self.var)
        a, b = self.low, other.low
        if not a or not b:
            return UniPoly((), self.var)
        r = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    r[i + j] += x * y
        return UniPoly.from_low(r, self.var)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        r = UniPoly.const(1, self.var)
        for _ in range(k):
            r = r * self
        return r

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == ((as_rat(other),) if other else ())
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __divmod__(self, other):
        o = self._lift(other)
        if o.is_zero():
            raise ZeroDivisionError
        r = self.low
        d = o.degree
        lc = o.lc
        bl = o.low
        q = [Fraction(0)] * max(0, len(r) - d)
        for k in range(len(r) - 1 - d, -1, -1):
            c = r[k + d] / lc
            q[k] = c
            if c:
                for i in range(d + 1):
                    r[k + i] -= c * bl[i]
        return UniPoly.from_low(q, self.var), UniPoly.from_low(r[:d], self.var)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exquo(self, other):
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError("inexact division")
        return q

    def diff(self) -> "UniPoly":
        d = self.degree
        return UniPoly([c * (d - i) for i, c in enumerate(self.coeffs[:-1])], self.var)

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        return self * (1 / self.lc)

    def int_form(self) -> tuple[Fraction, list]:
        """``(scale, ints)`` with self = scale * ints, ints primitive lowest
        first with a positive leading coefficient."""
        return zp_from_fractions(self.low)

    def primitive(self) -> "UniPoly":
        return UniPoly.from_low(self.int_form()[1], self.var)

    def compose_scale(self, c) -> "UniPoly":
        """p(c*x)."""
        c = as_rat(c)
        return UniPoly.from_low([a * c ** i for i, a in enumerate(self.low)], self.var)

    def __repr__(self):
        return f"UniPoly({self}, var={self.var!r})"

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        d = self.degree
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            e = d - i
            mon = "" if e == 0 else (self.var if e == 1 else f"{self.var}^{e}")
            s = str(abs(c)) if (abs(c) != 1 or not mon) else ""
            term = s + ("*" if s and mon else "") + mon
            parts.append(("-" if c < 0 else "+") + " " + term)
        out = " ".join(parts)
        return out[2:] if out.startswith("+") else "-" + out[2:]


def gcd(p: UniPoly, q: UniPoly) -> UniPoly:
    """Monic gcd over Q."""
    if p.is_zero():
        return q.monic()
    if q.is_zero():
        return p.monic()
    g = zp_gcd(p.int_form()[1], q.int_form()[1])
    return UniPoly.from_low(g, p.var).monic()


def sylvester(p: UniPoly, q: UniPoly) -> list[list[Fraction]]:
    m, n = p.degree, q.degree
    size = m + n
    rows = []
    for i in range(n):
        rows.append([Fraction(0)] * i + list(p.coeffs) + [Fraction(0)] * (size - m - 1 - i))
    for i in range(m):
        rows.append([Fraction(0)] * i + list(q.coeffs) + [Fraction(0)] * (size - n - 1 - i))
    return rows


def resultant(p: UniPoly, q: UniPoly) -> Fraction:
    if p.degree < 0 or q.degree < 0:
        return Fraction(0)
    if p.degree == 0 and q.degree == 0:
        return Fraction(1)
    rows = sylvester(p, q)
    scale = Fraction(1)
    ints = []
    for r in rows:
        den, ir = _row_scale_to_int(r)
        scale /= den
        ints.append(ir)
    return bareiss_int(ints) * scale


def discriminant_direct(p: UniPoly) -> Fraction:
    """Classical discriminant a0^(2N-2) prod (x_i - x_j)^2 via the resultant
    of p and p'."""
    N = p.degree
    if N < 2:
        raise DegreeTooLow(f"degree {N} has no discriminant")
    sign = -1 if (N * (N - 1) // 2) % 2 else 1
    return sign * resultant(p, p.diff()) / p.lc


def power_sums(low: Sequence, count: int) -> list[Fraction]:
    """Newton sums s_0..s_{count-1} of a polynomial given lowest-first."""
    a = [Fraction(c) for c in reversed(low)]
    N = len(a) - 1
    s = [Fraction(N)]
    for k in range(1, count):
        acc = k * a[k] if k <= N else Fraction(0)
        for j in range(1, min(k - 1, N) + 1):
            acc += a[j] * s[k - j]
        s.append(-acc / a[0])
    return s


def hankel(s: Sequence, size: int) -> list[list]:
    return [[s[i + j] for j in range(size)] for i in range(size)]


def discriminant_hankel(p: UniPoly) -> Fraction:
    """a0^(2N-2) times the Hankel determinant of Newton sums."""
    N = p.degree
    if N < 2:
        raise DegreeTooLow(f"degree {N} has no discriminant")
    s = power_sums(p.low, 2 * N - 1)
    return p.lc ** (2 * N - 2) * det_bareiss(hankel(s, N))


# ---------------------------------------------------------------------------
# sparse multivariate polynomials

class MPoly:
    """Sparse polynomial over Q.  ``terms`` maps exponent tuples to
    coefficients (ints where possible)."""

    __slots__ = ("terms", "vars")

    def __init__(self, terms: dict | None = None, vars: Sequence[str] = ("lam", "z")):
        self.vars = tuple(vars)
        self.terms = {tuple(e): _norm(c) for e, c in (terms or {}).items() if c}

    def constant(self, c) -> "MPoly":
        return MPoly({(0,) * len(self.vars): c}, self.vars)

    @classmethod
    def var(cls, name: str, vars: Sequence[str]) -> "MPoly":
        e = [0] * len(vars)
        e[list(vars).index(name)] = 1
        return cls({tuple(e): 1}, vars)

    def is_zero(self) -> bool:
        return not self.terms

    def _lift(self, other):
        if isinstance(other, MPoly):
            if other.vars != self.vars:
                raise ValueError("variable mismatch")
            return other
        return self.constant(as_rat(other))

    def __add__(self, other):
        o = self._lift(other)
        t = dict(self.terms)
        for e, c in o.terms.items():
            t[e] = t.get(e, 0) + c
        return MPoly(t, self.vars)

    __radd__ = __add__

    def __neg__(self):
        return MPoly({e: -c for e, c in self.terms.items()}, self.vars)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            c = as_rat(other)
            return MPoly({e: v * c for e, v in self.terms.items()}, self.vars)
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        return MPoly(t, self.vars)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        r = self.constant(1)
        for _ in range(k):
            r = r * self
        return r

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self.vars == other.vars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == self.constant(other)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def leading(self):
        e = max(self.terms)
        return e, self.terms[e]

    def exquo(self, other: "MPoly") -> "MPoly":
        """Exact division; raises ArithmeticError if other does not divide."""
        if other.is_zero():
            raise ZeroDivisionError
        eb, cb = other.leading()
        r = MPoly(self.terms, self.vars)
        q: dict = {}
        while r.terms:
            er, cr = r.leading()
            d = tuple(x - y for x, y in zip(er, eb))
            if min(d) < 0:
                raise ArithmeticError("inexact division")
            c = _norm(Fraction(cr) / cb)
            q[d] = c
            r = r - MPoly({d: c}, self.vars) * other
        return MPoly(q, self.vars)

    def degree(self, var: str | int) -> int:
        i = var if isinstance(var, int) else self.vars.index(var)
        return max((e[i] for e in self.terms), default=-1)

    def diff(self, var: str) -> "MPoly":
        i = self.vars.index(var)
        t = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                t[tuple(f)] = c * e[i]
        return MPoly(t, self.vars)

    def subs(self, **values) -> "MPoly":
        """Substitute exact values for some variables (result keeps the
        remaining variables)."""
        idx = {self.vars.index(k): as_rat(v) for k, v in values.items()}
        keep = [i for i in range(len(self.vars)) if i not in idx]
        t: dict = {}
        for e, c in self.terms.items():
            v = Fraction(c)
            for i, x in idx.items():
                v *= x ** e[i]
            k = tuple(e[i] for i in keep)
            t[k] = t.get(k, 0) + v
        return MPoly(t, [self.vars[i] for i in keep])

    def __call__(self, *point):
        r = 0
        for e, c in self.terms.items():
            t = c
            for x, k in zip(point, e):
                if k:
                    t = t * x ** k
            r = r + t
        return r

    def coeff_list(self, var: str) -> list["MPoly"]:
        """Coefficients (lowest first) with respect to ``var``."""
        i = self.vars.index(var)
        rest = [v for j, v in enumerate(self.vars) if j != i]
        out = [dict() for _ in range(self.degree(i) + 1)]
        for e, c in self.terms.items():
            out[e[i]][tuple(x for j, x in enumerate(e) if j != i)] = c
        return [MPoly(t, rest) for t in out]

    def to_unipoly(self) -> UniPoly:
        if len(self.vars) != 1:
            raise ValueError("not univariate")
        d = self.degree(0)
        low = [Fraction(0)] * (d + 1)
        for (k,), c in self.terms.items():
            low[k] = Fraction(c)
        return UniPoly.from_low(low, self.vars[0])

    def __repr__(self):
        return f"MPoly({self}, vars={self.vars})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mon = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(self.vars, e) if k)
            s = str(abs(c)) if (abs(c) != 1 or not mon) else ""
            parts.append(("-" if c < 0 else "+") + " " + s + ("*" if s and mon else "") + mon)
        out = " ".join(parts)
        return out[2:] if out.startswith("+") else "-" + out[2:]


BiPoly = MPoly


def bipoly(terms: dict) -> MPoly:
    """Polynomial in (lam, z) from a {(i, j): coeff} map."""
    return MPoly(terms, ("lam", "z"))


def rat_matrix(rows) -> tuple[tuple[Fraction, ...], ...]:
    """Validate and convert a square matrix to Fractions."""
    M = tuple(tuple(as_rat(x) for x in r) for r in rows)
    n = len(M)
    if n == 0 or any(len(r) != n for r in M):
        raise ValueError("matrix must be square and nonempty")
    return M


def common_denominator(M) -> int:
    d = 1
    for r in M:
        for x in r:
            d = ilcm(d, x.denominator)
    return d


def mat_mul(A, B):
    n, m, p = len(A), len(B), len(B[0])
    return [[sum(A[i][k] * B[k][j] for k in range(m)) for j in range(p)] for i in range(n)]


def transpose(A):
    return [list(r) for r in zip(*A)]


def charpoly(A) -> UniPoly:
    """Characteristic polynomial det(xI - A) by the Berkowitz-free route of
    interpolating integer determinants."""
    M = rat_matrix(A)
    n = len(M)
    q = common_denominator(M)
    Ai = [[int(x * q) for x in r] for r in M]
    nodes = list(range(n + 1))
    vals = []
    for t in nodes:
        vals.append(bareiss_int([[(t if i == j else 0) - Ai[i][j] for j in range(n)] for i in range(n)]))
    low = interpolate(nodes, vals)       # det(tI - qA) as polynomial in t
    # det(xI - A) = q^-n det(qx I - qA)
    return UniPoly.from_low([Fraction(c) * Fraction(q) ** (k - n) for k, c in enumerate(low)], "x")
