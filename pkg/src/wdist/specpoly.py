"""Distance polynomials of a real matrix.

For a square rational matrix A the bivariate polynomial

    Phi(lam, z) = det[(lam I - A)(lam I - A)^T - z I]

is the characteristic polynomial of W = [[A^T, sqrt(z) I], [sqrt(z) I, A]].
Its discriminant in lam, divided by z^n, is the distance polynomial F(z)
whose least admissible positive zero is the squared distance to the
matrices with a multiple eigenvalue.

Rational matrices are scaled by the common denominator q to an integer
matrix Ai = q A.  All heavy work is done on Ai with plain integers and the
results are rescaled exactly:

    Phi_A(lam, z) = q^(-2n) Phi_Ai(q lam, q^2 z),
    s_j^A(z)      = q^(-j) s_j^Ai(q^2 z).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional

from .errors import IdenticallyZero, InputDefective, NotASquare
from .ratpoly import (MPoly, UniPoly, bareiss_int, bareiss_leading, bipoly,
                      charpoly, common_denominator, discriminant_direct,
                      interpolate, rat_matrix, zp_add, zp_eval, zp_mul,
                      zp_scale, zp_sqf, zp_trim)

NORMAL = "NORMAL"
SQRT_PHI = "SQRT_PHI"


def integer_scaled(A):
    """Return (q, Ai) with Ai = q*A an integer matrix."""
    M = rat_matrix(A)
    q = common_denominator(M)
    return q, [[int(x * q) for x in r] for r in M]


def _matmul(X, Y):
    cols = list(zip(*Y))
    return [[sum(a * b for a, b in zip(r, c)) for c in cols] for r in X]


def _phi_int_table(Ai):
    """Phi for an integer matrix as a list over lam-degree of integer
    z-polynomials (lowest first), by two-dimensional interpolation."""
    n = len(Ai)
    lam_nodes = list(range(2 * n + 1))
    z_nodes = list(range(n + 1))
    per_lam = []
    for t in lam_nodes:
        L = [[(t if i == j else 0) - Ai[i][j] for j in range(n)] for i in range(n)]
        G = _matmul(L, [list(r) for r in zip(*L)])
        vals = []
        for z in z_nodes:
            vals.append(bareiss_int([[G[i][j] - (z if i == j else 0) for j in range(n)] for i in range(n)]))
        per_lam.append(interpolate(z_nodes, vals))
    table = []
    for k in range(n + 1):
        vals = [row[k] if k < len(row) else 0 for row in per_lam]
        table.append(interpolate(lam_nodes, vals))
    # table[k] holds the lam-polynomial multiplying z^k; transpose it
    out = [[0] * (n + 1) for _ in range(2 * n + 1)]
    for k, lp in enumerate(table):
        for i, c in enumerate(lp):
            out[i][k] = int(c)
    return [zp_trim(r) for r in out]


def _table_to_bipoly(table, q, n) -> MPoly:
    terms = {}
    for i, zp in enumerate(table):
        for j, c in enumerate(zp):
            if c:
                terms[(i, j)] = Fraction(c) * Fraction(q) ** (i + 2 * j - 2 * n)
    return bipoly(terms)


def build_phi(A) -> MPoly:
    """Phi(lam, z) with exact rational coefficients."""
    q, Ai = integer_scaled(A)
    return _table_to_bipoly(_phi_int_table(Ai), q, len(Ai))


def phi_lam_coeffs(phi: MPoly) -> list[UniPoly]:
    """Coefficients of Phi with respect to lam (lowest first) as z-polynomials."""
    return [c.to_unipoly() for c in phi.coeff_list("lam")]


# ---------------------------------------------------------------------------
# Newton sums

def _trace_sums_int(Ai, count):
    """tr(W^j), j < count, for an integer matrix, as integer z-polynomials.

    W = M + w J with M = diag(A^T, A) and J the block swap.  Moving every J
    to the left gives W^j = sum_k w^k J^k P_{j,k} with block diagonal
    P_{j,k} = diag(X, Y) and

        X_{j+1,k} = X_{j,k} A^T + Y_{j,k-1},   Y_{j+1,k} = Y_{j,k} A + X_{j,k-1}.

    Only even k contribute to the trace, as z^(k/2) (tr X + tr Y).
    """
    n = len(Ai)
    AT = [list(r) for r in zip(*Ai)]
    eye = [[int(i == j) for j in range(n)] for i in range(n)]
    colsA = list(zip(*Ai))
    colsAT = list(zip(*AT))

    def mul(X, cols):
        return [[sum(a * b for a, b in zip(r, c)) for c in cols] for r in X]

    def add(X, Y):
        return [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(X, Y)]

    def tr(X):
        return sum(X[i][i] for i in range(n))

    cur = {0: (eye, eye)}
    sums = []
    for j in range(count):
        poly = [0] * (j // 2 + 1)
        for k, (X, Y) in cur.items():
            if k % 2 == 0:
                poly[k // 2] += tr(X) + tr(Y)
        sums.append(zp_trim(poly))
        if j == count - 1:
            break
        nxt = {}
        for k in range(j + 2):
            X = Y = None
            if k in cur:
                X = mul(cur[k][0], colsAT)
                Y = mul(cur[k][1], colsA)
            if k - 1 in cur:
                Xp, Yp = cur[k - 1]
                X = Yp if X is None else add(X, Yp)
                Y = Xp if Y is None else add(Y, Xp)
            nxt[k] = (X, Y)
        cur = nxt
    return sums


def _recursive_sums_int(table, count):
    """Newton sums of a monic (in lam) integer polynomial from its
    coefficients.  ``table`` lists lam-coefficients lowest first."""
    N = len(table) - 1
    a = table[::-1]            # a[0] = 1
    s = [[N]]
    for k in range(1, count):
        acc = zp_scale(a[k], k) if k <= N else []
        for j in range(1, min(k - 1, N) + 1):
            if a[j] and s[k - j]:
                acc = zp_add(acc, zp_mul(a[j], s[k - j]))
        s.append([-c for c in acc])
    return s


@dataclass
class NewtonSums:
    """s_0 .. s_{2N-2} of a monic polynomial in lam with z-polynomial
    coefficients, kept on the integer-scaled matrix (scale q)."""
    q: int
    N: int
    ints: list                 # integer z-polynomials for the scaled matrix

    def poly(self, j: int) -> UniPoly:
        q = Fraction(self.q)
        return UniPoly.from_low([c * q ** (2 * k - j) for k, c in enumerate(self.ints[j])], "z")

    @cached_property
    def polys(self) -> list[UniPoly]:
        return [self.poly(j) for j in range(len(self.ints))]

    def at_int(self, t: int) -> list[int]:
        """Scaled sums s_j^Ai(t) at an integer node of the scaled problem."""
        return [zp_eval(p, t) for p in self.ints]

    def hankel_int(self, t: int):
        s = self.at_int(t)
        N = self.N
        return [[s[i + j] for j in range(N)] for i in range(N)]

    def hankel_at(self, z0: Fraction):
        """Integer Hankel matrix proportional to the A-scale one at z0.

        Returns (H, row_exp, col_exp, v): entry (i, j) equals
        v^(row_exp[i] + col_exp[j]) q^(i + j) s_{i+j}^A(z0), where v is the
        denominator of z0.
        """
        z0 = Fraction(z0)
        t_num, v = z0.numerator * self.q ** 2, z0.denominator
        N = self.N
        sig = []
        for m in range(2 * N - 1):
            p = self.ints[m]
            # v^(m//2) * s_m^Ai(t_num / v)
            r = 0
            vp = 1
            deg = len(p) - 1
            for c in reversed(p):
                r = r * t_num + c * vp
                vp *= v
            sig.append(r * v ** (m // 2 - deg) if deg >= 0 else 0)
        ea = [(i + 1) // 2 for i in range(N)]
        H = [[sig[i + j] * v ** (ea[i] + ea[j] - (i + j) // 2) for j in range(N)] for i in range(N)]
        return H, ea, ea, v


def newton_sums(A, method: str = "trace") -> NewtonSums:
    """Newton sums of Phi in lam, s_j(z) = tr(W^j), for j = 0..4n-2.

    ``method="recursion"`` uses the classical recursion on the coefficients
    of Phi instead; both give identical results.
    """
    q, Ai = integer_scaled(A)
    n = len(Ai)
    count = 4 * n - 1
    if method == "trace":
        ints = _trace_sums_int(Ai, count)
    elif method == "recursion":
        ints = _recursive_sums_int(_phi_int_table(Ai), count)
    else:
        raise ValueError(method)
    return NewtonSums(q, 2 * n, ints)


def newton_sums_of(poly_lam: MPoly) -> list[UniPoly]:
    """Newton sums of an arbitrary monic-in-lam polynomial (s_0..s_{2N-2})."""
    coeffs = phi_lam_coeffs(poly_lam)
    N = len(coeffs) - 1
    if coeffs[-1] != 1:
        raise ValueError("polynomial must be monic in lam")
    a = coeffs[::-1]
    s = [UniPoly.const(N)]
    for k in range(1, 2 * N - 1):
        acc = a[k] * k if k <= N else UniPoly()
        for j in range(1, min(k - 1, N) + 1):
            acc = acc + a[j] * s[k - j]
        s.append(-acc)
    return s


# ---------------------------------------------------------------------------
# Hankel minors

@dataclass
class HankelMinors:
    """Leading principal minors S_1..S_N of the Hankel matrix of Newton sums.

    Exact values at a rational point come from one fraction-free
    elimination.  The minors as polynomials are interpolated on demand.
    """
    sums: NewtonSums
    _polys: Optional[list] = field(default=None, repr=False)

    @property
    def N(self) -> int:
        return self.sums.N

    def at(self, z0) -> list[Fraction]:
        H, ra, ca, v = self.sums.hankel_at(Fraction(z0))
        q = Fraction(self.sums.q)
        N = self.N
        res = bareiss_leading(H)
        if res is None:
            minors = [bareiss_int([r[:k] for r in H[:k]]) for k in range(1, N + 1)]
        else:
            minors = res[0]
        out = []
        e = 0
        qe = 0
        for k in range(N):
            e += ra[k] + ca[k]
            qe += 2 * k
            out.append(Fraction(minors[k]) / (Fraction(v) ** e * q ** qe))
        return out

    def polys(self) -> list[UniPoly]:
        if self._polys is None:
            N = self.N
            bound = N * (N - 1) // 2
            nodes, vals = [], []
            t = 1
            while len(nodes) < bound + 1:
                H = self.sums.hankel_int(t)
                res = bareiss_leading(H)
                if res is not None and all(res[0][:-1]):
                    nodes.append(t)
                    vals.append(res[0])
                t += 1
            q = Fraction(self.sums.q)
            out = []
            for k in range(N):
                bk = (k + 1) * k // 2
                low = interpolate(nodes[:bk + 1], [v[k] for v in vals[:bk + 1]])
                # S_k^Ai(q^2 z) = q^(k(k-1)) S_k^A(z), k = size
                out.append(UniPoly.from_low([Fraction(c) * q ** (2 * i) / q ** (k * (k + 1))
                                             for i, c in enumerate(low)], "z"))
            self._polys = out
        return self._polys


def hankel_minors(s: NewtonSums) -> HankelMinors:
    return HankelMinors(s)


# ---------------------------------------------------------------------------
# the distance equation

@dataclass
class DistanceEquation:
    """F(z) together with the data needed to recover lam from a zero."""
    F: UniPoly
    n: int
    mode: str
    sums: NewtonSums                 # Newton sums of Phi (or of G in SQRT_PHI mode)
    leading_check: Optional[bool]
    lam_poly: MPoly                  # Phi or its square root / radical
    exact_square: bool = True
    z_power: int = 0                 # power of z divided out of the discriminant

    @property
    def N(self) -> int:
        return self.sums.N

    @cached_property
    def int_form(self) -> list:
        """Primitive integer coefficients of F, lowest first."""
        return self.F.int_form()[1]


def _disc_from_sums(sums: NewtonSums, degree_bound: int):
    """Integer polynomial S_N^Ai(t) by interpolation at integer nodes with
    one verification node.  Returns None when verification fails."""
    nodes, vals = [], []
    t = 1
    need = degree_bound + 2
    tries = 0
    while len(nodes) < need:
        res = bareiss_leading(sums.hankel_int(t))
        tries += 1
        if res is not None:
            nodes.append(t)
            vals.append(res[0][-1])
        elif tries > 20 * need:
            # leading minors vanish identically: fall back to pivoting
            nodes.append(t)
            vals.append(bareiss_int(sums.hankel_int(t)))
        t += 1
    low = interpolate(nodes[:-1], vals[:-1])
    if zp_eval(low, nodes[-1]) != vals[-1]:
        return None
    return [int(c) for c in low]


def _discriminant_int(sums: NewtonSums, weighted_bound: int, fast_bound: int):
    low = _disc_from_sums(sums, fast_bound)
    if low is None:
        low = _disc_from_sums(sums, weighted_bound)
    return low


def _rescale_disc(low, q, N, shift=0):
    """D^A(z) = q^(-N(N-1)) D^Ai(q^2 z); then divide by z^shift."""
    qq = Fraction(q)
    coeffs = [Fraction(c) * qq ** (2 * k - N * (N - 1)) for k, c in enumerate(low)]
    return UniPoly.from_low(coeffs[shift:], "z")


def is_defective(A) -> bool:
    """True if A has a multiple eigenvalue."""
    f = charpoly(A)
    if f.degree < 2:
        return False
    return discriminant_direct(f) == 0


def distance_equation(A, fallback: bool = True) -> DistanceEquation:
    """F(z) = D_lam(Phi)/z^n computed as the Hankel determinant S_{2n}(z).

    If D_lam(Phi) vanishes identically the square-root fallback is used
    (or IdenticallyZero is raised when ``fallback`` is false).
    """
    M = rat_matrix(A)
    n = len(M)
    if is_defective(M):
        raise InputDefective("matrix already has a multiple eigenvalue")
    q, Ai = integer_scaled(M)
    table = _phi_int_table(Ai)
    sums = NewtonSums(q, 2 * n, _trace_sums_int(Ai, 4 * n - 1))
    N = 2 * n
    low = _discriminant_int(sums, N * (N - 1) // 2, n * n)
    if not low:
        if not fallback:
            raise IdenticallyZero("discriminant of Phi vanishes identically")
        return sqrt_phi_fallback(M, strict=False)
    if any(low[:n]):
        raise ArithmeticError("discriminant of Phi not divisible by z^n")
    F = _rescale_disc(low, sums.q, N, shift=n)
    check = None
    if F.degree == n * (n - 1):
        S = [[M[i][j] + M[j][i] for j in range(n)] for i in range(n)]
        fs = charpoly(S)
        dS = discriminant_direct(fs) if n > 1 else Fraction(1)
        check = F.lc == 4 ** n * dS ** 2
    phi = _table_to_bipoly(table, q, n)
    return DistanceEquation(F, n, NORMAL, sums, check, phi, True, n)


# ---------------------------------------------------------------------------
# degenerate case: D_lam(Phi) identically zero

def _monic_sqf_at(table, z0: int):
    """Square-free factors of Phi(lam, z0) as monic rational lists."""
    lam_coeffs = [zp_eval(c, z0) for c in table]
    out = []
    for f, m in zp_sqf(lam_coeffs):
        lc = Fraction(f[-1])
        out.append(([Fraction(c) / lc for c in f], m))
    return out


def _sqf_bivariate(table, zdeg):
    """Square-free decomposition of a monic-in-lam integer table over Q(z).

    Specialise at integer z, keep nodes with the generic pattern, and
    interpolate each factor's coefficients.  The product is checked
    exactly afterwards.
    """
    samples = {}
    patterns: dict = {}
    z0 = 0
    need = zdeg + 3
    while True:
        fac = _monic_sqf_at(table, z0)
        pat = tuple((len(f) - 1, m) for f, m in fac)
        samples[z0] = fac
        patterns.setdefault(pat, []).append(z0)
        z0 += 1
        # the generic pattern has the most distinct roots
        best = max(patterns, key=lambda p: sum(d for d, _ in p))
        if len(patterns[best]) >= need:
            break
    nodes = patterns[best][:need]
    factors = []
    for idx, (d, m) in enumerate(best):
        lam_low = []
        for k in range(d + 1):
            vals = [samples[t][idx][0][k] for t in nodes]
            c = interpolate(nodes, vals)
            lam_low.append(c)
        factors.append((lam_low, m))
    return factors


def _bi_from_factor(lam_low) -> MPoly:
    terms = {}
    for i, zl in enumerate(lam_low):
        for j, c in enumerate(zl):
            if c:
                terms[(i, j)] = c
    return bipoly(terms)


def sqrt_phi_fallback(A, strict: bool = True) -> DistanceEquation:
    """Distance equation from G with Phi = G^2 (or from the square-free
    part of Phi when Phi is not a perfect square and ``strict`` is off)."""
    M = rat_matrix(A)
    n = len(M)
    q, Ai = integer_scaled(M)
    table = _phi_int_table(Ai)
    factors = _sqf_bivariate(table, n)
    phi_i = _table_to_bipoly(table, 1, 0)
    check = bipoly({(0, 0): 1})
    for f, m in factors:
        check = check * _bi_from_factor(f) ** m
    if check != phi_i:
        raise ArithmeticError("square-free decomposition of Phi failed verification")
    exact = all(m % 2 == 0 for _, m in factors)
    if not exact and strict:
        raise NotASquare("Phi is not the square of a polynomial")
    G = bipoly({(0, 0): 1})
    for f, m in factors:
        G = G * _bi_from_factor(f) ** (m // 2 if exact else 1)
    # G is monic in lam with integer coefficients (Gauss lemma); get its sums
    glow = [c for c in G.coeff_list("lam")]
    gtable = []
    for c in glow:
        u = c.to_unipoly()
        gtable.append([int(x) for x in u.low])
    Ng = len(gtable) - 1
    sums_int = _recursive_sums_int(gtable, 2 * Ng - 1)
    sums = NewtonSums(q, Ng, sums_int)
    bound = Ng * (Ng - 1) // 2
    low = _discriminant_int(sums, bound, bound)
    if not low:
        raise IdenticallyZero("discriminant of the reduced polynomial vanishes")
    shift = 0
    while not low[shift]:
        shift += 1
    F = _rescale_disc(low, q, Ng, shift)
    Gq = _rescale_bipoly(gtable, q, Ng)
    return DistanceEquation(F, n, SQRT_PHI, sums, None, Gq, exact, shift)


def _rescale_bipoly(table, q, N) -> MPoly:
    """G_A(lam, z) = q^(-N) G_Ai(q lam, q^2 z) for a monic-in-lam table."""
    terms = {}
    for i, zp in enumerate(table):
        for j, c in enumerate(zp):
            if c:
                terms[(i, j)] = Fraction(c) * Fraction(q) ** (i + 2 * j - N)
    return bipoly(terms)


# ---------------------------------------------------------------------------
# closed forms for special matrices

def _subs_poly(f: UniPoly, x: MPoly) -> MPoly:
    r = x.constant(0)
    for c in f.coeffs:
        r = r * x + c
    return r


def special_form(A):
    """Recognise symmetric, orthogonal and skew-plus-scalar matrices and
    return ``(kind, Phi)`` with Phi built from characteristic polynomials,
    or None."""
    M = rat_matrix(A)
    n = len(M)
    T = [[M[j][i] for j in range(n)] for i in range(n)]
    lam = MPoly.var("lam", ("lam", "z"))
    z = MPoly.var("z", ("lam", "z"))
    if all(M[i][j] == T[i][j] for i in range(n) for j in range(n)):
        # prod[(lam - l_j)^2 - z] = f_A(lam - w) f_A(lam + w) with w^2 = z
        f = charpoly(M)
        lw = ("lam", "w")
        L = MPoly.var("lam", lw)
        W = MPoly.var("w", lw)
        prod = _subs_poly(f, L - W) * _subs_poly(f, L + W)
        terms = {}
        for (i, k), c in prod.terms.items():
            if k % 2:
                raise ArithmeticError("odd power of sqrt(z) survived")
            terms[(i, k // 2)] = c
        return "SYMMETRIC", bipoly(terms)
    S = [[M[i][j] + T[i][j] for j in range(n)] for i in range(n)]
    c = S[0][0] / 2
    if all(S[i][j] == (2 * c if i == j else 0) for i in range(n) for j in range(n)):
        K = [[M[i][j] - (c if i == j else 0) for j in range(n)] for i in range(n)]
        K2 = [[sum(K[i][k] * K[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        g = charpoly(K2)
        return "SKEW_SHIFT", _subs_poly(g, (lam - c) ** 2 - z)
    MT = [[sum(M[i][k] * T[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    if all(MT[i][j] == (1 if i == j else 0) for i in range(n) for j in range(n)):
        # det[(lam^2 + 1 - z) I - lam (A + A^T)] = lam^n f_S((lam^2 + 1 - z)/lam)
        fS = charpoly(S)
        y = lam * lam + 1 - z
        r = lam.constant(0)
        for k, ck in enumerate(fS.low):
            r = r + y ** k * lam ** (n - k) * ck
        return "ORTHOGONAL", r
    return None
