"""Distance to multiple-eigenvalue matrices under complex rank-one perturbations.

Theta(a, b, z) = det[((a+ib)I - A)((a-ib)I - A^T) - zI] is even in b; with
bb = b^2 it becomes Xi(a, bb, z).  Eliminating (a, bb) from
Xi = Xi_a = Xi_bb = 0 gives z^(n(n-1)/2) * Ftilde(z).

The elimination is done node by node: for each rational z0 a Groebner
basis of (Xi_a, Xi_bb) gives a monomial basis of the quotient ring, and the
matrix of multiplication by Xi in that basis (the Bezout-type matrix) has
determinant prod Xi(a_k, bb_k, z0) over the common zeros.  Those values are
interpolated in z.
"""
from __future__ import annotations

import concurrent.futures as cf
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import mpmath

from .errors import (ClusteredSingularValues, CofactorSingular, EliminationDegenerate,
                     NegativeB, SingularValueMismatch)
from .nearest import (DistanceReport, _dps, _pick_singular, mpq,
                      wilkinson_distance)
from .ratpoly import (MPoly, UniPoly, bareiss_int, det_bareiss, interpolate, rat_matrix,
                      resultant)
from .roots import RefinedRoot, isolate_real_roots, refine
from .specpoly import integer_scaled

REAL_BRANCH = "REAL_BRANCH"
COMPLEX_BRANCH = "COMPLEX_BRANCH"


# ---------------------------------------------------------------------------
# Gaussian integer determinants

def _gmul(x, y):
    return (x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def _gsub(x, y):
    return (x[0] - y[0], x[1] - y[1])


def _gdiv_exact(x, y):
    n = y[0] * y[0] + y[1] * y[1]
    re = x[0] * y[0] + x[1] * y[1]
    im = x[1] * y[0] - x[0] * y[1]
    if re % n or im % n:
        raise ArithmeticError("inexact Gaussian division")
    return (re // n, im // n)


def gaussian_det(M) -> tuple:
    """Determinant of a matrix over Z[i] (entries as (re, im) pairs)."""
    a = [list(r) for r in M]
    n = len(a)
    sign = 1
    prev = (1, 0)
    for k in range(n - 1):
        if a[k][k] == (0, 0):
            for i in range(k + 1, n):
                if a[i][k] != (0, 0):
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return (0, 0)
        p = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = _gdiv_exact(_gsub(_gmul(p, a[i][j]), _gmul(a[i][k], a[k][j])), prev)
        prev = p
    d = a[n - 1][n - 1]
    return (sign * d[0], sign * d[1])


def _theta_int_at(Ai, a, b, z):
    n = len(Ai)
    P = [[((a if i == j else 0) - Ai[i][j], b if i == j else 0) for j in range(n)] for i in range(n)]
    Q = [[((a if i == j else 0) - Ai[j][i], -b if i == j else 0) for j in range(n)] for i in range(n)]
    H = []
    for i in range(n):
        row = []
        for j in range(n):
            re = im = 0
            for k in range(n):
                x, y = P[i][k], Q[k][j]
                re += x[0] * y[0] - x[1] * y[1]
                im += x[0] * y[1] + x[1] * y[0]
            if i == j:
                re -= z
            row.append((re, im))
        H.append(row)
    d = gaussian_det(H)
    if d[1]:
        raise ArithmeticError("Hermitian determinant with nonzero imaginary part")
    return d[0]


# ---------------------------------------------------------------------------
# Theta and Xi

@dataclass
class ThetaPoly:
    """Theta in (a, b, z), its even form Xi in (a, bb, z) and the partials
    Xi_a and Xi_bb = Theta_b / b = 2 dXi/dbb."""
    n: int
    theta: MPoly
    xi: MPoly
    xi_a: MPoly
    xi_bb: MPoly

    def xi_at(self, z0) -> dict:
        """Xi(a, bb, z0) as {(i, j): Fraction}."""
        return _specialise(self.xi, Fraction(z0))

    def is_even_in_b(self) -> bool:
        return all(e[1] % 2 == 0 for e in self.theta.terms)


def _specialise(p: MPoly, z0: Fraction) -> dict:
    out: dict = {}
    for (i, j, k), c in p.terms.items():
        out[(i, j)] = out.get((i, j), 0) + Fraction(c) * z0 ** k
    return {e: c for e, c in out.items() if c}


def build_theta(A) -> ThetaPoly:
    """Exact Theta by interpolation of Hermitian determinants at integer
    points (a, b, z); i never enters the coefficients."""
    q, Ai = integer_scaled(A)
    n = len(Ai)
    a_nodes = list(range(2 * n + 1))
    b_nodes = list(range(n + 1))
    bb_nodes = [b * b for b in b_nodes]
    z_nodes = list(range(n + 1))
    # values[ia][ib] -> z-coefficients
    zc = [[interpolate(z_nodes, [_theta_int_at(Ai, a, b, z) for z in z_nodes])
           for b in b_nodes] for a in a_nodes]
    terms = {}
    for k in range(n + 1):
        bc = []
        for ia in range(len(a_nodes)):
            vals = [zc[ia][ib][k] if k < len(zc[ia][ib]) else 0 for ib in range(len(b_nodes))]
            bc.append(interpolate(bb_nodes, vals))
        for j in range(n + 1):
            vals = [bc[ia][j] if j < len(bc[ia]) else 0 for ia in range(len(a_nodes))]
            ac = interpolate(a_nodes, vals)
            for i, c in enumerate(ac):
                if c:
                    # undo A -> qA: coefficient times q^(i + 2j + 2k - 2n)
                    terms[(i, j, k)] = Fraction(c) * Fraction(q) ** (i + 2 * j + 2 * k - 2 * n)
    xi = MPoly(terms, ("a", "bb", "z"))
    theta = MPoly({(i, 2 * j, k): c for (i, j, k), c in terms.items()}, ("a", "b", "z"))
    return ThetaPoly(n, theta, xi, xi.diff("a"), xi.diff("bb") * 2)


# ---------------------------------------------------------------------------
# quotient ring machinery (Groebner bases bought from sympy)

@lru_cache(maxsize=None)
def _ring(names=("a", "bb")):
    from sympy import QQ
    from sympy.polys.orderings import grevlex
    from sympy.polys.rings import ring
    R, *_ = ring(",".join(names), QQ, grevlex)
    return R, QQ


def _to_ring(terms: dict, names=("a", "bb")):
    R, QQ = _ring(names)
    return R({e: QQ(c.numerator, c.denominator) for e, c in terms.items()})


def _frac(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


def _groebner(polys, names=("a", "bb")):
    from sympy.polys.groebnertools import groebner
    R, _ = _ring(names)
    return groebner(polys, R)


def _normal_set(G) -> Optional[list]:
    """Standard monomials of a zero-dimensional ideal, ordered by degree and
    then by decreasing power of the first variable (1, a, bb, a^2, ...)."""
    lms = [g.LM for g in G]
    pure_a = [m[0] for m in lms if m[1] == 0]
    pure_b = [m[1] for m in lms if m[0] == 0]
    if not pure_a or not pure_b:
        return None
    out = [(i, j) for i in range(min(pure_a)) for j in range(min(pure_b))
           if not any(i >= m[0] and j >= m[1] for m in lms)]
    out.sort(key=lambda m: (m[0] + m[1], -m[0]))
    return out


def multiplication_matrix(f, G, basis) -> list:
    """Rows: normal forms of m_j * f in the basis, via NF(x m f) = NF(x NF(m f))."""
    a, bb = f.ring.gens
    pos = {m: k for k, m in enumerate(basis)}
    nf = {}
    rows = []
    for m in basis:
        if m == (0, 0):
            r = f.rem(G)
        elif m[0] > 0 and (m[0] - 1, m[1]) in nf:
            r = (a * nf[(m[0] - 1, m[1])]).rem(G)
        else:
            r = (bb * nf[(m[0], m[1] - 1)]).rem(G)
        nf[m] = r
        row = [Fraction(0)] * len(basis)
        for mon, c in r.items():
            row[pos[mon]] = _frac(c)
        rows.append(row)
    return rows


def _scaled_int_rows(M):
    """Integer rows proportional to M's rows and the product of the factors."""
    out = []
    scale = Fraction(1)
    for r in M:
        den = 1
        for x in r:
            den = den * x.denominator // _gcd(den, x.denominator)
        out.append([int(x * den) for x in r])
        scale *= den
    return out, scale


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def _rat_det(M) -> Fraction:
    if not M:
        return Fraction(1)
    rows, scale = _scaled_int_rows(M)
    return Fraction(bareiss_int(rows)) / scale


@dataclass
class NodeData:
    z0: Fraction
    basis: list
    bezout: list       # multiplication matrix, rows indexed by basis
    det: Fraction


def bezout_at(theta: ThetaPoly, z0) -> NodeData:
    """Quotient basis and multiplication-by-Xi matrix at z = z0."""
    z0 = Fraction(z0)
    xi = theta.xi_at(z0)
    xa = _specialise(theta.xi_a, z0)
    xb = _specialise(theta.xi_bb, z0)
    G = _groebner([_to_ring(xa), _to_ring(xb)])
    basis = _normal_set(G)
    if basis is None:
        raise EliminationDegenerate("Xi_a = Xi_bb = 0 is not zero-dimensional", z=z0)
    B = multiplication_matrix(_to_ring(xi), G, basis)
    return NodeData(z0, basis, B, _rat_det(B))


def _node_worker(args):
    terms, z0 = args
    theta = _theta_from_terms(terms)
    nd = bezout_at(theta, z0)
    return nd.z0, nd.basis, nd.det


def _theta_from_terms(terms):
    xi = MPoly(terms, ("a", "bb", "z"))
    theta = MPoly({(i, 2 * j, k): c for (i, j, k), c in terms.items()}, ("a", "b", "z"))
    n = max((k for (_, _, k) in terms), default=0)
    return ThetaPoly(n, theta, xi, xi.diff("a"), xi.diff("bb") * 2)


# ---------------------------------------------------------------------------
# the eliminant

@dataclass
class ComplexDistanceEquation:
    """Ftilde with the data needed for recovery.

    ``bezout`` and ``cofactor_row`` are evaluated per z (the matrix is built
    exactly at any rational point, see bezout_at).  ``scale`` relates the
    determinant to Ftilde: det B(z) = scale * z^(n(n-1)/2) * Ftilde(z).
    """
    n: int
    f_tilde: UniPoly
    theta: ThetaPoly
    basis: list
    scale: Fraction
    nodes: list = field(default_factory=list)

    def bezout(self, z0) -> NodeData:
        return bezout_at(self.theta, z0)

    def cofactor_row(self, z0, row: Optional[int] = None):
        """Cofactors of the entries of one row of B(z0) (default: last)."""
        nd = self.bezout(z0)
        m = len(nd.basis)
        j = m - 1 if row is None else row
        return nd, [_cofactor(nd.bezout, j, k) for k in range(m)]


def _cofactor(B, j, k) -> Fraction:
    minor = [[x for c, x in enumerate(r) if c != k] for i, r in enumerate(B) if i != j]
    return (-1) ** (j + k) * _rat_det(minor)


def complex_distance_equation(A, jobs: int = 1, theta: Optional[ThetaPoly] = None) -> ComplexDistanceEquation:
    """Eliminate (a, bb) from Xi = Xi_a = Xi_bb = 0.

    Determinants of the multiplication matrix are taken at z = 1, 2, ...;
    nodes where the quotient has fewer than the generic number of points
    are skipped.  The z^(n(n-1)/2) factor is divided out exactly and the
    degree n(n-1)(n-2)/2 is confirmed at two extra nodes.
    """
    M = rat_matrix(A)
    n = len(M)
    theta = theta or build_theta(M)
    if n <= 2:
        return ComplexDistanceEquation(n, UniPoly([1], "z"), theta, [(0, 0)], Fraction(1))
    m = n * (n - 1) // 2
    deg = n * (n - 1) * (n - 2) // 2
    need = deg + 3
    terms = dict(theta.xi.terms)
    pts: list = []
    generic = None
    z = 1
    pool = cf.ProcessPoolExecutor(jobs) if jobs > 1 else None
    try:
        while len(pts) < need:
            batch = list(range(z, z + max(need - len(pts), 1)))
            z += len(batch)
            if pool:
                res = list(pool.map(_node_worker, [(terms, Fraction(x)) for x in batch]))
            else:
                res = [_node_worker((terms, Fraction(x))) for x in batch]
            for z0, basis, det in res:
                size = len(basis)
                if generic is None or size > len(generic):
                    if generic is not None:
                        pts = []
                    generic = basis
                if size == len(generic):
                    pts.append((z0, det / z0 ** m))
            if z > 20 * need:
                raise EliminationDegenerate("too few generic nodes")
    finally:
        if pool:
            pool.shutdown()
    if all(v == 0 for _, v in pts):
        raise EliminationDegenerate("eliminant vanishes identically")
    xs = [p[0] for p in pts[:deg + 1]]
    ys = [p[1] for p in pts[:deg + 1]]
    coeffs = interpolate(xs, ys)
    poly = UniPoly.from_low(coeffs, "z")
    for z0, v in pts[deg + 1:]:
        if poly(z0) != v:
            raise EliminationDegenerate("eliminant is not a polynomial of the expected degree", z=z0)
    # the divided values must extend to z = 0 consistently: det/z^m is a polynomial
    scale, ints = poly.int_form()
    if ints and ints[-1] < 0:
        ints = [-c for c in ints]
        scale = -scale
    ft = UniPoly.from_low(ints, "z")
    return ComplexDistanceEquation(n, ft, theta, generic, scale, xs)


# ---------------------------------------------------------------------------
# recovery of (a, bb)

@dataclass
class ABSolution:
    z: mpmath.mpf
    a: mpmath.mpf
    bb: mpmath.mpf
    b: mpmath.mpf
    residual: mpmath.mpf
    cofactor_row: int
    ratio_a: mpmath.mpf
    ratio_bb: mpmath.mpf


def _mp_eval3(p: MPoly, a, bb, z):
    r = mpmath.mpf(0)
    for (i, j, k), c in p.terms.items():
        r += mpq(Fraction(c)) * a ** i * bb ** j * z ** k
    return r


def recover_ab(cde: ComplexDistanceEquation, root, digits: int = 40) -> ABSolution:
    """(a, bb) at a real zero of Ftilde from cofactor ratios of B(z),
    then polished by Newton's method on Xi_a = Xi_bb = 0 at fixed z.

    The cofactors are computed exactly at a rational point within
    10^-(2 digits) of the zero.
    """
    dps = _dps(digits)
    if isinstance(root, RefinedRoot) and root.digits >= 2 * digits + 10:
        zr = root.exact if root.exact is not None else root.rational()
        zval = root.value
    else:
        rr = refine(root, 2 * digits + 10)
        zr = rr.exact if rr.exact is not None else rr.rational()
        zval = rr.value
    basis = cde.basis
    if (0, 0) not in basis or (1, 0) not in basis or (0, 1) not in basis:
        raise CofactorSingular("quotient basis lacks 1, a or bb", basis=basis)
    i1, ia, ib = basis.index((0, 0)), basis.index((1, 0)), basis.index((0, 1))
    nd = cde.bezout(zr)
    if len(nd.basis) != len(basis):
        raise CofactorSingular("quotient basis is not generic at this z")
    m = len(basis)
    chosen = None
    for j in [m - 1] + list(range(m - 1)):
        c1 = _cofactor(nd.bezout, j, i1)
        if c1 != 0:
            chosen = (j, c1, _cofactor(nd.bezout, j, ia), _cofactor(nd.bezout, j, ib))
            break
    if chosen is None:
        raise CofactorSingular("every cofactor of the constant column vanishes")
    j, c1, ca, cb = chosen
    with mpmath.workdps(dps):
        a0 = mpq(ca / c1)
        b0 = mpq(cb / c1)
        z = mpmath.mpf(zval)
        th = cde.theta
        xa, xb = th.xi_a, th.xi_bb
        xaa, xab = xa.diff("a"), xa.diff("bb")
        xba, xbb = xb.diff("a"), xb.diff("bb")
        a, bb = a0, b0
        for _ in range(100):
            f1 = _mp_eval3(xa, a, bb, z)
            f2 = _mp_eval3(xb, a, bb, z)
            j11, j12 = _mp_eval3(xaa, a, bb, z), _mp_eval3(xab, a, bb, z)
            j21, j22 = _mp_eval3(xba, a, bb, z), _mp_eval3(xbb, a, bb, z)
            det = j11 * j22 - j12 * j21
            if det == 0:
                break
            da = (f1 * j22 - f2 * j12) / det
            db = (j11 * f2 - j21 * f1) / det
            a, bb = a - da, bb - db
            if abs(da) + abs(db) <= mpmath.mpf(10) ** (-dps + 5) * (1 + abs(a) + abs(bb)):
                break
        res = (abs(_mp_eval3(th.xi, a, bb, z)) + abs(_mp_eval3(xa, a, bb, z))
               + abs(_mp_eval3(xb, a, bb, z)))
        drift = abs(a - a0) + abs(bb - b0)
        if drift > mpmath.mpf(10) ** (-digits // 2) * (1 + abs(a) + abs(bb)):
            raise CofactorSingular("Newton polish left the cofactor solution", drift=drift)
        if bb <= 0:
            raise NegativeB("recovered bb is not positive", a=a, bb=bb)
        return ABSolution(z, a, bb, mpmath.sqrt(bb), res, j, a0, b0)


# ---------------------------------------------------------------------------
# perturbation and competition

def complex_min_perturbation(A, a, b, z_tilde, digits: int = 40):
    """(U0, E0, B0): U0 left singular vector of (a+ib)I - A for sqrt(z),
    E0 = U0 U0^H ((a+ib)I - A).  The first non-negligible entry of U0 is
    made real and positive."""
    M = rat_matrix(A)
    n = len(M)
    dps = _dps(digits)
    with mpmath.workdps(dps):
        mu = mpmath.mpc(a, b)
        Am = mpmath.matrix([[mpq(x) for x in r] for r in M])
        L = mu * mpmath.eye(n) - Am
        U, S, V = mpmath.svd_c(L)
        k, cluster = _pick_singular(U, S, mpmath.sqrt(mpmath.mpf(z_tilde)), dps, "complex")
        if len(cluster) > 1:
            raise ClusteredSingularValues("matching singular value is multiple")
        u = U[:, k]
        big = max(abs(u[i]) for i in range(n))
        small = big * mpmath.mpf(10) ** (-(dps // 2))
        p = next(i for i in range(n) if abs(u[i]) > small)
        u = u * (abs(u[p]) / u[p])
        E = u * (u.H * L)
        return u, E, Am + E


@dataclass
class ComplexReport:
    A: tuple
    n: int
    digits: int
    winner: Optional[str]
    d_C: Optional[mpmath.mpf]
    real: Optional[DistanceReport]
    equation: Optional[ComplexDistanceEquation]
    z_tilde: Optional[RefinedRoot] = None
    a: Optional[mpmath.mpf] = None
    b: Optional[mpmath.mpf] = None
    bb: Optional[mpmath.mpf] = None
    U0: Optional[mpmath.matrix] = None
    E0: Optional[mpmath.matrix] = None
    B0: Optional[mpmath.matrix] = None
    residual: Optional[mpmath.mpf] = None
    zero_inventory: list = field(default_factory=list)
    rejected: list = field(default_factory=list)
    degenerate: Optional[str] = None


def complex_distance(A, digits: int = 40, jobs: int = 1, real_report: Optional[DistanceReport] = None) -> ComplexReport:
    """Competition between the least admissible zero of F (real branch) and
    the least positive zero of Ftilde with bb > 0 (complex branch)."""
    M = rat_matrix(A)
    n = len(M)
    real = real_report or wilkinson_distance(M, digits)
    try:
        cde = complex_distance_equation(M, jobs=jobs)
    except EliminationDegenerate as exc:
        # e.g. normal matrices: pairs of factors of Theta meet for every z
        cde = None
        rep = ComplexReport(M, n, digits, None, None, real, None, degenerate=str(exc))
    else:
        rep = ComplexReport(M, n, digits, None, None, real, cde)
    if cde is not None and cde.f_tilde.degree >= 1:
        rep.zero_inventory = isolate_real_roots(cde.f_tilde)
    real_z = real.z_star.value if real.z_star is not None else None
    if real.status == "INPUT_DEFECTIVE":
        rep.winner, rep.d_C = REAL_BRANCH, real.d
        return rep
    for root in rep.zero_inventory:
        if root.mid <= 0:
            continue
        rr = refine(root, digits)
        if real_z is not None and rr.value > real_z:
            break
        try:
            sol = recover_ab(cde, rr, digits)
            u, E, B = complex_min_perturbation(M, sol.a, sol.b, rr.value, digits)
        except (NegativeB, CofactorSingular, SingularValueMismatch, ClusteredSingularValues) as exc:
            rep.rejected.append((rr, exc.code))
            continue
        rep.z_tilde, rep.a, rep.bb, rep.b = rr, sol.a, sol.bb, sol.b
        rep.U0, rep.E0, rep.B0, rep.residual = u, E, B, sol.residual
        break
    with mpmath.workdps(_dps(digits)):
        if rep.z_tilde is not None:
            rep.winner = COMPLEX_BRANCH
            rep.d_C = mpmath.sqrt(rep.z_tilde.value)
        elif real_z is not None:
            rep.winner = REAL_BRANCH
            rep.d_C = real.d
    return rep


# ---------------------------------------------------------------------------
# independent routes used for validation

def full_eliminant_at(theta: ThetaPoly, z0) -> Fraction:
    """prod Theta over the zeros of (Theta_a, Theta_b) at z = z0 (the full
    system in (a, b), no even substitution)."""
    z0 = Fraction(z0)
    t = _specialise(theta.theta, z0)
    ta = _specialise(theta.theta.diff("a"), z0)
    tb = _specialise(theta.theta.diff("b"), z0)
    names = ("a", "b")
    G = _groebner([_to_ring(ta, names), _to_ring(tb, names)], names)
    basis = _normal_set(G)
    if basis is None:
        raise EliminationDegenerate("full system is not zero-dimensional", z=z0)
    B = multiplication_matrix(_to_ring(t, names), G, basis)
    return _rat_det(B), len(basis)


def resultant_eliminant_at(theta: ThetaPoly, z0) -> Fraction:
    """Res_bb(Res_a(Xi_a, Xi_bb), Res_a(Xi, Xi_a)) at z = z0.

    Every common zero of the Xi-system makes this vanish, so Ftilde divides
    the interpolated result (along with extraneous factors)."""
    z0 = Fraction(z0)

    def in_a(p: MPoly):
        sp = _specialise(p, z0)
        da = max(i for i, _ in sp)
        coeffs = []
        for i in range(da + 1):
            db = [sp.get((i, j), 0) for j in range(max(j for _, j in sp) + 1)]
            coeffs.append(UniPoly.from_low(db, "bb"))
        return coeffs[::-1]

    def res_a(p, q):
        pc, qc = in_a(p), in_a(q)
        m, k = len(pc) - 1, len(qc) - 1
        zero = UniPoly([], "bb")
        rows = [[zero] * i + pc + [zero] * (k - 1 - i) for i in range(k)]
        rows += [[zero] * i + qc + [zero] * (m - 1 - i) for i in range(m)]
        return det_bareiss(rows)

    r1 = res_a(theta.xi_a, theta.xi_bb)
    r2 = res_a(theta.xi, theta.xi_a)
    return resultant(r1, r2)
