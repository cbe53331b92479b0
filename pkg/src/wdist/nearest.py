"""Nearest matrix with a multiple eigenvalue under real rank-one perturbations.

Pipeline: distance polynomial F(z) -> real zeros in increasing order ->
double zero lam* of Phi(., z*) -> left singular vector U* of lam* I - A ->
E* = U* U*^T (lam* I - A) and B* = A + E*.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import mpmath

from .errors import (ClusteredSingularValues, ComplexLambda, InputDefective,
                     MultipleZeroZ, SingularValueMismatch)
from .ratpoly import (bareiss_int, rat_matrix, zp_from_fractions, zp_is_squarefree,
                      zp_mul, zp_sqf)
from .roots import IsolatedRoot, RefinedRoot, isolate_real_roots, refine
from .specpoly import DistanceEquation, distance_equation, is_defective, phi_lam_coeffs

CERTIFIED = "CERTIFIED_RANK1_MINIMUM"
CANDIDATE_MULTIPLE = "CANDIDATE_ONLY_MULTIPLE_ZERO"
CANDIDATE_COMPLEX = "CANDIDATE_ONLY_COMPLEX_LAMBDA"
DEFECTIVE = "INPUT_DEFECTIVE"


def mpq(x: Fraction) -> mpmath.mpf:
    return mpmath.mpf(x.numerator) / x.denominator


def _dps(digits: int) -> int:
    return digits + 20


@dataclass
class LambdaResult:
    """Real double zero of Phi(., z0).  ``others`` lists the remaining
    double zeros found numerically (nonempty only for multiple zeros of F)."""
    value: mpmath.mpf
    method: str
    z_rational: Fraction
    crosscheck: Optional[mpmath.mpf] = None
    others: list = field(default_factory=list)


# ---------------------------------------------------------------------------
# lam from a zero of F

def _rational_point(root, digits: int) -> Fraction:
    """A rational point within 10^-(2 digits) (relative) of the zero."""
    if isinstance(root, RefinedRoot):
        if root.exact is not None:
            return root.exact
        if root.digits >= 2 * digits + 10:
            return root.rational()
        root = IsolatedRoot(root.lo, root.hi, root.multiplicity, root.factor, root.exact)
    return refine(root, 2 * digits + 10).rational()


def eq27_lambda(eq: DistanceEquation, zr: Fraction) -> Optional[Fraction]:
    """lam = s_1 - det(M)/S_{N-1} at a rational z, exactly.

    M is the Hankel matrix without its last row and its last but one
    column.  Returns None if S_{N-1}(zr) = 0.
    """
    sums = eq.sums
    N = sums.N
    H, ea, _, v = sums.hankel_at(zr)
    top = H[:N - 1]
    S = bareiss_int([r[:N - 1] for r in top])
    if S == 0:
        return None
    cols = list(range(N - 2)) + [N - 1]
    Mdet = bareiss_int([[r[j] for j in cols] for r in top])
    # undo the row/column scaling of the integer Hankel matrix
    ratio = Fraction(Mdet, S) * Fraction(v) ** (ea[N - 2] - ea[N - 1]) / sums.q
    s1 = sums.poly(1)(zr)
    return s1 - ratio


def _lam_poly_at(eq: DistanceEquation, zr: Fraction) -> list[Fraction]:
    """Coefficients (lowest first) of Phi(., zr) (or G in fallback mode)."""
    return [c(zr) for c in phi_lam_coeffs(eq.lam_poly)]


def double_zeros_numeric(coeffs: list[Fraction], dps: int):
    """Double zeros of a real polynomial whose discriminant (nearly)
    vanishes: zeros of p' at which p is negligible.  Returns a list of
    mpc values sorted by |p| relative size."""
    _, d = zp_from_fractions([i * coeffs[i] for i in range(1, len(coeffs))])
    while d and d[-1] == 0:
        d.pop()
    if len(d) <= 1:
        return []
    # polyroots stalls on repeated zeros, so use the square-free part of p'
    red = [1]
    for f, _m in zp_sqf(d):
        red = zp_mul(red, f)
    with mpmath.workdps(dps):
        c = [mpq(x) for x in coeffs]
        if len(red) <= 1:
            return []
        crit = mpmath.polyroots([mpmath.mpf(x) for x in red[::-1]], maxsteps=2000, extraprec=dps)
        out = []
        for r in crit:
            val = mpmath.polyval(c[::-1], r)
            scale = sum(abs(ci) * max(1, abs(r)) ** i for i, ci in enumerate(c))
            rel = abs(val) / scale if scale else abs(val)
            out.append((rel, r))
        out.sort(key=lambda t: t[0])
        thresh = mpmath.mpf(10) ** (-(dps // 2))
        return [r for rel, r in out if rel < thresh]


def _cluster(vals, tol):
    groups = []
    for v in vals:
        for g in groups:
            if abs(g[0] - v) <= tol * max(1, abs(v)):
                break
        else:
            groups.append([v])
    return [g[0] for g in groups]


def double_zero_lambda(eq: DistanceEquation, root, digits: int = 40) -> LambdaResult:
    """Real double zero of Phi(lam, z0) for a zero z0 of F.

    The rational formula is evaluated exactly at a rational point within
    10^-(2*digits) of z0; the numeric double zeros of Phi(., z0) serve as
    the cross-check.  Raises MultipleZeroZ when Phi(., z0) has more than one
    double zero and ComplexLambda when the only double zeros are non-real.
    """
    dps = _dps(digits)
    zr = _rational_point(root, digits)
    coeffs = _lam_poly_at(eq, zr)
    with mpmath.workdps(dps):
        found = double_zeros_numeric(coeffs, 2 * dps)
        tol = mpmath.mpf(10) ** (-(dps // 2))
        distinct = _cluster(found, tol)
        lam = eq27_lambda(eq, zr) if (root.exact is not None or root.multiplicity == 1 or len(distinct) <= 1) else None
        if len(distinct) > 1:
            raise MultipleZeroZ("Phi has several double zeros at this z", candidates=distinct)
        if lam is None:
            raise MultipleZeroZ("S_{N-1} vanishes at this z", candidates=distinct)
        lv = mpq(lam)
        if not distinct:
            raise ComplexLambda("no double zero found by the cross-check")
        cc = distinct[0]
        if abs(mpmath.im(cc)) > tol * max(1, abs(cc)):
            raise ComplexLambda("double zero is not real", candidates=distinct)
        if abs(mpmath.re(cc) - lv) > tol * max(1, abs(lv)):
            raise ComplexLambda("formula and cross-check disagree", formula=lv, crosscheck=cc)
        return LambdaResult(+lv, "EQ27", zr, +mpmath.re(cc))


def lambdas_at_multiple_zero(eq: DistanceEquation, root, digits: int = 40) -> list:
    """All double zeros of Phi(., z0), numerically, for a multiple zero z0."""
    dps = _dps(digits)
    zr = _rational_point(root, digits)
    coeffs = _lam_poly_at(eq, zr)
    with mpmath.workdps(dps):
        found = double_zeros_numeric(coeffs, 2 * dps)
        tol = mpmath.mpf(10) ** (-(dps // 2))
        return _cluster(found, tol), zr


# ---------------------------------------------------------------------------
# perturbation

def _mp_matrix(A, dps):
    with mpmath.workdps(dps):
        return mpmath.matrix([[mpq(x) for x in r] for r in A])


def _pick_singular(U, S, target, dps, label="real"):
    """Column of U whose singular value matches target; handles clusters by
    returning all indices in the cluster."""
    n = len(S)
    diffs = [abs(S[i] - target) for i in range(n)]
    k = min(range(n), key=lambda i: diffs[i])
    smax = max(max(abs(S[i]) for i in range(n)), 1)
    tol = mpmath.mpf(10) ** (-(dps // 2)) * smax
    if diffs[k] > tol:
        raise SingularValueMismatch(f"no singular value of the shifted {label} matrix matches sqrt(z)",
                                    nearest=S[k], target=target)
    cluster = [i for i in range(n) if abs(S[i] - S[k]) <= tol]
    return k, cluster


def _isotropic_in_cluster(L, U, cluster):
    """Unit vector u in span(U[:, cluster]) with u^T L u = 0.

    Any such u gives a valid rank-one perturbation; without one the
    singular vector is ill-defined for our purpose."""
    k = len(cluster)
    Q = mpmath.matrix(L.rows, k)
    for j, c in enumerate(cluster):
        for i in range(L.rows):
            Q[i, j] = U[i, c]
    C = Q.T * L * Q
    Cs = (C + C.T) / 2
    E, V = mpmath.eigsy(Cs)
    vals = [E[i] for i in range(k)]
    scale = max(max(abs(x) for x in vals), 1)
    small = mpmath.mpf(10) ** (-(mpmath.mp.dps // 2)) * scale
    for i, x in enumerate(vals):
        if abs(x) <= small:
            y = V[:, i]
            break
    else:
        pos = [i for i, x in enumerate(vals) if x > 0]
        neg = [i for i, x in enumerate(vals) if x < 0]
        if not pos or not neg:
            raise ClusteredSingularValues("matching singular value is multiple and no isotropic vector exists")
        p, q = pos[0], neg[0]
        y = mpmath.sqrt(-vals[q]) * V[:, p] + mpmath.sqrt(vals[p]) * V[:, q]
        y = y / mpmath.norm(y)
    return Q * y


def _normalise_sign(u):
    # first component that is not negligible is made positive
    big = max(abs(u[i]) for i in range(u.rows))
    small = big * mpmath.mpf(10) ** (-(mpmath.mp.dps // 2))
    k = next(i for i in range(u.rows) if abs(u[i]) > small)
    return u if u[k] >= 0 else -u


def min_perturbation(A, lambda_star, z_star, digits: int = 40):
    """(U*, E*, B*) with E* = U* U*^T (lam* I - A) for the left singular
    vector of lam* I - A belonging to the singular value sqrt(z*).

    A multiple singular value is accepted when its singular subspace holds
    a vector u with u^T (lam* I - A) u = 0; otherwise
    ClusteredSingularValues is raised.
    """
    M = rat_matrix(A)
    n = len(M)
    dps = _dps(digits)
    with mpmath.workdps(dps):
        lam = mpq(lambda_star) if isinstance(lambda_star, (Fraction, int)) else mpmath.mpf(lambda_star)
        z = mpq(z_star) if isinstance(z_star, (Fraction, int)) else mpmath.mpf(z_star)
        Am = _mp_matrix(M, dps)
        L = lam * mpmath.eye(n) - Am
        U, S, V = mpmath.svd_r(L)
        k, cluster = _pick_singular(U, S, mpmath.sqrt(z), dps)
        if len(cluster) > 1:
            u = _isotropic_in_cluster(L, U, cluster)
        else:
            u = U[:, k]
        u = _normalise_sign(u)
        E = u * (u.T * L)
        B = Am + E
        return u, E, B


# ---------------------------------------------------------------------------
# the pipeline

@dataclass
class DistanceReport:
    A: tuple
    n: int
    digits: int
    status: str
    equation: Optional[DistanceEquation]
    zero_inventory: list
    discriminant_guard: Optional[bool]
    z_star: Optional[RefinedRoot] = None
    d: Optional[mpmath.mpf] = None
    lambda_star: Optional[mpmath.mpf] = None
    U_star: Optional[mpmath.matrix] = None
    E_star: Optional[mpmath.matrix] = None
    B_star: Optional[mpmath.matrix] = None
    rejected: list = field(default_factory=list)
    lambda_method: Optional[str] = None
    notes: list = field(default_factory=list)


def wilkinson_distance(A, digits: int = 40) -> DistanceReport:
    """Real rank-one distance to the multiple-eigenvalue matrices.

    Zeros of F are walked in increasing order.  A zero is accepted when a
    real double zero lam of Phi(., z) exists.  The report is certified
    only if the first positive zero is accepted, is simple, and F is
    square-free; otherwise it carries a CANDIDATE_ONLY status.
    """
    M = rat_matrix(A)
    n = len(M)
    if is_defective(M):
        with mpmath.workdps(_dps(digits)):
            zero = mpmath.mpf(0)
        return DistanceReport(M, n, digits, DEFECTIVE, None, [], None, d=zero,
                              notes=["matrix already has a multiple eigenvalue"])
    eq = distance_equation(M)
    inventory = isolate_real_roots(eq.F)
    guard = zp_is_squarefree(eq.int_form)
    report = DistanceReport(M, n, digits, CANDIDATE_MULTIPLE, eq, inventory, guard)
    saw_multiple = False
    saw_complex = False
    for root in inventory:
        if root.mid <= 0:
            continue
        zr = refine(root, digits)
        lam = None
        if root.multiplicity > 1:
            saw_multiple = True
        try:
            res = double_zero_lambda(eq, zr, digits)
            lam, method = res.value, res.method
        except MultipleZeroZ:
            saw_multiple = True
            cands, _ = lambdas_at_multiple_zero(eq, zr, digits)
            real = [c for c in cands
                    if abs(mpmath.im(c)) <= mpmath.mpf(10) ** (-(_dps(digits) // 2)) * max(1, abs(c))]
            if real:
                lam = min((mpmath.re(c) for c in real), key=lambda x: (abs(x), x))
                method = "NUMERIC_DOUBLE_ZERO"
            else:
                report.rejected.append((zr, "COMPLEX_LAMBDA"))
                continue
        except ComplexLambda:
            saw_complex = True
            report.rejected.append((zr, "COMPLEX_LAMBDA"))
            continue
        try:
            u, E, B = min_perturbation(M, lam, zr.value, digits)
        except (SingularValueMismatch, ClusteredSingularValues) as exc:
            report.rejected.append((zr, exc.code))
            continue
        report.z_star = zr
        with mpmath.workdps(_dps(digits)):
            report.d = mpmath.sqrt(zr.value)
        report.lambda_star = lam
        report.lambda_method = method
        report.U_star, report.E_star, report.B_star = u, E, B
        break
    if report.z_star is None:
        report.status = CANDIDATE_COMPLEX if saw_complex and not saw_multiple else CANDIDATE_MULTIPLE
        report.notes.append("no admissible positive zero")
        return report
    first = not report.rejected
    simple = report.z_star.multiplicity == 1
    if first and simple and guard:
        report.status = CERTIFIED
    elif saw_multiple or not guard or not simple:
        report.status = CANDIDATE_MULTIPLE
    else:
        report.status = CANDIDATE_COMPLEX
    return report


# ---------------------------------------------------------------------------
# verification

@dataclass
class Check:
    name: str
    passed: bool
    value: mpmath.mpf
    bound: mpmath.mpf


def _disc_from_eigs(eigs):
    d = mpmath.mpf(1)
    for i in range(len(eigs)):
        for j in range(i + 1, len(eigs)):
            d *= (eigs[i] - eigs[j]) ** 2
    return d


def verify_report(r: DistanceReport, tol=None) -> list[Check]:
    """Independent recomputation of the report's claims.  Failures are
    recorded, never raised."""
    checks: list[Check] = []
    if r.E_star is None:
        return checks
    n = r.n
    dps = _dps(r.digits)
    with mpmath.workdps(dps):
        if tol is None:
            tol = mpmath.mpf(10) ** -min(30, r.digits - 10)
        elif isinstance(tol, Fraction):
            tol = mpq(tol)
        else:
            tol = mpmath.mpf(tol)
        E, B = r.E_star, r.B_star
        nrm = mpmath.mnorm(E, "f")
        d = mpmath.sqrt(r.z_star.value)
        err = abs(nrm - d)
        checks.append(Check("frobenius_norm", err <= 10 * tol * max(1, d), err, 10 * tol * max(1, d)))
        s = mpmath.svd_r(E, compute_uv=False)
        sv = sorted([abs(s[i]) for i in range(n)], reverse=True)
        ratio = sv[1] / sv[0] if n > 1 and sv[0] else mpmath.mpf(0)
        checks.append(Check("rank_one", ratio <= 10 * tol, ratio, 10 * tol))
        Am = _mp_matrix(r.A, dps)
        diff = mpmath.mnorm(B - Am - E, "f")
        checks.append(Check("B_equals_A_plus_E", diff <= tol, diff, tol))
        eigs = mpmath.eig(B, left=False, right=False)
        eigs = [eigs[i] for i in range(n)]
        scale = max(max(abs(e) for e in eigs), 1)
        disc = abs(_disc_from_eigs(eigs))
        bound = 10 * tol * (2 * scale) ** (n * (n - 1))
        checks.append(Check("discriminant_of_B", disc <= bound, disc, bound))
        best = None
        for i in range(n):
            for j in range(i + 1, n):
                gap = abs(eigs[i] - eigs[j])
                centre = (eigs[i] + eigs[j]) / 2
                if best is None or gap < best[0]:
                    best = (gap, centre)
        gbound = 10 * mpmath.sqrt(tol) * scale
        checks.append(Check("eigenvalue_pair_split", best[0] <= gbound, best[0], gbound))
        off = abs(best[1] - r.lambda_star)
        checks.append(Check("pair_at_lambda_star", off <= gbound, off, gbound))
    return checks
