"""Real roots of integer polynomials and sign-variation counts.

Isolation uses Descartes' rule of signs with bisection (the Vincent,
Collins and Akritas scheme).  Refinement runs Newton's method in mpmath
and certifies the result by an exact sign change.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import mpmath

from .errors import JacobiHypothesisViolated
from .ratpoly import (UniPoly, power_sums, zp_divexact, zp_eval_hom,
                      zp_sign_at, zp_sqf, det_bareiss, bareiss_int, bareiss_leading)


@dataclass(frozen=True)
class IsolatedRoot:
    """A real zero inside (lo, hi), or exactly ``exact`` when known.

    ``factor`` is the primitive square-free integer polynomial (lowest
    first) that owns the zero; ``multiplicity`` is the multiplicity in the
    original polynomial.
    """
    lo: Fraction
    hi: Fraction
    multiplicity: int
    factor: tuple
    exact: Optional[Fraction] = None

    @property
    def mid(self) -> Fraction:
        return self.exact if self.exact is not None else (self.lo + self.hi) / 2

    def __float__(self):
        return float(self.mid)


@dataclass(frozen=True)
class RefinedRoot:
    """A zero known to ``digits`` significant digits.  The zero lies in
    [lo, hi]; ``value`` is an mpf at somewhat higher precision."""
    value: mpmath.mpf
    lo: Fraction
    hi: Fraction
    digits: int
    multiplicity: int
    factor: tuple
    exact: Optional[Fraction] = None

    @property
    def rel_error(self) -> Fraction:
        if self.exact is not None:
            return Fraction(0)
        m = max(abs(self.lo), abs(self.hi))
        return (self.hi - self.lo) / m if m else self.hi - self.lo

    def rational(self) -> Fraction:
        """Exact root if rational, else the midpoint of the bracket."""
        return self.exact if self.exact is not None else (self.lo + self.hi) / 2


# ---------------------------------------------------------------------------
# Descartes bisection

def _var(seq) -> int:
    v = 0
    last = 0
    for c in seq:
        if c:
            if last and (c > 0) != (last > 0):
                v += 1
            last = c
    return v


def _taylor1(a):
    """Coefficients of a(x + 1), lowest first."""
    a = list(a)
    n = len(a)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            a[j] += a[j + 1]
    return a


def _descartes01(p) -> int:
    """Sign variations bounding the number of zeros of p in (0, 1)."""
    return _var(_taylor1(p[::-1]))


def _halve(p):
    """2^d p(x/2)."""
    d = len(p) - 1
    return [c << (d - i) for i, c in enumerate(p)]


def _root_bound_exp(p) -> int:
    """k with every real zero of p strictly inside (-2^k, 2^k)."""
    d = len(p) - 1
    ld = abs(p[-1]).bit_length()
    best = 0
    for i in range(1, d + 1):
        c = p[d - i]
        if c:
            e = -((ld - 1 - abs(c).bit_length()) // i)   # ceil((bits(c)-bits(lc)+1)/i)
            best = max(best, e)
    return best + 2


def _positive_roots(p):
    """Isolating intervals (lo, hi) or exact zeros for the positive zeros of
    a square-free integer polynomial with p(0) != 0."""
    k0 = _root_bound_exp(p)
    # g(x) = p(2^k0 x) has its positive zeros in (0, 1)
    g = [c << (k0 * i) for i, c in enumerate(p)]
    out = []
    stack = [(g, 0, 0)]                 # interval (c/2^k, (c+1)/2^k) in g-scale
    while stack:
        q, c, k = stack.pop()
        if len(q) <= 1:
            continue
        v = _descartes01(q)
        if v == 0:
            continue
        if v == 1:
            out.append((Fraction(c, 1 << k), Fraction(c + 1, 1 << k), None))
            continue
        left = _halve(q)
        right = _taylor1(left)
        if right[0] == 0:
            # zero exactly at the midpoint
            out.append((None, None, Fraction(2 * c + 1, 1 << (k + 1))))
            right = right[1:]
            left = zp_divexact(left, [-1, 1])
        stack.append((left, 2 * c, k + 1))
        stack.append((right, 2 * c + 1, k + 1))
    scale = Fraction(1 << k0)
    res = []
    for lo, hi, ex in out:
        if ex is not None:
            res.append((ex * scale, ex * scale, ex * scale))
        else:
            res.append((lo * scale, hi * scale, None))
    return res


def _isolate_squarefree(f):
    """All real zeros of a square-free primitive integer polynomial."""
    res = []
    if f[0] == 0:
        res.append((Fraction(0), Fraction(0), Fraction(0)))
        f = f[1:]
    if len(f) <= 1:
        return res
    for lo, hi, ex in _positive_roots(f):
        res.append((lo, hi, ex))
    neg = [c if i % 2 == 0 else -c for i, c in enumerate(f)]
    for lo, hi, ex in _positive_roots(neg):
        res.append((-hi, -lo, -ex if ex is not None else None))
    return res


def isolate_real_roots(p: UniPoly | list) -> list[IsolatedRoot]:
    """Disjoint isolating intervals for every distinct real zero, ascending,
    with multiplicities from a square-free decomposition."""
    ints = p.int_form()[1] if isinstance(p, UniPoly) else list(p)
    roots = []
    for f, m in zp_sqf(ints):
        if len(f) <= 1:
            continue
        for lo, hi, ex in _isolate_squarefree(f):
            roots.append(IsolatedRoot(lo, hi, m, tuple(f), ex))
    # intervals of different square-free factors may overlap; split them
    while True:
        roots.sort(key=lambda r: (r.lo, r.hi))
        # open intervals that merely touch are disjoint
        clash = [i for i in range(len(roots) - 1) if roots[i].hi > roots[i + 1].lo]
        if not clash:
            return roots
        for i in reversed(clash):
            for k in (i, i + 1):
                if roots[k].exact is None:
                    roots[k] = _halve_root(roots[k])


def _halve_root(r: IsolatedRoot) -> IsolatedRoot:
    f = list(r.factor)
    mid = (r.lo + r.hi) / 2
    s = zp_sign_at(f, mid)
    if s == 0:
        return IsolatedRoot(mid, mid, r.multiplicity, r.factor, mid)
    # an endpoint may itself be a zero of the factor, so compare with the
    # endpoint whose sign is nonzero
    slo = zp_sign_at(f, r.lo)
    if slo:
        upper = s == slo
    else:
        upper = s != zp_sign_at(f, r.hi)
    if upper:
        return IsolatedRoot(mid, r.hi, r.multiplicity, r.factor)
    return IsolatedRoot(r.lo, mid, r.multiplicity, r.factor)


def positive_roots(p) -> list[IsolatedRoot]:
    return [r for r in isolate_real_roots(p) if r.mid > 0]


# ---------------------------------------------------------------------------
# refinement

def _simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """Fraction with the smallest denominator in [lo, hi] (0 < lo <= hi)."""
    if lo.denominator == 1 or lo == hi:
        return lo
    fl = lo.numerator // lo.denominator
    if fl + 1 <= hi:
        return Fraction(fl + 1)
    # lo and hi share the integer part: recurse on reciprocals of fractional parts
    r = _simplest_between(1 / (hi - fl), 1 / (lo - fl))
    return fl + 1 / r


def _mp_poly_eval(coeffs_mp, x):
    r = mpmath.mpf(0)
    dr = mpmath.mpf(0)
    for c in coeffs_mp:
        dr = dr * x + r
        r = r * x + c
    return r, dr


def _to_frac(x: mpmath.mpf) -> Fraction:
    man, exp = mpmath.mpf(x).man_exp
    return Fraction(int(man)) * Fraction(2) ** int(exp)


def _bisect(f, lo, hi, slo, width):
    while hi - lo > width:
        mid = (lo + hi) / 2
        s = zp_sign_at(f, mid)
        if s == 0:
            return mid, mid, mid
        if s == slo:
            lo = mid
        else:
            hi = mid
    return lo, hi, None


def refine(root: IsolatedRoot, digits: int = 40) -> RefinedRoot:
    """Shrink the isolating interval until the relative width is below
    10^-digits (or until an exact rational zero is found)."""
    f = list(root.factor)
    prec_dps = digits + 10
    if root.exact is not None:
        with mpmath.workdps(prec_dps):
            v = mpmath.mpf(root.exact.numerator) / root.exact.denominator
        return RefinedRoot(v, root.exact, root.exact, digits, root.multiplicity, root.factor, root.exact)
    lo, hi = root.lo, root.hi
    slo = zp_sign_at(f, lo)
    shi = zp_sign_at(f, hi)
    # the zero lies strictly inside; an endpoint may be another zero of the
    # factor, in which case shrink towards the inside first
    while slo == 0 or shi == 0:
        mid = (lo + hi) / 2
        sm = zp_sign_at(f, mid)
        if sm == 0:
            return refine(IsolatedRoot(mid, mid, root.multiplicity, root.factor, mid), digits)
        ref = shi if slo == 0 else slo
        # the inner zero is on the side where the sign differs from ref
        if (sm != ref) == (slo == 0):
            lo, slo = mid, sm
        else:
            hi, shi = mid, sm
    if slo == shi:
        raise ArithmeticError("interval does not bracket a sign change")
    # a few bisections so that |root| is resolved and Newton starts well
    if lo < 0 < hi:
        lo, hi, ex = _bisect(f, lo, hi, slo, min(-lo, hi) / 4)
        if ex is not None:
            return refine(IsolatedRoot(ex, ex, root.multiplicity, root.factor, ex), digits)
    while True:
        m = min(abs(lo), abs(hi))
        if m > 0 and (hi - lo) <= m / 64:
            break
        lo, hi, ex = _bisect(f, lo, hi, slo, (hi - lo) / 4)
        if ex is not None:
            return refine(IsolatedRoot(ex, ex, root.multiplicity, root.factor, ex), digits)
    tol = Fraction(1, 10 ** (digits + 1))
    dps = prec_dps + 10
    for _attempt in range(6):
        with mpmath.workdps(dps):
            cm = [mpmath.mpf(c) for c in reversed(f)]
            x = mpmath.mpf(lo.numerator) / lo.denominator / 2 + mpmath.mpf(hi.numerator) / hi.denominator / 2
            ok = False
            for _ in range(400):
                val, der = _mp_poly_eval(cm, x)
                if der == 0:
                    break
                step = val / der
                x -= step
                if abs(step) <= abs(x) * mpmath.mpf(10) ** (-(digits + 6)):
                    ok = True
                    break
            if ok:
                xf = _to_frac(x)
                eps = abs(xf) * tol / 2
                a, b = xf - eps, xf + eps
                if lo <= a and b <= hi:
                    sa, sb = zp_sign_at(f, a), zp_sign_at(f, b)
                    if sa == 0:
                        lo = hi = a
                        break
                    if sb == 0:
                        lo = hi = b
                        break
                    if sa != sb:
                        lo, hi = a, b
                        break
        dps *= 2
    else:
        m = min(abs(lo), abs(hi))
        lo, hi, ex = _bisect(f, lo, hi, slo, m * tol)
        if ex is not None:
            lo = hi = ex
    exact = None
    if lo == hi:
        exact = lo
    else:
        r = _simplest_between(lo, hi) if lo > 0 else -_simplest_between(-hi, -lo)
        if f[-1] % r.denominator == 0 and zp_sign_at(f, r) == 0:
            exact = r
    if exact is not None:
        lo = hi = exact
    with mpmath.workdps(prec_dps):
        if exact is not None:
            v = mpmath.mpf(exact.numerator) / exact.denominator
        else:
            mid = (lo + hi) / 2
            v = mpmath.mpf(mid.numerator) / mid.denominator
    return RefinedRoot(v, lo, hi, digits, root.multiplicity, root.factor, exact)


# ---------------------------------------------------------------------------
# sign variations of leading principal minors

def _variations_checked(seq) -> int:
    seq = list(seq)
    while seq and seq[-1] == 0:
        seq.pop()
    if any(c == 0 for c in seq):
        raise JacobiHypothesisViolated("zero minor inside the sequence", sequence=seq)
    return _var(seq)


def variation_count(minors, z0) -> int:
    """V(1, S_1(z0), ..., S_N(z0)) after dropping trailing zeros.

    ``minors`` is a :class:`wdist.specpoly.HankelMinors`.  A zero minor
    followed by a nonzero one raises JacobiHypothesisViolated.
    """
    return _variations_checked([Fraction(1)] + minors.at(Fraction(z0)))


def localization_count(minors, z0) -> int:
    """Lower bound for the number of zeros of F in (0, z0].

    Each complex pair of f_A is a double pair of Phi(lam, 0) and splits
    into two distinct pairs as soon as z > 0, so the count just right of
    zero is 2 V(0).  Comparing V(z0) against V(0) itself would charge
    that jump (which belongs to the z^n factor) to F.
    """
    return abs(variation_count(minors, z0) - 2 * variation_count(minors, 0))


def hankel_leading_minors(p: UniPoly) -> list[Fraction]:
    """S_1..S_N for the Hankel matrix of Newton sums of p."""
    N = p.degree
    s = power_sums(p.low, 2 * N - 1)
    den = 1
    for x in s:
        den = den * x.denominator // math.gcd(den, x.denominator)
    H = [[int(s[i + j] * den) for j in range(N)] for i in range(N)]
    res = bareiss_leading(H)
    if res is not None:
        minors = res[0]
    else:
        minors = [bareiss_int([r[:k] for r in H[:k]]) for k in range(1, N + 1)]
    return [Fraction(m, den ** k) for k, m in enumerate(minors, 1)]


def _frobenius_signs(seq) -> list:
    """Replace interior zero minors of a Hankel sequence by signs.

    A run of zeros after S_h gets sign(S_{h+j}) = (-1)^(j(j-1)/2) sign(S_h),
    which keeps the variation count meaningful for Hankel forms.
    """
    seq = list(seq)
    while seq and seq[-1] == 0:
        seq.pop()
    out = []
    last, run = 0, 0
    for c in seq:
        if c == 0:
            run += 1
            out.append((-1) ** (run * (run - 1) // 2) * (1 if last > 0 else -1))
        else:
            run = 0
            last = c
            out.append(c)
    return out


def count_complex_pairs(p: UniPoly) -> int:
    """Number of distinct pairs of non-real zeros (Jacobi rule, with the
    Frobenius sign rule for zero minors inside the sequence)."""
    return _var(_frobenius_signs([Fraction(1)] + hankel_leading_minors(p)))
