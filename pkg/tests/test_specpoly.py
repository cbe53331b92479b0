"""Phi, Newton sums, Hankel minors and the distance equation."""
from fractions import Fraction

import mpmath
import pytest
import sympy

from conftest import random_int_matrix
from wdist.errors import InputDefective, NotASquare
from wdist.gallery import EXPLICIT_MATRICES, F3_POLY, SKEW4_POLY, frank
from wdist.ratpoly import (MPoly, UniPoly, charpoly, discriminant_direct, interpolate,
                           mat_mul, transpose)
from wdist.roots import isolate_real_roots, refine
from wdist.specpoly import (NORMAL, SQRT_PHI, build_phi, distance_equation, hankel_minors,
                            newton_sums, newton_sums_of, phi_lam_coeffs, special_form,
                            sqrt_phi_fallback)

lam = MPoly.var("lam", ("lam", "z"))
z = MPoly.var("z", ("lam", "z"))
Z = UniPoly([1, 0], "z")


def trace(M):
    return sum(M[i][i] for i in range(len(M)))


def phi_at(phi, z0):
    """Phi(lam, z0) as a univariate polynomial in lam."""
    return UniPoly([c(Fraction(z0)) for c in reversed(phi_lam_coeffs(phi))], "lam")


def householder(v):
    n = len(v)
    vv = sum(Fraction(t) ** 2 for t in v)
    return [[(1 if i == j else 0) - 2 * Fraction(v[i] * v[j]) / vv for j in range(n)] for i in range(n)]


def random_nondefective(rng, n, tries=50):
    for _ in range(tries):
        A = random_int_matrix(rng, n)
        f = charpoly(A)
        if discriminant_direct(f) != 0:
            return A
    raise RuntimeError("no generic matrix drawn")


# --- Phi -------------------------------------------------------------------

def test_phi_frank3():
    phi = build_phi(frank(3))
    expected = (lam ** 6 - lam ** 5 * 12 + (z * -3 + 48) * lam ** 4 + (z * 24 - 74) * lam ** 3
                + (z * z * 3 - z * 73 + 48) * lam ** 2 + (z * z * -12 + z * 70 - 12) * lam
                - z ** 3 + z * z * 25 - z * 33 + 1)
    assert phi == expected


def test_phi_invariants(rng):
    for n in (2, 3, 4):
        for _ in range(5):
            A = random_int_matrix(rng, n)
            phi = build_phi(A)
            assert phi.degree("lam") == 2 * n and phi.degree("z") == n
            c = phi_lam_coeffs(phi)
            assert c[2 * n] == UniPoly.const(1)
            assert c[2 * n - 1] == UniPoly.const(-2 * trace(A))
            f = charpoly(A)
            assert phi_at(phi, 0) == UniPoly(f.coeffs, "lam") ** 2


def test_phi_second_coefficient(rng):
    # the lam^(2n-2) coefficient is -n z plus a z-free part; the z-free part
    # is that of f_A^2, i.e. tr(A)^2 + 2 e_2(A)
    for n in (2, 3):
        A = random_int_matrix(rng, n)
        c = phi_lam_coeffs(build_phi(A))[2 * n - 2]
        f = charpoly(A)
        e1 = -f.coeff(n - 1)
        e2 = f.coeff(n - 2)
        assert c == Z * (-n) + (e1 * e1 + 2 * e2)


def test_phi_symmetric_product():
    A = [[2, 1, 0], [1, 3, 1], [0, 1, 4]]
    kind, prod = special_form(A)
    assert kind == "SYMMETRIC"
    assert prod == build_phi(A)


def test_phi_skew4_is_square():
    G = lam ** 4 - lam * lam * z * 2 + lam * lam * 200 + z * z - z * 200 + 3249
    assert build_phi(EXPLICIT_MATRICES["skew4"]) == G * G


def test_special_forms_match_phi(rng):
    skew = [[0, 2, -1], [-2, 0, 3], [1, -3, 0]]
    shifted = [[skew[i][j] + (5 if i == j else 0) for j in range(3)] for i in range(3)]
    kind, prod = special_form(shifted)
    assert kind == "SKEW_SHIFT" and prod == build_phi(shifted)
    Q = mat_mul(householder([1, 2, 2]), householder([3, 0, 4]))
    kind, prod = special_form(Q)
    assert kind == "ORTHOGONAL" and prod == build_phi(Q)
    assert special_form(frank(3)) is None


# --- Newton sums and Hankel minors ------------------------------------------

def test_newton_sums_basic(rng):
    for n in (2, 3, 4):
        A = random_int_matrix(rng, n)
        s = newton_sums(A).polys
        assert s[0] == UniPoly.const(2 * n)
        assert s[1] == UniPoly.const(2 * trace(A))
        A2 = mat_mul(A, A)
        A3 = mat_mul(A2, A)
        assert s[2] == (Z * n + trace(A2)) * 2
        assert s[3] == (Z * (3 * trace(A)) + trace(A3)) * 2
        assert all(p.degree <= j // 2 for j, p in enumerate(s))


def test_newton_sums_trace_vs_recursion(rng):
    for A in [frank(3)] + [random_int_matrix(rng, 3) for _ in range(5)]:
        tr = newton_sums(A, "trace").polys
        rec = newton_sums(A, "recursion").polys
        assert len(tr) == 4 * len(A) - 1
        assert tr == rec
        assert newton_sums_of(build_phi(A))[:11] == tr[:11]


def test_newton_sums_rational_entries():
    A = [[Fraction(1, 2), 3], [Fraction(-2, 3), 1]]
    assert newton_sums(A, "trace").polys == newton_sums(A, "recursion").polys


def test_hankel_one_by_one():
    # W = [[a, w], [w, a]] has eigenvalues a +- sqrt(z): s_0 = 2, s_1 = 2a,
    # s_2 = 2a^2 + 2z, so S_2 = s_0 s_2 - s_1^2 = 4z
    S = hankel_minors(newton_sums([[Fraction(7, 3)]])).polys()
    assert S[0] == UniPoly.const(2)
    assert S[1] == Z * 4


def test_hankel_top_minors_vanish_at_zero(rng):
    for _ in range(50):
        A = random_nondefective(rng, 3)
        vals = hankel_minors(newton_sums(A)).at(0)
        assert vals[3:] == [0, 0, 0]
        assert vals[2] != 0


def test_hankel_frank3():
    S = hankel_minors(newton_sums(frank(3))).polys()
    F = UniPoly(F3_POLY, "z")
    assert S[5] == F * Z ** 3


# --- distance equation -------------------------------------------------------

def test_distance_equation_frank3():
    de = distance_equation(frank(3))
    assert de.mode == NORMAL and de.leading_check
    assert de.F == UniPoly(F3_POLY, "z")


def test_distance_equation_2x2_closed_form(rng):
    # 16 K^2 {[4z - D]^2 - 16 (a12 - a21)^2 z}, K = (a11-a22)^2 + (a12+a21)^2
    for _ in range(30):
        A = [[Fraction(rng.randint(-9, 9), rng.randint(1, 3)) for _ in range(2)] for _ in range(2)]
        (a11, a12), (a21, a22) = A
        D = (a11 - a22) ** 2 + 4 * a12 * a21
        if D == 0:
            continue
        K = (a11 - a22) ** 2 + (a12 + a21) ** 2
        expected = ((Z * 4 - D) ** 2 - Z * (16 * (a12 - a21) ** 2)) * (16 * K * K)
        assert distance_equation(A).F == expected


def test_distance_equation_2x2_example():
    F = distance_equation([[1, 1], [0, 0]]).F
    assert F.primitive() == UniPoly([16, -24, 1], "z")
    z1 = refine(isolate_real_roots(F)[0], 30).value
    with mpmath.workdps(40):
        assert abs(z1 - (3 - 2 * mpmath.sqrt(2)) / 4) < mpmath.mpf(10) ** -28


def test_distance_equation_rejects_defective():
    with pytest.raises(InputDefective):
        distance_equation([[1, 1], [0, 1]])


def test_skew_fallback():
    de = distance_equation(EXPLICIT_MATRICES["skew4"])
    assert de.mode == SQRT_PHI and de.exact_square
    assert de.F == UniPoly(SKEW4_POLY, "z")


def test_fallback_strict_needs_square():
    Q = [[Fraction(3, 5), Fraction(-4, 5), 0], [Fraction(4, 5), Fraction(3, 5), 0], [0, 0, 1]]
    with pytest.raises(NotASquare):
        sqrt_phi_fallback(Q)


def test_orthogonal_rotation_fallback():
    # rational rotation (cos = 3/5) about the third axis
    Q = [[Fraction(3, 5), Fraction(-4, 5), 0], [Fraction(4, 5), Fraction(3, 5), 0], [0, 0, 1]]
    de = distance_equation(Q)
    assert de.mode == SQRT_PHI and not de.exact_square
    assert not de.F.is_zero() and de.F.degree > 0
    # closed form prod (lam^2 - z + 1 - 2 lam Re(l_j)) over the eigenvalues 1, 3/5 +- 4i/5
    kind, prod = special_form(Q)
    y = lam * lam - z + 1
    assert prod == (y - lam * 2) * (y - lam * Fraction(6, 5)) ** 2


def test_symmetric_diag01():
    de = distance_equation([[0, 0], [0, 1]])
    r = isolate_real_roots(de.F)
    first = [x for x in r if x.hi > 0][0]
    assert first.exact == Fraction(1, 4) or first.lo < Fraction(1, 4) < first.hi


def _direct_route(A, z0):
    return discriminant_direct(phi_at(build_phi(A), z0))


def test_properties_random(rng):
    # z^n divides D_lam(Phi); Hankel route equals the resultant route;
    # leading coefficient identity; no negative zeros
    count = 0
    while count < 100:
        n = (2, 3, 4)[count % 3]
        A = random_int_matrix(rng, n, -4, 4)
        if discriminant_direct(charpoly(A)) == 0:
            continue
        count += 1
        de = distance_equation(A)
        assert de.mode == NORMAL and de.z_power == n
        for z0 in (Fraction(1, 3), Fraction(2), Fraction(-5, 2)):
            assert _direct_route(A, z0) == z0 ** n * de.F(z0)
        S = [[A[i][j] + A[j][i] for j in range(n)] for i in range(n)]
        dS = discriminant_direct(charpoly(S))
        if dS != 0:
            assert de.F.degree == n * (n - 1)
            assert de.F.lc == 4 ** n * dS ** 2
            assert de.leading_check
        lc_sign = 1 if de.F.lc > 0 else -1
        for k in (Fraction(-1, 100), Fraction(-1), Fraction(-37, 3)):
            v = de.F(k)
            assert v != 0 and (v > 0) == (lc_sign > 0 if de.F.degree % 2 == 0 else lc_sign < 0)
        assert all(r.lo >= 0 for r in isolate_real_roots(de.F))


def test_no_negative_zeros_sturm(rng):
    X = sympy.Symbol("X")
    for _ in range(20):
        A = random_nondefective(rng, 3)
        F = distance_equation(A).F
        P = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in F.coeffs], X)
        assert P.count_roots(None, 0) == 0


def test_symbolic_2x2_discriminant_route():
    a, b, c, d, Zs, L = sympy.symbols("a b c d Zs L")
    M = sympy.Matrix([[L - a, -b], [-c, L - d]])
    phi = sympy.expand((M * M.T - Zs * sympy.eye(2)).det())
    disc = sympy.factor(sympy.discriminant(phi, L))
    # Zs^2 divides the discriminant
    assert sympy.rem(sympy.Poly(disc, Zs), sympy.Poly(Zs ** 2, Zs)).is_zero
    A = [[3, -1], [2, 5]]
    sub = {a: 3, b: -1, c: 2, d: 5}
    F = distance_equation(A).F
    quotient = sympy.Poly(sympy.cancel(disc.subs(sub) / Zs ** 2), Zs)
    assert [Fraction(str(t)) for t in quotient.all_coeffs()] == list(F.coeffs)


def test_orthogonal_similarity_invariance(rng):
    Q = householder([1, -2, 3])
    for _ in range(5):
        A = random_nondefective(rng, 3)
        B = mat_mul(mat_mul(transpose(Q), A), Q)
        assert distance_equation(B).F == distance_equation(A).F


def test_zero_value_factor_experiment(rng):
    # F(0) carries the factor D(f_A)^2, checked along one-parameter lines
    # A(t) = A0 + t A1 by interpolating both sides in t
    X = sympy.Symbol("t")
    for n in (2, 3):
        A0 = random_int_matrix(rng, n, -3, 3)
        A1 = random_int_matrix(rng, n, -3, 3)
        nodes, f0, dd = [], [], []
        t = 0
        while len(nodes) < 4 * n * n * (n - 1) + 8:
            A = [[A0[i][j] + t * A1[i][j] for j in range(n)] for i in range(n)]
            D = discriminant_direct(charpoly(A))
            t += 1
            if D == 0:
                continue
            nodes.append(t - 1)
            f0.append(distance_equation(A).F(0))
            dd.append(D)
        F0 = interpolate(nodes, f0)
        Dt = interpolate(nodes, dd)
        p = sympy.Poly(list(reversed([sympy.Rational(str(c)) for c in F0])), X)
        q = sympy.Poly(list(reversed([sympy.Rational(str(c)) for c in Dt])), X)
        assert sympy.rem(p, q ** 2).is_zero
