"""Complex rank-one branch: Theta/Xi, the eliminant Ftilde and recovery of (a, b)."""
from fractions import Fraction

import mpmath
import numpy as np
import pytest
import sympy

from conftest import random_int_matrix
from wdist.complexdist import (COMPLEX_BRANCH, REAL_BRANCH, build_theta, complex_distance,
                               complex_distance_equation, full_eliminant_at, recover_ab,
                               resultant_eliminant_at)
from wdist.errors import EliminationDegenerate
from wdist.gallery import COMPANION3_FTILDE, EXPLICIT_MATRICES, GallerySpec, reference_values
from wdist.ratpoly import MPoly, charpoly, discriminant_direct, interpolate
from wdist.specpoly import build_phi, distance_equation

C3 = EXPLICIT_MATRICES["companion3"]


def _generic(rng, n, count):
    out = []
    while len(out) < count:
        A = random_int_matrix(rng, n, -4, 4)
        if discriminant_direct(charpoly(A)) != 0:
            out.append(A)
    return out


@pytest.fixture(scope="module")
def c3():
    return complex_distance(C3, digits=30)


@pytest.fixture(scope="module")
def c3_ref():
    return reference_values(GallerySpec("EXPLICIT", 3, {"name": "companion3"}))


def test_theta_even_and_slice(rng):
    for A in _generic(rng, 3, 30):
        th = build_theta(A)
        assert th.is_even_in_b()
        flipped = MPoly({(i, j, k): c * (-1) ** j for (i, j, k), c in th.theta.terms.items()},
                        th.theta.vars)
        assert flipped == th.theta
        slice0 = {(i, k): c for (i, j, k), c in th.theta.terms.items() if j == 0}
        phi = build_phi(A)
        assert slice0 == {e: Fraction(c) for e, c in phi.terms.items()}


def test_theta_rational_entries():
    A = [[Fraction(1, 2), 1], [Fraction(-2, 3), 0]]
    th = build_theta(A)
    slice0 = {(i, k): c for (i, j, k), c in th.theta.terms.items() if j == 0}
    assert slice0 == {e: Fraction(c) for e, c in build_phi(A).terms.items()}


def test_companion3_xi():
    th = build_theta(C3)
    a, bb, z = (sympy.Symbol(s) for s in ("a", "bb", "z"))
    xi = sum(sympy.Rational(c.numerator, c.denominator) * a ** i * bb ** j * z ** k
             for (i, j, k), c in th.xi.terms.items())
    P = sympy.Poly(xi, z)
    assert P.coeff_monomial(z ** 3) == -1
    assert sympy.expand(P.coeff_monomial(z ** 2) - (3 * a ** 2 + 3 * bb + 26 * a + 11477)) == 0
    free = (a ** 2 + bb + 14 * a + 49) * ((a ** 2 + bb + 6 * a + 13) ** 2 - 16 * bb)
    assert sympy.expand(P.coeff_monomial(1) - free) == 0


def test_companion3_ftilde_exact(c3):
    cde = c3.equation
    assert [int(x) for x in cde.f_tilde.coeffs] == COMPANION3_FTILDE
    assert cde.basis[:3] == [(0, 0), (1, 0), (0, 1)]


def test_two_by_two_has_constant_ftilde():
    cde = complex_distance_equation([[1, 2], [3, 4]])
    assert cde.f_tilde.degree == 0


def test_companion3_ab(c3, c3_ref):
    ex = c3_ref.extra
    with mpmath.workdps(40):
        for got, key in ((c3.a, "a"), (c3.bb, "bb"), (c3.b, "b")):
            assert abs(got - mpmath.mpf(ex[key])) < mpmath.mpf(10) ** -25
        assert c3.residual < mpmath.mpf(10) ** -25
        z = c3.z_tilde.value
        assert abs(z - mpmath.mpf(ex["z_tilde"])) < mpmath.mpf(10) ** -30


def test_companion3_ratios(c3, c3_ref):
    # a and bb as printed rational functions of z, checked at z~
    with mpmath.workdps(40):
        z = c3.z_tilde.value
        for (num, den), got in ((c3_ref.extra["a_ratio"], c3.a), (c3_ref.extra["bb_ratio"], c3.bb)):
            v = mpmath.polyval(num, z) / mpmath.polyval(den, z)
            assert abs(v - got) < mpmath.mpf(10) ** -25


def test_companion3_cofactor_ratio_is_close(c3):
    sol = recover_ab(c3.equation, c3.z_tilde, 30)
    with mpmath.workdps(40):
        assert abs(sol.ratio_a - sol.a) < mpmath.mpf(10) ** -15
        assert abs(sol.ratio_bb - sol.bb) < mpmath.mpf(10) ** -15


def test_companion3_perturbation(c3, c3_ref):
    ex = c3_ref.extra
    U = [complex(c3.U0[i]) for i in range(3)]
    assert np.allclose(U, ex["U0"], atol=1e-6)
    E = np.array([[complex(c3.E0[i, j]) for j in range(3)] for i in range(3)])
    assert np.allclose(E, ex["E1"], atol=1e-6)
    assert np.linalg.norm(E) == pytest.approx(float(c3.d_C), rel=1e-12)
    assert np.linalg.matrix_rank(E, tol=1e-12) == 1
    B = np.array([[complex(c3.B0[i, j]) for j in range(3)] for i in range(3)])
    eig = np.linalg.eigvals(B)
    mu = complex(float(c3.a), float(c3.b))
    assert sum(abs(e - mu) < 1e-6 for e in eig) == 2
    third = [e for e in eig if abs(e - mu) > 1e-6][0]
    assert third == pytest.approx(ex["third_eig"], abs=1e-6)


def test_companion3_competition(c3, c3_ref):
    assert c3.winner == COMPLEX_BRANCH
    with mpmath.workdps(40):
        assert abs(c3.d_C - mpmath.mpf("0.035026405335676681771543151648")) < mpmath.mpf(10) ** -25
    assert float(c3.real.z_star.value) == pytest.approx(0.739336, abs=1e-6)
    zs = [float(r.value) for r in isolate_real(distance_equation(C3).F) if r.value > 0]
    assert zs == pytest.approx(c3_ref.extra["real_zeros"], rel=1e-6)


def isolate_real(F):
    from wdist.roots import isolate_real_roots, refine
    return [refine(r, 12) for r in isolate_real_roots(F)]


def test_conjugate_pair_solves_theta_system(c3):
    # (a, -b) is a critical point of Theta as well
    th = c3.equation.theta
    ta, tb = th.theta.diff("a"), th.theta.diff("b")
    with mpmath.workdps(60):
        for b in (c3.b, -c3.b):
            pt = {"a": c3.a, "b": b, "z": c3.z_tilde.value}
            for p in (th.theta, ta, tb):
                val = sum(mpmath.mpf(c.numerator) / c.denominator * pt["a"] ** i * pt["b"] ** j
                          * pt["z"] ** k for (i, j, k), c in p.terms.items())
                assert abs(val) < mpmath.mpf(10) ** -20


def test_full_system_factorization(rng):
    # eliminant of (Theta, Theta_a, Theta_b) is c z^9 F Ftilde^2 at n = 3:
    # the b = 0 zeros give z^3 F, the pairs (a, +-b) give (z^3 Ftilde)^2
    done = 0
    for A in _generic(rng, 3, 40):
        if done == 20:
            break
        cde = complex_distance_equation(A)
        F = distance_equation(A).F
        ratios = set()
        try:
            for z0 in (Fraction(1, 3), 2, Fraction(7, 2), 5):
                den = Fraction(z0) ** 9 * F(z0) * cde.f_tilde(z0) ** 2
                if den == 0:
                    break
                ratios.add(full_eliminant_at(cde.theta, z0)[0] / den)
        except EliminationDegenerate:
            continue
        done += 1
        assert len(ratios) == 1 and 0 not in ratios
    assert done == 20


def test_resultant_route_contains_ftilde():
    A = [[1, 2, 0], [-1, 3, 1], [2, 0, -1]]
    cde = complex_distance_equation(A)
    nodes, vals, prev = [], [], None
    for z0 in range(1, 80):
        nodes.append(z0)
        vals.append(resultant_eliminant_at(cde.theta, z0))
        cur = interpolate(nodes, vals)
        if prev is not None and len(cur) == len(prev) and cur == prev:
            break
        prev = cur
    X = sympy.Symbol("X")
    R = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(cur)], X)
    Ft = sympy.Poly([int(c) for c in cde.f_tilde.coeffs], X)
    assert sympy.rem(R, Ft).is_zero


def test_complex_never_worse(rng):
    for A in _generic(rng, 3, 12):
        rep = complex_distance(A, digits=20)
        if rep.d_C is None:
            continue
        assert rep.d_C <= rep.real.d * (1 + mpmath.mpf(10) ** -15)


def test_symmetric_stays_real():
    rep = complex_distance([[2, 1, 0], [1, 3, 1], [0, 1, 5]], digits=20)
    assert rep.winner == REAL_BRANCH
    assert rep.d_C == rep.real.d
    assert rep.degenerate is not None
