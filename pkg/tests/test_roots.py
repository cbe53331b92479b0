"""Root isolation, refinement and sign-variation counts."""
import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_int_matrix
from wdist.errors import JacobiHypothesisViolated
from wdist.gallery import COMPANION3_FTILDE, EXPLICIT_MATRICES, F3_POLY, frank, kahan
from wdist.ratpoly import UniPoly, charpoly, discriminant_direct, zp_is_squarefree
from wdist.roots import (_variations_checked, count_complex_pairs, isolate_real_roots,
                         localization_count, refine, variation_count)
from wdist.specpoly import distance_equation, hankel_minors, newton_sums

Z = UniPoly([1, 0], "z")


def test_isolate_quadratic():
    r = isolate_real_roots(Z * Z - Z * 3 + 1)
    vals = [float(refine(x, 20).value) for x in r]
    assert vals == pytest.approx([0.381966, 2.618034], abs=1e-6)


def test_isolate_double():
    (r,) = isolate_real_roots((Z - 1) ** 2)
    assert r.multiplicity == 2 and r.lo <= 1 <= r.hi
    assert refine(r, 30).exact == 1


def test_isolate_frank3():
    r = isolate_real_roots(UniPoly(F3_POLY, "z"))
    assert len(r) == 6
    assert all(x.multiplicity == 1 for x in r)
    vals = [float(refine(x, 20).value) for x in r]
    assert vals == pytest.approx([0.036482, 0.648383, 2.316991, 4.954165, 5.274176, 6.75], abs=1e-6)
    assert refine(r[-1], 40).exact == Fraction(27, 4)


def test_intervals_disjoint_and_sorted(rng):
    for _ in range(30):
        A = random_int_matrix(rng, 3)
        if discriminant_direct(charpoly(A)) == 0:
            continue
        r = isolate_real_roots(distance_equation(A).F)
        for a, b in zip(r, r[1:]):
            assert a.hi <= b.lo


def test_refine_companion_ftilde():
    r = [x for x in isolate_real_roots(UniPoly(COMPANION3_FTILDE, "z")) if x.lo >= 0]
    z1 = refine(r[0], 28)
    # the printed digits are truncated, not rounded
    printed = Fraction("0.0012268490707391199222512104943")
    assert printed <= z1.lo and z1.hi < printed + Fraction(1, 10 ** 31)
    assert z1.rel_error <= Fraction(1, 10 ** 28)


def test_refine_frank10_root():
    F = distance_equation(frank(10)).F
    r = [x for x in isolate_real_roots(F) if x.lo >= 0]
    d = mpmath.sqrt(refine(r[0], 30).value)
    assert float(d) == pytest.approx(3.925527e-8, rel=1e-6)


def test_refine_monotone():
    F = UniPoly(F3_POLY, "z")
    r = isolate_real_roots(F)[0]
    prev = refine(r, 10)
    for digits in (15, 25, 40, 60):
        cur = refine(r, digits)
        assert prev.lo <= cur.lo and cur.hi <= prev.hi
        prev = cur


def test_refine_even_multiplicity():
    p = (Z * Z - 2) ** 2 * (Z + 5)
    r = [x for x in isolate_real_roots(p) if x.lo >= 0][0]
    assert r.multiplicity == 2
    v = refine(r, 30).value
    with mpmath.workdps(40):
        assert abs(v - mpmath.sqrt(2)) < mpmath.mpf(10) ** -29


def test_count_complex_pairs_examples():
    X = UniPoly([1, 0], "x")
    assert count_complex_pairs(X * X + 1) == 1
    assert count_complex_pairs(X ** 3 - 1) == 1
    assert count_complex_pairs(X ** 3 - X) == 0


def test_count_complex_pairs_frank5():
    F = distance_equation(frank(5)).F
    assert count_complex_pairs(F) == 4
    assert sum(r.multiplicity for r in isolate_real_roots(F)) == 12


@settings(max_examples=300, deadline=None)
@given(st.lists(st.sampled_from([-3, -1, 0, 0, 0, 1, 2, 5]), min_size=2, max_size=9)
       .filter(lambda c: c[0] != 0))
def test_real_plus_complex_is_degree(c):
    p = UniPoly(c, "x")
    if not zp_is_squarefree(p.int_form()[1]):
        return
    real = sum(r.multiplicity for r in isolate_real_roots(p))
    assert real + 2 * count_complex_pairs(p) == p.degree


def test_count_with_numeric_roots(rng):
    # independent check against mpmath.polyroots
    for _ in range(80):
        c = [rng.choice((-9, -2, 0, 0, 1, 4)) for _ in range(rng.randint(3, 8))]
        c[0] = c[0] or 1
        p = UniPoly(c, "x")
        if not zp_is_squarefree(p.int_form()[1]) or c[-1] == 0:
            continue
        roots = mpmath.polyroots(c, maxsteps=200, extraprec=200)
        nreal = sum(1 for x in roots if abs(mpmath.im(x)) < 1e-12)
        assert sum(r.multiplicity for r in isolate_real_roots(p)) == nreal
        assert p.degree - 2 * count_complex_pairs(p) == nreal


def test_variation_frank10():
    hm = hankel_minors(newton_sums(frank(10)))
    pts = [(Fraction(1, 10 ** 3), 5), (Fraction(1, 10 ** 9), 3),
           (Fraction(2, 10 ** 15), 1), (Fraction(1, 10 ** 15), 0)]
    for z0, v in pts:
        assert variation_count(hm, z0) == v


def test_variation_localize3():
    hm = hankel_minors(newton_sums(EXPLICIT_MATRICES["localize3"]))
    assert variation_count(hm, Fraction(2, 5)) == 0
    assert variation_count(hm, Fraction(1, 2)) == 1
    assert variation_count(hm, Fraction(9, 4)) == 0


def test_variation_real_spectrum_at_zero():
    hm = hankel_minors(newton_sums(frank(4)))
    assert variation_count(hm, 0) == 0


def test_localization_lower_bound_frank10():
    A = frank(10)
    hm = hankel_minors(newton_sums(A))
    F = distance_equation(A).F
    roots = isolate_real_roots(F)
    for z0 in (Fraction(1, 10 ** 3), Fraction(1, 10 ** 9), Fraction(2, 10 ** 15)):
        exact = sum(r.multiplicity for r in roots if r.lo < z0)
        assert localization_count(hm, z0) <= exact


def test_localization_lower_bound_random(rng):
    done = 0
    while done < 50:
        A = random_int_matrix(rng, 3)
        if discriminant_direct(charpoly(A)) == 0:
            continue
        hm = hankel_minors(newton_sums(A))
        roots = isolate_real_roots(distance_equation(A).F)
        z0 = Fraction(rng.randint(1, 400), 10)
        if any(r.lo <= z0 <= r.hi for r in roots):
            continue
        try:
            lb = localization_count(hm, z0)
        except JacobiHypothesisViolated:
            continue
        done += 1
        assert lb <= sum(r.multiplicity for r in roots if r.hi <= z0)


def test_jacobi_mid_zero_raises():
    with pytest.raises(JacobiHypothesisViolated):
        _variations_checked([1, 2, 0, 3])
    assert _variations_checked([1, -2, 3, 0, 0]) == 2


@pytest.mark.parametrize("A, expected", [
    (frank(10), 30),
    (kahan(5, Fraction(3, 5), Fraction(4, 5)), 8),
    (kahan(10, Fraction(3, 5), Fraction(4, 5)), 40),
])
def test_real_zero_count_against_flint(A, expected):
    # certified complex roots from FLINT/Arb as an independent count
    flint = pytest.importorskip("flint")
    F = distance_equation(A).F
    den = math.lcm(*(Fraction(c).denominator for c in F.coeffs))
    p = flint.fmpz_poly([int(Fraction(c) * den) for c in reversed(F.coeffs)])
    ref = sum(m for z, m in p.complex_roots() if z.imag.contains(0))
    assert ref == expected
    assert sum(r.multiplicity for r in isolate_real_roots(F)) == ref
