"""Counting zeros of the distance equation without finding them.

Sign changes in the Hankel minors of the Newton sums give a lower bound
on how many zeros lie in (0, z0].  For Frank's matrix of order 10 the
bound drops to zero just below the square of the distance.

    python3 demos/02_localization.py
"""
from fractions import Fraction

import mpmath

from wdist.gallery import EXPLICIT_MATRICES, frank
from wdist.nearest import wilkinson_distance
from wdist.roots import localization_count, variation_count
from wdist.specpoly import hankel_minors, newton_sums

A = frank(10)
hm = hankel_minors(newton_sums(A))
print("Frank 10")
for z0 in (Fraction(1, 10**3), Fraction(1, 10**9), Fraction(2, 10**15), Fraction(1, 10**15)):
    print(f"  z0 = {float(z0):8.0e}   V = {variation_count(hm, z0)}   zeros in (0, z0] >= {localization_count(hm, z0)}")

d = wilkinson_distance(A, digits=20).d
print("  d^2 =", mpmath.nstr(d * d, 6), "which lies between 1e-15 and 2e-15")

B = EXPLICIT_MATRICES["localize3"]
hm = hankel_minors(newton_sums(B))
print("\n3x3 example", B)
for z0 in ("2/5", "1/2", "9/4"):
    print(f"  V({z0}) = {variation_count(hm, Fraction(z0))}")
