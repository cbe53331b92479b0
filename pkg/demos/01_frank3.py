"""Nearest matrix with a double eigenvalue to the 3x3 Frank matrix.

Walks through the real rank-one pipeline step by step:
the exact distance equation, its real zeros, the admissible one,
and the perturbation that reaches a double eigenvalue.

    python3 demos/01_frank3.py
"""
import mpmath

from wdist.gallery import frank
from wdist.nearest import verify_report, wilkinson_distance
from wdist.roots import refine
from wdist.specpoly import distance_equation

A = frank(3)
print("A =", [[int(x) for x in r] for r in A])

# the distance equation has integer coefficients once denominators are cleared
eq = distance_equation(A)
print("\nF(z) =", eq.F)

rep = wilkinson_distance(A, digits=30)
print("\nreal zeros of F:")
for r in rep.zero_inventory:
    rr = refine(r, 12)
    print("  ", mpmath.nstr(rr.value, 12), "(exact %s)" % rr.exact if rr.exact is not None else "")

print("\nstatus:", rep.status)
print("d      =", mpmath.nstr(rep.d, 20))
print("lambda =", mpmath.nstr(rep.lambda_star, 20))
print("E* =\n", mpmath.nstr(rep.E_star, 8))
print("B* = A + E* =\n", mpmath.nstr(rep.B_star, 8))
print("eigenvalues of B*:", [mpmath.nstr(mpmath.re(e), 10) for e in mpmath.eig(rep.B_star)[0]])

print("\nchecks:")
for c in verify_report(rep):
    print(f"  {c.name:20s} {'ok' if c.passed else 'FAILED'}  {mpmath.nstr(c.value, 3)}")
