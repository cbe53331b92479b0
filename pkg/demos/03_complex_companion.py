"""Complex rank-one perturbations can be much cheaper than real ones.

For a companion matrix with one real and two complex eigenvalues the real
branch needs d ~ 0.86, while a complex perturbation reaches a double
eigenvalue a + ib at distance ~ 0.035.

    python3 demos/03_complex_companion.py
"""
import mpmath

from wdist.complexdist import complex_distance
from wdist.gallery import EXPLICIT_MATRICES

A = EXPLICIT_MATRICES["companion3"]
rep = complex_distance(A, digits=30)

print("Ftilde(z) =", rep.equation.f_tilde)
print("quotient basis in (a, b^2):", rep.equation.basis)
print("\nreal branch   d   =", mpmath.nstr(rep.real.d, 12), rep.real.status)
print("complex branch d_C =", mpmath.nstr(rep.d_C, 30), rep.winner)
print("z~ =", mpmath.nstr(rep.z_tilde.value, 30))
print("a  =", mpmath.nstr(rep.a, 30))
print("b  =", mpmath.nstr(rep.b, 30))
print("residual of the (a, b^2) system:", mpmath.nstr(rep.residual, 3))

print("\neigenvalues of A + E0:")
for e in mpmath.eig(rep.B0)[0]:
    print("  ", mpmath.nstr(e, 12))
