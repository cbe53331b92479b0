"""A 4x4 family where the rank-one answer is only a candidate.

The least positive zero of F is double for every eps, so the zero walk
cannot certify minimality.  For small eps the true nearest point needs a
rank-two perturbation, and the rank-one candidate overshoots.

    python3 demos/04_epsilon_family.py
"""
from fractions import Fraction

from wdist.gallery import epsilon_family, epsilon_reference
from wdist.nearest import wilkinson_distance

print(f"{'eps':>6} {'rank-1 d':>12} {'published d':>12}  branch  status")
for eps in (Fraction(1, 2), Fraction(1), 2, 10, 61, 62, 100):
    rep = wilkinson_distance(epsilon_family(eps), digits=20)
    ref = epsilon_reference(eps)
    print(f"{str(eps):>6} {float(rep.d):12.8f} {ref.d:12.8f}  {ref.extra['branch']:6s}  {rep.status}")
    for z, why in rep.rejected:
        print(f"{'':>6} skipped z = {float(z.value):.6f} ({why})")
