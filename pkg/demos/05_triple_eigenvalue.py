"""When the nearest point is a triple eigenvalue.

The rank-one machinery finds critical points at smooth points of the set
of matrices with a multiple eigenvalue.  For n = 3 the nearest point can
sit where three eigenvalues meet, reached only by a rank-two perturbation.
Here the certified rank-one value is about 4.39, while a matrix with the
triple eigenvalue -1 is at squared distance about 0.60.

    python3 demos/05_triple_eigenvalue.py
"""
import numpy as np
from scipy.optimize import minimize

from wdist.nearest import wilkinson_distance

A = [[-3, -2, -1], [1, -2, -2], [2, 4, 2]]
rep = wilkinson_distance(A, digits=20)
print("rank-one status:", rep.status, " z* =", float(rep.z_star.value))

An = np.array(A, float)
mu = np.trace(An) / 3


def cost(p):
    # distance from A to a matrix mu I + N with N strictly upper triangular in basis Q
    Q, _ = np.linalg.qr(p[:9].reshape(3, 3))
    M = Q.T @ An @ Q
    return M[1, 0] ** 2 + M[2, 0] ** 2 + M[2, 1] ** 2 + sum((M[i, i] - mu) ** 2 for i in range(3))


rng = np.random.default_rng(1)
best = min((minimize(cost, rng.normal(size=9)) for _ in range(50)), key=lambda r: r.fun)
Q, _ = np.linalg.qr(best.x.reshape(3, 3))
M = Q.T @ An @ Q
T = np.triu(M, 1) + mu * np.eye(3)
B = Q @ T @ Q.T
E = B - An
print("triple eigenvalue mu =", mu, " squared distance =", round(best.fun, 7))
print("rank of E:", np.linalg.matrix_rank(E, tol=1e-8), " eigenvalues of B:", np.round(np.linalg.eigvals(B), 4))
