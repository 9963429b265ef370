"""
Circulant matrices and their symbols
====================================

A 2N x 2N circulant matrix is diagonalized by the DFT; its eigenvalues are
the values of its symbol on the 2N-th roots of unity.  Products, inverses
and logarithms are then taken pointwise on the grid.
"""

import numpy as np

from circarma import CirculantMatrix, PseudoPolynomial, banded, dense, grid, inverse, is_banded

N = 4
circle = grid(N)
print("grid indices  :", circle.indices)
print("grid angles/pi:", np.round(circle.thetas / np.pi, 3))

# A banded symbol 2.5 + zeta + zeta^-1 and its circulant matrix
Q = PseudoPolynomial([2.5, 1.0])
M = banded(Q, N)
print("\nfirst row of the circulant matrix:")
print(np.round(dense(M)[0].real, 3))

# The inverse is again circulant, but no longer banded
Minv = inverse(M)
ok, resid = is_banded(Minv, 1)
print(f"\ninverse banded of order 1? {ok} (largest out-of-band coefficient {resid:.3g})")
print("dense check:", np.allclose(dense(Minv), np.linalg.inv(dense(M))))

# Block circulants do not commute
rng = np.random.default_rng(0)
A = CirculantMatrix(rng.standard_normal((2 * N, 2, 2)))
B = CirculantMatrix(rng.standard_normal((2 * N, 2, 2)))
print("\nblock product commutes?", np.allclose((A @ B).values, (B @ A).values))
