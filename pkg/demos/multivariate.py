"""
Block-circulant extension for vector processes
==============================================

For an m-dimensional process the lags are m x m matrices, the numerator P
stays scalar and Q becomes a matrix pseudo-polynomial.  The same dual
approach recovers Q from the block lags.
"""

import numpy as np

from circarma import (CovarianceData, MatrixPseudoPolynomial, PseudoPolynomial, block_extension_and_sigma,
                      block_moments, block_spectrum, dense, solve_dual_block)

N, n = 8, 1
Q_true = MatrixPseudoPolynomial([[[2.0, 0.3], [0.3, 1.5]], [[-0.4, 0.1j], [0.2, 0.3]]])
P = PseudoPolynomial([1.0])
C = CovarianceData(block_moments(block_spectrum(P, Q_true, N), n), N)

sol = solve_dual_block(C, P)
print("recovered Q_0:\n", np.round(sol.Q.coeffs[0], 6))
print("recovered Q_1:\n", np.round(sol.Q.coeffs[1], 6))
print("max error:", np.max(np.abs(sol.Q.coeffs - Q_true.coeffs)))

seq, Sigma = block_extension_and_sigma(P, sol.Q, N)
G = np.linalg.inv(dense(Sigma))
print("\nblocks of Sigma^-1 in the first block column (norm by lag):")
print(np.round([np.linalg.norm(G[2 * k:2 * k + 2, :2]) for k in range(2 * N)], 8))
