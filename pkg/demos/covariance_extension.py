"""
Maximum-entropy and rational covariance extension
=================================================

Given lags c_0..c_n of a process with period 2N, decide whether they can be
extended to a periodic covariance sequence, then find the unique spectrum
P/Q that matches them for a chosen numerator P.
"""

import numpy as np

from circarma import (CovarianceData, PseudoPolynomial, banded, certify_membership, extend_covariances,
                      is_banded, solve_dual, toeplitz_positive)

N = 16
c = CovarianceData([1.0, 0.6, 0.2, -0.1], N)
print("Toeplitz positive definite:", toeplitz_positive(c))
print("membership in the periodic cone:", certify_membership(c).status)

# Maximum entropy: P = 1, the inverse covariance is banded
me = solve_dual(c, PseudoPolynomial([1.0]))
print("\nME denominator Q:", np.round(me.Q.coeffs.real, 6))
seq = extend_covariances(me.Q, PseudoPolynomial([1.0]), N)
print("extended lags c_0..c_6:", np.round(seq.scalar_lags()[:7], 6))
ok, resid = is_banded(seq.sigma().inverse(), 3)
print(f"Sigma^-1 banded of order 3: {ok} (out-of-band {resid:.2g})")

# A different numerator gives a different extension with the same first lags
P = PseudoPolynomial([1.0, 0.4])
sol = solve_dual(c, P)
seq2 = extend_covariances(sol.Q, P, N)
print("\nwith P = 1 + 0.4(z + 1/z):")
print("  Q:", np.round(sol.Q.coeffs.real, 6))
print("  lags c_0..c_6:", np.round(seq2.scalar_lags()[:7], 6))
print("  Q Sigma = P:", np.allclose((banded(sol.Q, N) @ seq2.sigma()).values, banded(P, N).values))

# Toeplitz positivity alone is not enough on a finite period
bad = CovarianceData([1.0] + [0.99 * np.exp(1j * k * np.pi / 6) for k in (1, 2)], 3)
print("\nnear-line-spectrum data on N = 3:")
print("  Toeplitz positive definite:", toeplitz_positive(bad))
print("  membership:", certify_membership(bad).status)
