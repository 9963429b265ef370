"""
Conditional orthogonality and banded inverses
=============================================

For a reciprocal process of order n the inverse covariance G is banded.
Estimation errors of y(j) and y(k) given all other samples are uncorrelated
exactly where G vanishes.
"""

import numpy as np

from circarma import PseudoPolynomial, banded, conditional_orthogonality

N = 4
Q = PseudoPolynomial([2.0, 0.6, -0.2])  # Sigma^-1 = circulant(Q), order 2
Sigma = banded(Q, N).inverse()

print("lag  E{err(0) err(k)^*}")
for k in range(1, 2 * N):
    v = conditional_orthogonality(Sigma, [0], [k])[0, 0]
    print(f"{k:3d}  {v.real:+.3e}")
print("\nnonzero only for lags within 2 of 0 (mod 8)")
