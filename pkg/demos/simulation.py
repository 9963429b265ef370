"""
Simulating a periodic stationary process
========================================

Independent Gaussian DFT coefficients with variance 2N Phi(zeta_k) give an
exactly periodic process with spectrum Phi.  Sample lags are compared with
the covariance extension.
"""

import numpy as np

from circarma import PseudoPolynomial, extend_covariances, sample_covariances, simulate, spectrum_of

N = 16
P, Q = PseudoPolynomial([1.0]), PseudoPolynomial([1.5, -0.6])
phi = spectrum_of(P, Q, N)
y = simulate(phi, 5000, seed=7, real=True)
print("realizations:", y.shape)

mean, se = sample_covariances(y, 4)
target = extend_covariances(Q, P, N).scalar_lags()[:5]
print(" k   sample     exact     z-score")
for k in range(5):
    print(f"{k:2d}  {mean[k].real:8.4f}  {target[k]:8.4f}  {(mean[k].real - target[k]) / se[k].real:+.2f}")
