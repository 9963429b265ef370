"""
Bilateral and unilateral ARMA models
====================================

A solved pair (P, Q) is a bilateral ARMA model driven by the conjugate
process.  Factoring P and Q as |b|^2 and |a|^2 gives forward and backward
unilateral models with the same spectrum, and b/a is a whitening filter.
"""

import numpy as np

from circarma import (PseudoPolynomial, bilateral_arma, factor_banded, spectrum_of, unilateral_arma,
                      whitening)

N = 32
P = PseudoPolynomial([1.0, 0.3])
Q = PseudoPolynomial([1.6, -0.5, 0.2])

model = bilateral_arma(P, Q, N)
print("bilateral lags:", model.lags)
print("  a (q_k):", np.round(model.a.real, 3))
print("  b (p_k):", np.round(model.b.real, 3))

a = factor_banded(Q)
print("\nouter factor of Q:", np.round(a.real, 6), " roots:", np.round(np.roots(a), 4))

fwd, bwd = unilateral_arma(P, Q)
phi = spectrum_of(P, Q, N)
print("\nforward model a:", np.round(fwd.a.real, 6), " b:", np.round(fwd.b.real, 6))
print("backward model a:", np.round(bwd.a.real, 6))
print("same spectrum:", np.allclose(fwd.spectrum(N).values, phi.values),
      np.allclose(bwd.spectrum(N).values, phi.values))

for method in ("outer", "log", "pointwise"):
    W = whitening(phi, P, Q, method=method)
    print(f"whitening ({method:9s}) |W|^2 residual: {W.residual(phi):.2e}")
