"""
Matching covariance and cepstral coefficients
=============================================

Covariance lags fix Q only once P is chosen.  Adding the first logarithmic
moments of the spectrum (cepstral coefficients) fixes both.  A small
regularization lam keeps the solution interior; the cepstral coefficients
actually matched are gamma_k + eps_k with eps_k = lam * moment_k(1/P).
With data from a degree-2 truth and n = 2 the fit approaches the truth as lam
shrinks.  With n larger than the true degree the unregularized problem has a
family of solutions sharing common factors, and lam picks one of them.
"""

import numpy as np

from circarma import CovarianceData, PseudoPolynomial, cepstral_moments, moments_of, solve_joint, spectrum_of

N, n = 64, 2
P_true = PseudoPolynomial([1.0, 0.35, -0.1])
Q_true = PseudoPolynomial([1.4, -0.6, 0.25])
phi = spectrum_of(P_true, Q_true, N)
c = CovarianceData(moments_of(phi, n), N)
gamma = cepstral_moments(phi, n)

for lam in (1e-1, 1e-2, 1e-4, 1e-6):
    sol = solve_joint(c, gamma, lam)
    print(f"lam = {lam:g}")
    print("  P:", np.round(sol.P.coeffs.real, 5), " Q:", np.round(sol.Q.coeffs.real, 5))
    print(f"  max |eps| = {np.max(np.abs(sol.epsilon)):.2e}, covariance residual {sol.covariance_residual:.1e},"
          f" cepstral residual {sol.cepstral_residual:.1e}")
print("\ntrue P:", P_true.coeffs.real, " true Q:", Q_true.coeffs.real)
