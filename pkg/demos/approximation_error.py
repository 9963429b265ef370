"""
Approximating continuous spectra on a finite period
===================================================

Data from a continuous ARMA spectrum fitted on the grid: the maximum-entropy
error shrinks as the period grows, and a low-order cepstral ARMA fit beats a
higher-order AR fit on a truth with zeros near the circle.
"""

from circarma.experiments import ar8_truth, arma_truth, arma_vs_ar, me_decay_sweep

print("AR(8) truth, ME fit of order 8:")
for row in me_decay_sweep(ar8_truth(), 8, [32, 64, 128, 256]):
    print(f"  N = {row['N']:4d}   sup error {row['error']:.4g}")

print("\nARMA truth:")
for row in arma_vs_ar(arma_truth()):
    print(f"  {row['model']:4s} n = {row['n']:2d}, N = {row['N']:4d}   sup error {row['error']:.4g}")
