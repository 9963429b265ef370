"""Synthetic ground truths and approximation-error sweeps.

A truth is a continuous-circle ARMA spectrum |b|^2 / |a|^2 given by its
poles and zeros.  Its exact covariance lags come from the impulse response
and its cepstrum from the roots, so the data fed to the solvers carry no
discretization error of their own.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import signal

from .cepstral import CepstralData, solve_joint
from .cones import CovarianceData
from .exceptions import NotPositiveError
from .harmonics import DiscreteCircle, PseudoPolynomial
from .solver import SolverConfig, solve_dual

IMPULSE_TOL = 1e-17


@dataclass(frozen=True, eq=False)
class ArmaTruth:
    """Phi(e^{i theta}) = gain^2 |prod(1 - z_i e^{-i theta})|^2 / |prod(1 - p_i e^{-i theta})|^2."""

    poles: tuple
    zeros: tuple = ()
    gain: float = 1.0

    def __post_init__(self):
        for name in ("poles", "zeros"):
            r = np.asarray(getattr(self, name), dtype=complex)
            if r.size and np.max(np.abs(r)) >= 1.0:
                raise NotPositiveError(f"truth model ({name} on or outside the unit circle)", 0, 1)
            object.__setattr__(self, name, tuple(complex(v) for v in r))

    @property
    def a(self):
        return np.poly(np.array(self.poles)) if self.poles else np.ones(1, dtype=complex)

    @property
    def b(self):
        base = np.poly(np.array(self.zeros)) if self.zeros else np.ones(1, dtype=complex)
        return self.gain * base

    @property
    def is_real(self):
        return bool(np.allclose(np.imag(self.a), 0) and np.allclose(np.imag(self.b), 0))

    def spectrum_at(self, thetas):
        z = np.exp(-1j * np.asarray(thetas, dtype=float))
        A = np.polyval(self.a[::-1], z)
        B = np.polyval(self.b[::-1], z)
        return np.abs(B) ** 2 / np.abs(A) ** 2

    def impulse_response(self):
        rmax = max([abs(p) for p in self.poles], default=0.0)
        if rmax == 0:
            return self.b.copy()
        length = len(self.b) + int(np.ceil(np.log(IMPULSE_TOL) / np.log(rmax))) + len(self.a)
        x = np.zeros(length, dtype=complex)
        x[0] = 1.0
        return signal.lfilter(self.b, self.a, x)

    def covariances(self, n):
        """c_k = integral of e^{ik theta} Phi, k = 0..n."""
        h = self.impulse_response()
        out = np.array([np.sum(h[k:] * np.conj(h[: h.size - k])) if k < h.size else 0.0
                        for k in range(n + 1)], dtype=complex)
        return out.real.astype(complex) if self.is_real else out

    def cepstrum(self, n):
        """gamma_k = sum_p p^k / k - sum_z z^k / k for k = 1..n."""
        k = np.arange(1, n + 1)
        g = np.zeros(n, dtype=complex)
        for p in self.poles:
            g += p**k / k
        for z in self.zeros:
            g -= z**k / k
        return g.real.astype(complex) if self.is_real else g


def pole_pairs(radii, angles):
    """Conjugate pairs r e^{+-i w}, giving a real model."""
    out = []
    for r, w in zip(radii, angles):
        out += [r * np.exp(1j * w), r * np.exp(-1j * w)]
    return tuple(out)


def ar8_truth():
    """Real AR(8) truth with sharp peaks (pole radii up to 0.97)."""
    return ArmaTruth(pole_pairs([0.97, 0.9, 0.85, 0.8], [0.3 * np.pi, 0.55 * np.pi, 0.8 * np.pi, 0.1 * np.pi]))


def arma_truth():
    """Real ARMA truth with eight poles and three zeros close to the circle."""
    poles = pole_pairs([0.9, 0.85, 0.8, 0.75], [0.2 * np.pi, 0.45 * np.pi, 0.7 * np.pi, 0.9 * np.pi])
    zeros = pole_pairs([0.95], [0.35 * np.pi]) + (-0.95,)
    return ArmaTruth(poles, zeros)


def sup_error(P, Q, truth, thetas):
    """max over ``thetas`` of |P/Q - Phi_true|, with P and Q evaluated off the grid."""
    z = np.exp(1j * np.asarray(thetas))
    est = (P(z) / Q(z)).real
    return float(np.max(np.abs(est - truth.spectrum_at(thetas))))


def me_fit(truth, n, N, config=None):
    c = CovarianceData(truth.covariances(n), N)
    P = PseudoPolynomial.constant(1.0)
    return P, solve_dual(c, P, config).Q


def arma_fit(truth, n, N, lam=1e-3, config=None):
    c = CovarianceData(truth.covariances(n), N)
    sol = solve_joint(c, CepstralData(truth.cepstrum(n)), lam * c.c0_scale, config)
    return sol.P, sol.Q


def me_decay_sweep(truth, n, Ns, workers=4, config=None):
    """Maximum-entropy error for each N, measured on the grid of the smallest N.

    Points run in a thread pool; rows come back ordered by N.
    """
    Ns = sorted(int(N) for N in Ns)
    if not Ns:
        raise ValueError("sweep needs at least one N")
    thetas = DiscreteCircle(Ns[0]).thetas

    def run(N):
        P, Q = me_fit(truth, n, N, config)
        return {"N": N, "n": n, "model": "ar", "error": sup_error(P, Q, truth, thetas)}

    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run, Ns))


def arma_vs_ar(truth, ar=(12, 1024), arma=(8, 128), lam=1e-3, config=None):
    """Errors of a bilateral AR fit and a bilateral ARMA (cepstral) fit.

    Both are measured on the grid of the smaller N.
    """
    thetas = DiscreteCircle(min(ar[1], arma[1])).thetas
    P_ar, Q_ar = me_fit(truth, ar[0], ar[1], config)
    P_arma, Q_arma = arma_fit(truth, arma[0], arma[1], lam, config)
    return [
        {"N": ar[1], "n": ar[0], "model": "ar", "error": sup_error(P_ar, Q_ar, truth, thetas)},
        {"N": arma[1], "n": arma[0], "model": "arma", "error": sup_error(P_arma, Q_arma, truth, thetas)},
    ]


def random_pseudo(n, rng, floor=0.5, scale=0.5, complex_coeffs=False):
    """Random pseudo-polynomial |a|^2 + floor, hence >= floor on the whole circle."""
    a = scale * rng.standard_normal(n + 1)
    if complex_coeffs:
        a = a + 1j * scale * rng.standard_normal(n + 1)
    a[0] = abs(a[0]) + 1.0
    p = PseudoPolynomial.from_factor(a) + PseudoPolynomial.constant(floor)
    return p


def random_interior_pair(n, rng, normalize_p=True, complex_coeffs=False):
    """(P, Q) positive on the whole circle, with p_0 = 1 if ``normalize_p``."""
    P = random_pseudo(n, rng, complex_coeffs=complex_coeffs)
    Q = random_pseudo(n, rng, complex_coeffs=complex_coeffs)
    if normalize_p:
        c = P.coeffs / P.coeffs[0].real
        c[0] = 1.0
        P = PseudoPolynomial(c)
    return P, Q


def default_config():
    return SolverConfig()
