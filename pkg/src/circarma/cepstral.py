"""Joint matching of covariance lags and cepstral (log-spectrum) moments.

The numerator P (normalized to p_0 = 1) and the denominator Q are found
together by minimizing the regularized functional

    J_lam(P, Q) = <c, q> - <gamma, p>
                  + 1/(2N) sum_j [P log(P/Q) - lam log P](zeta_j)

which is strictly convex for lam > 0.  At the optimum Phi = P/Q matches
c_0..c_n exactly, while its cepstral coefficients equal gamma_k + eps_k
with eps_k = lam * moment_k(1/P).
"""

from dataclasses import dataclass

import numpy as np

from . import _newton
from .cones import CovarianceData, toeplitz_positive
from .exceptions import BoundaryError, IndeterminateError, InfeasibleError, NotPositiveError
from .harmonics import (DiscreteCircle, DiscreteSpectrum, PseudoPolynomial, discrete_moment, moments_of, nearly_real,
                        parse_complex)
from .solver import SolverConfig, from_real, pairing_vector, real_basis, solve_dual, to_real



class CepstralData:
    """Cepstral coefficients gamma_1..gamma_n (gamma_0 = 0 by convention)."""

    __slots__ = ("_gammas",)

    def __init__(self, gammas):
        g = np.array(np.atleast_1d(gammas), dtype=complex)
        if g.ndim != 1:
            raise ValueError("cepstral coefficients must be a 1-d sequence")
        if not np.all(np.isfinite(g)):
            raise ValueError("cepstral coefficients must be finite")
        g.setflags(write=False)
        self._gammas = g

    @property
    def gammas(self):
        return self._gammas

    @property
    def n(self):
        return self._gammas.size

    def to_json(self):
        return [[float(v.real), float(v.imag)] for v in self._gammas]

    @classmethod
    def from_json(cls, raw):
        """Accepts a list of [re, im] pairs (or numbers), or an object with a ``gammas`` list."""
        if isinstance(raw, dict):
            raw = raw["gammas"]
        return cls([parse_complex(v) for v in raw])

    def __repr__(self):
        return f"CepstralData(n={self.n})"


def _as_cepstral(gamma):
    return gamma if isinstance(gamma, CepstralData) else CepstralData(gamma)


def cepstral_moments(phi, n):
    """gamma_k = moment_k(log Phi) for k = 1..n."""
    if phi.is_matrix:
        raise ValueError("use multivar.block_cepstrum for matrix spectra")
    if not phi.positive:
        j = int(np.argmin(phi.values))
        raise NotPositiveError("spectrum", phi.circle.indices[j], phi.N, float(phi.values[j]))
    logphi = DiscreteSpectrum(phi.circle, np.log(phi.values))
    return CepstralData(moments_of(logphi, n)[1:])


def epsilon_adjustment(P, lam, n, N):
    """eps_k = lam * moment_k(1/P) for k = 1..n."""
    circle = DiscreteCircle(N)
    Pv = P.values(circle)
    if np.any(Pv <= 0):
        j = int(np.argmin(Pv))
        raise NotPositiveError("numerator P", circle.indices[j], N, float(Pv[j]))
    inv = DiscreteSpectrum(circle, 1.0 / Pv)
    return lam * np.array([discrete_moment(inv, k) for k in range(1, n + 1)], dtype=complex)


class JointDual:
    """J_lam in the real coordinates z = (x, y).

    x = (q_0, Re q_1, Im q_1, ...) has length 2n+1 and y = (Re p_1, Im p_1, ...)
    has length 2n, p_0 being fixed to 1.
    """

    def __init__(self, c, gamma, lam):
        gamma = _as_cepstral(gamma)
        self.c = c
        self.lam = float(lam)
        self.circle = c.circle
        self.n = c.n
        self.B = real_basis(self.circle, c.n)
        self.Bp = real_basis(self.circle, c.n, constant=False)
        self.d = pairing_vector(c.lags)
        g = np.zeros(c.n + 1, dtype=complex)
        g[1: min(gamma.n, c.n) + 1] = gamma.gammas[: c.n]
        self.g = 2.0 * to_real(g, constant=False)
        self.size = self.circle.size
        self.nx = 2 * c.n + 1

    def split(self, z):
        return z[: self.nx], z[self.nx:]

    def values(self, z):
        x, y = self.split(z)
        return 1.0 + self.Bp @ y, self.B @ x

    def value(self, z):
        Pv, Qv = self.values(z)
        if np.any(Pv <= 0) or np.any(Qv <= 0):
            return np.inf
        x, y = self.split(z)
        tail = np.sum(Pv * np.log(Pv / Qv) - self.lam * np.log(Pv)) / self.size
        return float(self.d @ x - self.g @ y + tail)

    def gradient(self, z):
        Pv, Qv = self.values(z)
        gx = self.d - self.B.T @ (Pv / Qv) / self.size
        gy = -self.g + self.Bp.T @ (np.log(Pv / Qv) + 1.0 - self.lam / Pv) / self.size
        return np.concatenate([gx, gy])

    def hessian(self, z):
        Pv, Qv = self.values(z)
        s = self.size
        Hxx = (self.B.T * (Pv / Qv**2 / s)) @ self.B
        Hxy = -(self.B.T * (1.0 / Qv / s)) @ self.Bp
        Hyy = (self.Bp.T * ((1.0 / Pv + self.lam / Pv**2) / s)) @ self.Bp
        return np.block([[Hxx, Hxy], [Hxy.T, Hyy]])

    def derivatives(self, z):
        return self.gradient(z), self.hessian(z)

    def boundary_gap(self, z):
        Pv, Qv = self.values(z)
        x, _ = self.split(z)
        return float(min(np.min(Pv), np.min(Qv) / max(abs(x[0]), 1e-300)))

    def step(self, g, H):
        """Joint Newton step; separate P- and Q-steps only if the joint step is unusable.

        Near common-factor pairs H is badly conditioned but the joint step is
        still a descent direction, and the separate steps stall there.
        """
        dx = _newton.newton_step(g, H)
        if np.all(np.isfinite(dx)) and g @ dx < 0:
            return dx
        nx = self.nx
        return np.concatenate([_newton.newton_step(g[:nx], H[:nx, :nx]),
                               _newton.newton_step(g[nx:], H[nx:, nx:])])


def joint_dual_objective(P, Q, c, gamma, lam):
    """J_lam(P, Q); +inf when P or Q is not positive on the grid."""
    n = c.n
    if abs(P.coeffs[0] - 1.0) > 1e-12:
        raise ValueError("the numerator must be normalized to p_0 = 1")
    prob = JointDual(c, _as_cepstral(gamma), lam)
    z = np.concatenate([to_real(Q.padded(n).coeffs), to_real(P.padded(n).coeffs, constant=False)])
    return prob.value(z)


@dataclass(frozen=True, eq=False)
class JointSolution:
    P: PseudoPolynomial
    Q: PseudoPolynomial
    lam: float
    epsilon: np.ndarray
    phi: DiscreteSpectrum
    covariance_residual: float
    cepstral_residual: float
    grad_norm: float
    iterations: int

    @property
    def N(self):
        return self.phi.N


def solve_joint(c, gamma, lam=None, config=None, allow_unregularized=False):
    """Minimize J_lam over (P, Q) with p_0 = 1 by damped Newton steps.

    ``lam`` defaults to 1e-2 * c_0.  lam = 0 is rejected unless
    ``allow_unregularized`` is set, in which case a run that stalls on the
    boundary of the positive cone raises BoundaryError.
    """
    cfg = config or SolverConfig()
    if not isinstance(c, CovarianceData) or not c.is_scalar:
        raise TypeError("expected scalar CovarianceData")
    gamma = _as_cepstral(gamma)
    lam = 1e-2 * c.c0_scale if lam is None else float(lam)
    if lam < 0 or (lam == 0 and not allow_unregularized):
        raise ValueError(f"regularization lam must be positive, got {lam}")
    if not toeplitz_positive(c):
        raise InfeasibleError("Toeplitz matrix of the data is not positive definite", iterations=0)
    prob = JointDual(c, gamma, lam)
    n = c.n
    z0 = np.zeros(4 * n + 1)
    if cfg.q_init is not None:
        z0[: 2 * n + 1] = to_real(cfg.q_init.padded(n).coeffs)
    else:
        # start from the maximum-entropy solution; with P = 1 and Q constant
        # the unregularized Hessian would be singular
        me = solve_dual(c, PseudoPolynomial.constant(1.0), cfg)
        z0[: 2 * n + 1] = to_real(me.Q.padded(n).coeffs)
    res = _newton.minimize(prob.value, prob.derivatives, z0, max_iter=cfg.max_iter,
                           gtol=cfg.gtol * c.c0_scale, armijo=cfg.armijo, backtrack=cfg.backtrack,
                           boundary_gap=prob.boundary_gap, step=prob.step)
    if res.status == "diverged":
        raise InfeasibleError("joint dual iterates diverged: data not in the periodic dual cone",
                              direction=from_real(res.x[: 2 * n + 1] / np.linalg.norm(res.x)),
                              iterations=res.iterations)
    if res.status == "boundary" or (lam == 0 and res.status != "converged"):
        raise BoundaryError(f"joint problem terminated on the boundary after {res.iterations} "
                            f"iterations (lam = {lam:g})")
    if res.status != "converged":
        raise IndeterminateError(f"Newton solver stopped ({res.status}) after {res.iterations} "
                                 f"iterations with gradient norm {res.grad_norm:.3g}")
    z = res.x.copy()
    real = nearly_real(c.lags) and nearly_real(gamma.gammas)
    if real:
        # real data have a real minimizer (conjugation symmetry); drop rounding drift
        z[2:prob.nx:2] = 0.0
        z[prob.nx + 1::2] = 0.0
    x, y = prob.split(z)
    Q = PseudoPolynomial(from_real(x), real=real)
    P = PseudoPolynomial(from_real(y, constant=False), real=real)
    Pv, Qv = prob.values(z)
    phi = DiscreteSpectrum(c.circle, Pv / Qv)
    eps = epsilon_adjustment(P, lam, n, c.N)
    cov_res = float(np.max(np.abs(moments_of(phi, n) - c.lags)))
    target = np.zeros(n, dtype=complex)
    target[: min(gamma.n, n)] = gamma.gammas[:n]
    cep_res = float(np.max(np.abs(cepstral_moments(phi, n).gammas - (target + eps)))) if n else 0.0
    return JointSolution(P=P, Q=Q, lam=lam, epsilon=eps, phi=phi, covariance_residual=cov_res,
                         cepstral_residual=cep_res, grad_norm=res.grad_norm, iterations=res.iterations)
