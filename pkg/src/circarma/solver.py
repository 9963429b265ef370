"""Convex dual solver for the scalar circulant rational covariance extension problem.

Given lags c_0..c_n and a numerator P positive on T_2N, the denominator Q
is the minimizer of

    J_P(Q) = <c, q> - 1/(2N) sum_j P(zeta_j) log Q(zeta_j)

over pseudo-polynomials of degree n positive on the grid.  At the optimum
Phi = P/Q reproduces c_0..c_n as discrete moments.

Q is handled through the real vector x = (q_0, Re q_1, Im q_1, ...,
Re q_n, Im q_n), in which Q(zeta_j) = (B x)_j with the columns of B being
1, 2 cos(k theta_j), 2 sin(k theta_j).
"""

from dataclasses import dataclass

import numpy as np

from . import _newton
from .cones import CovarianceData, toeplitz_positive
from .exceptions import IndeterminateError, InfeasibleError, NotPositiveError
from .harmonics import DiscreteCircle, DiscreteSpectrum, PseudoPolynomial, nearly_real


@dataclass(frozen=True)
class SolverConfig:
    max_iter: int = 200
    gtol: float = 1e-10  # relative to c_0
    backtrack: float = 0.5
    armijo: float = 1e-4
    q_init: object = None  # optional starting PseudoPolynomial

    def __post_init__(self):
        if self.max_iter < 1:
            raise ValueError("max_iter must be positive")
        if self.gtol <= 0 or self.armijo <= 0:
            raise ValueError("tolerances must be positive")
        if not 0 < self.backtrack < 1:
            raise ValueError("backtracking factor must lie in (0, 1)")


@dataclass(frozen=True, eq=False)
class DualSolution:
    Q: PseudoPolynomial
    P: PseudoPolynomial
    phi: DiscreteSpectrum
    grad_norm: float
    iterations: int
    primal: float
    dual: float
    values: tuple = ()

    @property
    def N(self):
        return self.phi.N


def real_basis(circle, n, constant=True):
    """Columns 1, 2cos(k theta), 2sin(k theta) for k = 1..n on the grid."""
    th = circle.thetas
    cols = [np.ones_like(th)] if constant else []
    for k in range(1, n + 1):
        cols.append(2.0 * np.cos(k * th))
        cols.append(2.0 * np.sin(k * th))
    if not cols:
        return np.zeros((th.size, 0))
    return np.column_stack(cols)


def to_real(coeffs, constant=True):
    coeffs = np.asarray(coeffs, dtype=complex)
    head = [coeffs[0].real] if constant else []
    tail = np.column_stack([coeffs[1:].real, coeffs[1:].imag]).ravel()
    return np.concatenate([head, tail])


def from_real(x, constant=True):
    x = np.asarray(x, dtype=float)
    if constant:
        return np.concatenate([[x[0]], x[1::2] + 1j * x[2::2]])
    return np.concatenate([[1.0], x[0::2] + 1j * x[1::2]])


def pairing_vector(lags):
    """Vector d with <c, q> = d . x (Hermitian pairing sum_k c_k conj(q_k))."""
    d = to_real(lags)
    d[1:] *= 2.0
    return d


class ScalarDual:
    """J_P and its derivatives in the real parametrization."""

    def __init__(self, c, P):
        self.c = c
        self.P = P
        self.circle = c.circle
        self.B = real_basis(self.circle, c.n)
        self.d = pairing_vector(c.lags)
        self.Pv = P.values(self.circle)
        self.size = self.circle.size

    def q_values(self, x):
        return self.B @ x

    def value(self, x):
        Qv = self.B @ x
        if np.any(Qv <= 0):
            return np.inf
        return float(self.d @ x - np.sum(self.Pv * np.log(Qv)) / self.size)

    def gradient(self, x):
        Qv = self.B @ x
        return self.d - self.B.T @ (self.Pv / Qv) / self.size

    def hessian(self, x):
        Qv = self.B @ x
        w = self.Pv / Qv**2 / self.size
        return (self.B.T * w) @ self.B

    def derivatives(self, x):
        Qv = self.B @ x
        phi = self.Pv / Qv
        g = self.d - self.B.T @ phi / self.size
        H = (self.B.T * (phi / Qv / self.size)) @ self.B
        return g, H

    def boundary_gap(self, x):
        Qv = self.B @ x
        return float(np.min(Qv) / max(abs(x[0]), 1e-300))


def _check_inputs(c, P):
    if not isinstance(c, CovarianceData):
        raise TypeError("expected CovarianceData")
    if not c.is_scalar:
        raise ValueError("scalar solver needs m = 1 data; use multivar.solve_dual_block")
    if P.degree > c.n:
        raise ValueError(f"numerator degree {P.degree} exceeds n = {c.n}")
    Pv = P.values(c.circle)
    if np.any(Pv <= 0):
        j = int(np.argmin(Pv))
        raise NotPositiveError("numerator P", c.circle.indices[j], c.N, float(Pv[j]))


def _real_x(Q, n):
    return to_real(Q.padded(n).coeffs)


def dual_objective(Q, c, P):
    """J_P(Q); +inf when Q is not positive on the grid."""
    return ScalarDual(c, P).value(_real_x(Q, c.n))


def dual_gradient(Q, c, P):
    """Gradient of J_P in the coordinates (q_0, Re q_1, Im q_1, ...)."""
    return ScalarDual(c, P).gradient(_real_x(Q, c.n))


def dual_hessian(Q, c, P):
    return ScalarDual(c, P).hessian(_real_x(Q, c.n))


def primal_value(phi, P):
    """Weighted entropy 1/(2N) sum_j P(zeta_j) log Phi(zeta_j)."""
    vals = phi.values
    if np.any(vals <= 0):
        j = int(np.argmin(vals))
        raise NotPositiveError("spectrum", phi.circle.indices[j], phi.N, float(vals[j]))
    return float(np.mean(P.values(phi.circle) * np.log(vals)))


def solve_dual(c, P, config=None):
    """Minimize J_P over Q positive on the grid.

    Raises InfeasibleError when the iterates escape to infinity or stall on
    the boundary (the data are then outside the periodic dual cone) and
    IndeterminateError when neither convergence nor a certificate is
    reached within the iteration budget.
    """
    cfg = config or SolverConfig()
    _check_inputs(c, P)
    if not toeplitz_positive(c):
        raise InfeasibleError("Toeplitz matrix of the data is not positive definite", iterations=0)
    prob = ScalarDual(c, P)
    n = c.n
    if cfg.q_init is not None:
        x0 = _real_x(cfg.q_init, n)
    else:
        x0 = np.zeros(2 * n + 1)
        x0[0] = P.coeffs[0].real / c.lags[0].real
    res = _newton.minimize(prob.value, prob.derivatives, x0, max_iter=cfg.max_iter,
                           gtol=cfg.gtol * c.c0_scale, armijo=cfg.armijo,
                           backtrack=cfg.backtrack, boundary_gap=prob.boundary_gap)
    if res.status in ("diverged", "boundary"):
        direction = from_real(res.x / np.linalg.norm(res.x))
        raise InfeasibleError(f"dual iterates {res.status}: data not in the periodic dual cone",
                              direction=direction, iterations=res.iterations)
    if res.status != "converged":
        raise IndeterminateError(f"Newton solver stopped ({res.status}) after {res.iterations} "
                                 f"iterations with gradient norm {res.grad_norm:.3g}")
    x = res.x.copy()
    real = nearly_real(P.coeffs) and nearly_real(c.lags)
    if real:
        # the minimizer for real data is real (conjugation symmetry); drop rounding drift
        x[2::2] = 0.0
    Q = PseudoPolynomial(from_real(x), real=real)
    Qv = prob.q_values(x)
    phi = DiscreteSpectrum(c.circle, prob.Pv / Qv)
    return DualSolution(Q=Q, P=P, phi=phi, grad_norm=res.grad_norm, iterations=res.iterations,
                        primal=primal_value(phi, P), dual=res.value, values=tuple(res.values))


def spectrum_of(P, Q, N):
    """Phi = P/Q on the grid, checking positivity of the denominator."""
    circle = DiscreteCircle(N)
    Qv = Q.values(circle)
    if np.any(Qv <= 0):
        j = int(np.argmin(Qv))
        raise NotPositiveError("denominator Q", circle.indices[j], N, float(Qv[j]))
    return DiscreteSpectrum(circle, P.values(circle) / Qv)
