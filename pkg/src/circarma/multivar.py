"""Block-circulant version: m x m covariance lags, scalar numerator P.

The denominator is a matrix pseudo-polynomial Q(zeta) = sum_k Q_k zeta^{-k}
with Q_{-k} = Q_k^*, and the spectrum is Phi = P Q^{-1}.  Both dual
problems are written over a generic real basis E_i of Hermitian matrix
symbols, so the same code handles every m (m = 1 reproduces the scalar
parametrization exactly):

    Q_0:          diagonal entries, then Re and Im of the upper triangle
    Q_k, k >= 1:  Re and Im of every entry (row-major)
"""

from dataclasses import dataclass

import numpy as np

from . import _newton
from .circulant import CirculantMatrix
from .cepstral import CepstralData, epsilon_adjustment
from .cones import CovarianceData, FullPeriodicSequence, toeplitz_positive
from .exceptions import BoundaryError, IndeterminateError, InfeasibleError, NotPositiveError
from .harmonics import DiscreteCircle, DiscreteSpectrum, PseudoPolynomial, moments_of, parse_complex
from .realization import ArmaModel
from .solver import SolverConfig, from_real, real_basis, to_real

EIG_FLOOR = 1e-14


class MatrixPseudoPolynomial:
    """Q(zeta) = sum_{|k|<=n} Q_k zeta^{-k} with m x m blocks and Q_{-k} = Q_k^*."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs):
        c = np.array(coeffs, dtype=complex)
        if c.ndim == 2:
            c = c[None]
        if c.ndim != 3 or c.shape[1] != c.shape[2]:
            raise ValueError(f"coefficients must have shape (n+1, m, m), got {c.shape}")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        q0 = c[0]
        if np.max(np.abs(q0 - q0.conj().T)) > 1e-12 * max(1.0, np.max(np.abs(q0))):
            raise ValueError("Q_0 must be Hermitian")
        c[0] = 0.5 * (q0 + q0.conj().T)
        c.setflags(write=False)
        self._coeffs = c

    @classmethod
    def identity(cls, m, n=0):
        c = np.zeros((n + 1, m, m), dtype=complex)
        c[0] = np.eye(m)
        return cls(c)

    @classmethod
    def from_scalar(cls, p, m=1):
        """p(zeta) I_m."""
        return cls(p.coeffs[:, None, None] * np.eye(m))

    @property
    def coeffs(self):
        return self._coeffs

    @property
    def degree(self):
        return self._coeffs.shape[0] - 1

    @property
    def m(self):
        return self._coeffs.shape[1]

    def padded(self, n):
        if n < self.degree:
            raise ValueError(f"cannot pad degree {self.degree} down to {n}")
        c = np.zeros((n + 1, self.m, self.m), dtype=complex)
        c[: self.degree + 1] = self._coeffs
        return MatrixPseudoPolynomial(c)

    def laurent(self):
        """Blocks Q_{-n}..Q_n."""
        c = self._coeffs
        return np.concatenate([np.conj(np.swapaxes(c[:0:-1], -1, -2)), c])

    def values(self, circle):
        """Hermitian grid values, shape (2N, m, m)."""
        if self.degree >= 2 * circle.N:
            raise ValueError(f"degree {self.degree} is not below 2N = {2 * circle.N}")
        th = circle.thetas
        out = np.broadcast_to(self._coeffs[0], (circle.size, self.m, self.m)).copy()
        for k in range(1, self.degree + 1):
            term = np.exp(-1j * k * th)[:, None, None] * self._coeffs[k]
            out += term + np.conj(np.swapaxes(term, -1, -2))
        return 0.5 * (out + np.conj(np.swapaxes(out, -1, -2)))

    def scalar(self):
        """The scalar PseudoPolynomial when m = 1."""
        if self.m != 1:
            raise ValueError("not a scalar pseudo-polynomial")
        return PseudoPolynomial(self._coeffs[:, 0, 0])

    def __eq__(self, other):
        if not isinstance(other, MatrixPseudoPolynomial):
            return NotImplemented
        n = max(self.degree, other.degree)
        return bool(np.array_equal(self.padded(n).coeffs, other.padded(n).coeffs))

    __hash__ = None

    def __repr__(self):
        return f"MatrixPseudoPolynomial(m={self.m}, n={self.degree})"

    def to_json(self):
        return {"m": self.m, "n": self.degree,
                "coeffs": [[[[float(v.real), float(v.imag)] for v in row] for row in blk]
                           for blk in self._coeffs]}

    @classmethod
    def from_json(cls, obj):
        return cls([[[parse_complex(v) for v in row] for row in blk] for blk in obj["coeffs"]])


def hermitian_basis(circle, m, n):
    """Grid values of the real basis E_i, shape (D, 2N, m, m) with D = m^2 + 2 n m^2."""
    th = circle.thetas
    size = circle.size
    out = []

    def unit(a, b):
        e = np.zeros((m, m), dtype=complex)
        e[a, b] = 1.0
        return e

    for a in range(m):
        out.append(np.broadcast_to(unit(a, a), (size, m, m)))
    for a in range(m):
        for b in range(a + 1, m):
            E = unit(a, b)
            out.append(np.broadcast_to(E + E.T, (size, m, m)))
            out.append(np.broadcast_to(1j * E - 1j * E.T, (size, m, m)))
    for k in range(1, n + 1):
        zk = np.exp(-1j * k * th)[:, None, None]
        for a in range(m):
            for b in range(m):
                E = unit(a, b)
                re = zk * E
                out.append(re + np.conj(np.swapaxes(re, -1, -2)))
                im = 1j * zk * E
                out.append(im + np.conj(np.swapaxes(im, -1, -2)))
    return np.array(out)


def to_block_real(Q, n):
    """Coordinates of Q in the basis of :func:`hermitian_basis`."""
    c = Q.padded(n).coeffs
    m = Q.m
    x = [c[0, a, a].real for a in range(m)]
    for a in range(m):
        for b in range(a + 1, m):
            x += [c[0, a, b].real, c[0, a, b].imag]
    for k in range(1, n + 1):
        for a in range(m):
            for b in range(m):
                x += [c[k, a, b].real, c[k, a, b].imag]
    return np.array(x, dtype=float)


def from_block_real(x, m, n):
    c = np.zeros((n + 1, m, m), dtype=complex)
    i = 0
    for a in range(m):
        c[0, a, a] = x[i]
        i += 1
    for a in range(m):
        for b in range(a + 1, m):
            c[0, a, b] = x[i] + 1j * x[i + 1]
            c[0, b, a] = x[i] - 1j * x[i + 1]
            i += 2
    for k in range(1, n + 1):
        for a in range(m):
            for b in range(m):
                c[k, a, b] = x[i] + 1j * x[i + 1]
                i += 2
    return MatrixPseudoPolynomial(c)


def _inv_and_logdet(Qv):
    """Q^{-1/2}, Q^{-1} and log det Q at every grid point; None if not PD."""
    w, V = np.linalg.eigh(Qv)
    if np.min(w) <= EIG_FLOOR * max(1.0, float(np.max(np.abs(w)))):
        return None
    Vh = np.conj(np.swapaxes(V, -1, -2))
    half = (V * (w ** -0.5)[:, None, :]) @ Vh
    inv = (V * (1.0 / w)[:, None, :]) @ Vh
    return half, inv, np.sum(np.log(w), axis=1)


class BlockDual:
    """J_P(Q) = <C, Q> - 1/(2N) sum_j P(zeta_j) log det Q(zeta_j)."""

    def __init__(self, C, P):
        self.C = C
        self.circle = C.circle
        self.m = C.m
        self.n = C.n
        self.E = hermitian_basis(self.circle, self.m, self.n)
        self.size = self.circle.size
        Cv = C.symbol_values()
        self.d = np.einsum("jab,ijba->i", Cv, self.E).real / self.size
        self.Pv = P.values(self.circle)

    def q_values(self, x):
        return np.tensordot(x, self.E, axes=(0, 0))

    def value(self, x):
        f = _inv_and_logdet(self.q_values(x))
        if f is None:
            return np.inf
        return float(self.d @ x - np.sum(self.Pv * f[2]) / self.size)

    def gradient(self, x):
        _, inv, _ = _inv_and_logdet(self.q_values(x))
        tr = np.einsum("jab,ijba->ij", inv, self.E).real
        return self.d - tr @ self.Pv / self.size

    def hessian(self, x):
        half, _, _ = _inv_and_logdet(self.q_values(x))
        F = half[None] @ self.E @ half[None]
        F = F * np.sqrt(self.Pv / self.size)[None, :, None, None]
        F = F.reshape(F.shape[0], -1)
        return (F @ F.conj().T).real

    def derivatives(self, x):
        return self.gradient(x), self.hessian(x)

    def boundary_gap(self, x):
        w = np.linalg.eigvalsh(self.q_values(x))
        return float(np.min(w) / max(np.max(np.abs(w)), 1e-300))


@dataclass(frozen=True, eq=False)
class BlockDualSolution:
    Q: MatrixPseudoPolynomial
    P: PseudoPolynomial
    phi: DiscreteSpectrum
    grad_norm: float
    iterations: int
    dual: float
    values: tuple = ()

    @property
    def N(self):
        return self.phi.N


def _check_block(C, P):
    if not isinstance(C, CovarianceData):
        raise TypeError("expected CovarianceData")
    if P.degree > C.n:
        raise ValueError(f"numerator degree {P.degree} exceeds n = {C.n}")
    Pv = P.values(C.circle)
    if np.any(Pv <= 0):
        j = int(np.argmin(Pv))
        raise NotPositiveError("numerator P", C.circle.indices[j], C.N, float(Pv[j]))


def block_dual_objective(Q, C, P):
    """J_P(Q) for matrix Q; +inf when Q is not PD on the grid."""
    return BlockDual(C, P).value(to_block_real(Q, C.n))


def block_dual_gradient(Q, C, P):
    return BlockDual(C, P).gradient(to_block_real(Q, C.n))


def block_dual_hessian(Q, C, P):
    return BlockDual(C, P).hessian(to_block_real(Q, C.n))


def solve_dual_block(C, P, config=None):
    """Minimize the block dual over matrix pseudo-polynomials PD on the grid."""
    cfg = config or SolverConfig()
    _check_block(C, P)
    if not toeplitz_positive(C):
        raise InfeasibleError("block-Toeplitz matrix of the data is not positive definite", iterations=0)
    prob = BlockDual(C, P)
    m, n = C.m, C.n
    if cfg.q_init is not None:
        qi = cfg.q_init
        if isinstance(qi, PseudoPolynomial):
            qi = MatrixPseudoPolynomial.from_scalar(qi, m)
        x0 = to_block_real(qi, n)
    else:
        x0 = to_block_real(MatrixPseudoPolynomial(P.coeffs[0].real * np.linalg.inv(C.blocks[0])), n)
    res = _newton.minimize(prob.value, prob.derivatives, x0, max_iter=cfg.max_iter,
                           gtol=cfg.gtol * C.c0_scale, armijo=cfg.armijo, backtrack=cfg.backtrack,
                           boundary_gap=prob.boundary_gap)
    if res.status in ("diverged", "boundary"):
        raise InfeasibleError(f"block dual iterates {res.status}: data not in the periodic dual cone",
                              direction=res.x / np.linalg.norm(res.x), iterations=res.iterations)
    if res.status != "converged":
        raise IndeterminateError(f"Newton solver stopped ({res.status}) after {res.iterations} "
                                 f"iterations with gradient norm {res.grad_norm:.3g}")
    Q = from_block_real(res.x, m, n)
    Qv = Q.values(C.circle)
    phi = DiscreteSpectrum(C.circle, _hermitize(np.linalg.inv(Qv) * prob.Pv[:, None, None]))
    return BlockDualSolution(Q=Q, P=P, phi=phi, grad_norm=res.grad_norm, iterations=res.iterations,
                             dual=res.value, values=tuple(res.values))


def _hermitize(v):
    return 0.5 * (v + np.conj(np.swapaxes(v, -1, -2)))


def block_moments(phi, n):
    """C_k = 1/(2N) sum_j zeta_j^k Phi(zeta_j) for k = 0..n, shape (n+1, m, m)."""
    values = phi.values if isinstance(phi, DiscreteSpectrum) else np.asarray(phi)
    if values.ndim == 1:
        values = values[:, None, None]
    return moments_of(values, n)


def block_spectrum(P, Q, N):
    """Phi = P Q^{-1} on the grid."""
    circle = DiscreteCircle(N)
    Qv = Q.values(circle)
    w = np.linalg.eigvalsh(Qv)
    low = np.min(w, axis=1)
    if np.any(low <= 0):
        j = int(np.argmin(low))
        raise NotPositiveError("denominator Q", circle.indices[j], N, float(low[j]))
    Pv = P.values(circle)
    if np.any(Pv <= 0):
        j = int(np.argmin(Pv))
        raise NotPositiveError("numerator P", circle.indices[j], N, float(Pv[j]))
    return DiscreteSpectrum(circle, _hermitize(np.linalg.inv(Qv) * Pv[:, None, None]))


def block_extension_and_sigma(P, Q, N):
    """Full block lag sequence C_0..C_N and the block circulant Sigma = Q^{-1} P."""
    phi = block_spectrum(P, Q, N)
    seq = FullPeriodicSequence(block_moments(phi, N), N)
    return seq, CirculantMatrix(phi.values, hermitian=True)


def block_cepstrum(phi, n):
    """gamma_k = (1/m) moment_k(log det Phi) for k = 1..n."""
    values = phi.values if isinstance(phi, DiscreteSpectrum) else np.asarray(phi)
    if values.ndim == 1:
        values = values[:, None, None]
    circle = DiscreteCircle(values.shape[0] // 2)
    w = np.linalg.eigvalsh(values)
    if np.any(w <= 0):
        j = int(np.argmin(np.min(w, axis=1)))
        raise NotPositiveError("spectrum", circle.indices[j], circle.N, float(np.min(w[j])))
    m = values.shape[1]
    return moments_of(np.sum(np.log(w), axis=1) / m, n)[1:]


class JointBlockDual:
    """Regularized joint functional for scalar P (p_0 = 1) and matrix Q.

    J = <C, Q> - m <gamma, p>
        + 1/(2N) sum_j [m P log P - P log det Q - lam m log P](zeta_j)

    With m = 1 this is exactly the scalar joint functional.
    """

    def __init__(self, C, gamma, lam):
        self.base = BlockDual(C, PseudoPolynomial.constant(1.0))
        self.m, self.n = C.m, C.n
        self.lam = float(lam)
        self.Bp = real_basis(C.circle, C.n, constant=False)
        g = np.zeros(C.n + 1, dtype=complex)
        gam = _gamma_array(gamma)
        g[1: min(gam.size, C.n) + 1] = gam[: C.n]
        self.g = 2.0 * to_real(g, constant=False)
        self.nx = self.base.E.shape[0]
        self.size = self.base.size

    def split(self, z):
        return z[: self.nx], z[self.nx:]

    def p_values(self, y):
        return 1.0 + self.Bp @ y

    def value(self, z):
        x, y = self.split(z)
        Pv = self.p_values(y)
        if np.any(Pv <= 0):
            return np.inf
        f = _inv_and_logdet(self.base.q_values(x))
        if f is None:
            return np.inf
        m = self.m
        tail = np.sum(m * Pv * np.log(Pv) - Pv * f[2] - self.lam * m * np.log(Pv)) / self.size
        return float(self.base.d @ x - m * (self.g @ y) + tail)

    def derivatives(self, z):
        x, y = self.split(z)
        Pv = self.p_values(y)
        half, inv, logdet = _inv_and_logdet(self.base.q_values(x))
        m, s, E = self.m, self.size, self.base.E
        tr = np.einsum("jab,ijba->ij", inv, E).real
        gx = self.base.d - tr @ Pv / s
        gy = -m * self.g + self.Bp.T @ (m * np.log(Pv) + m - logdet - self.lam * m / Pv) / s
        F = half[None] @ E @ half[None]
        F = (F * np.sqrt(Pv / s)[None, :, None, None]).reshape(F.shape[0], -1)
        Hxx = (F @ F.conj().T).real
        Hxy = -(tr / s) @ self.Bp
        Hyy = (self.Bp.T * ((m / Pv + self.lam * m / Pv**2) / s)) @ self.Bp
        return np.concatenate([gx, gy]), np.block([[Hxx, Hxy], [Hxy.T, Hyy]])

    def gradient(self, z):
        return self.derivatives(z)[0]

    def hessian(self, z):
        return self.derivatives(z)[1]

    def boundary_gap(self, z):
        x, y = self.split(z)
        return float(min(np.min(self.p_values(y)), self.base.boundary_gap(x)))

    def step(self, g, H):
        """Joint Newton step; separate P- and Q-steps only if the joint step is unusable."""
        dx = _newton.newton_step(g, H)
        if np.all(np.isfinite(dx)) and g @ dx < 0:
            return dx
        nx = self.nx
        return np.concatenate([_newton.newton_step(g[:nx], H[:nx, :nx]),
                               _newton.newton_step(g[nx:], H[nx:, nx:])])


def _gamma_array(gamma):
    if isinstance(gamma, CepstralData):
        return np.asarray(gamma.gammas, dtype=complex)
    return np.asarray(gamma, dtype=complex).ravel()


def joint_block_objective(P, Q, C, gamma, lam):
    prob = JointBlockDual(C, gamma, lam)
    z = np.concatenate([to_block_real(Q, C.n), to_real(P.padded(C.n).coeffs, constant=False)])
    return prob.value(z)


@dataclass(frozen=True, eq=False)
class JointBlockSolution:
    P: PseudoPolynomial
    Q: MatrixPseudoPolynomial
    lam: float
    epsilon: np.ndarray
    phi: DiscreteSpectrum
    covariance_residual: float
    cepstral_residual: float
    grad_norm: float
    iterations: int


def solve_joint_block(C, gamma, lam=None, config=None):
    """Joint covariance and cepstral matching with scalar P and matrix Q.

    ``gamma`` holds gamma_1..gamma_n in the (1/m) log det convention of
    :func:`block_cepstrum`.  At the optimum the block moments of P Q^{-1}
    equal C and its cepstrum equals gamma + eps, eps_k = lam moment_k(1/P).
    """
    cfg = config or SolverConfig()
    lam = 1e-2 * C.c0_scale if lam is None else float(lam)
    if lam <= 0:
        raise ValueError(f"regularization lam must be positive, got {lam}")
    if not toeplitz_positive(C):
        raise InfeasibleError("block-Toeplitz matrix of the data is not positive definite", iterations=0)
    prob = JointBlockDual(C, gamma, lam)
    m, n = C.m, C.n
    me = solve_dual_block(C, PseudoPolynomial.constant(1.0), cfg)
    z0 = np.concatenate([to_block_real(me.Q, n), np.zeros(2 * n)])
    res = _newton.minimize(prob.value, prob.derivatives, z0, max_iter=cfg.max_iter,
                           gtol=cfg.gtol * C.c0_scale, armijo=cfg.armijo, backtrack=cfg.backtrack,
                           boundary_gap=prob.boundary_gap, step=prob.step)
    if res.status == "diverged":
        raise InfeasibleError("joint block iterates diverged", iterations=res.iterations)
    if res.status == "boundary":
        raise BoundaryError(f"joint block problem terminated on the boundary after {res.iterations} iterations")
    if res.status != "converged":
        raise IndeterminateError(f"Newton solver stopped ({res.status}) after {res.iterations} "
                                 f"iterations with gradient norm {res.grad_norm:.3g}")
    x, y = prob.split(res.x)
    Q = from_block_real(x, m, n)
    P = PseudoPolynomial(from_real(y, constant=False))
    phi = block_spectrum(P, Q, C.N)
    eps = epsilon_adjustment(P, lam, n, C.N)
    cov_res = float(np.max(np.abs(block_moments(phi, n) - C.blocks)))
    target = np.zeros(n, dtype=complex)
    gam = _gamma_array(gamma)
    target[: min(gam.size, n)] = gam[:n]
    cep_res = float(np.max(np.abs(block_cepstrum(phi, n) - (target + eps)))) if n else 0.0
    return JointBlockSolution(P=P, Q=Q, lam=lam, epsilon=eps, phi=phi, covariance_residual=cov_res,
                              cepstral_residual=cep_res, grad_norm=res.grad_norm, iterations=res.iterations)


def bilateral_matrix_arma(P, Q, N=None):
    """Matrix bilateral model sum Q_k y(t-k) = sum p_k e(t-k), scalar p with p_0 = 1."""
    n = max(P.degree, Q.degree)
    if N is not None:
        block_spectrum(P, Q, N)
    return ArmaModel("bilateral", n, Q.padded(n).laurent(), P.padded(n).laurent())
