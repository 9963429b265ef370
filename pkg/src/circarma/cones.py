"""Feasibility of partial covariance data for a process of period 2N."""

from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .circulant import CirculantMatrix
from .exceptions import InfeasibleError
from .harmonics import DiscreteCircle, dft, nearly_real, parse_complex

PIVOT_TOL = 1e-12


class CovarianceData:
    """Partial lag sequence C_0..C_n (scalars or m x m blocks) and half-period N.

    Scalar data are stored with shape (n+1,), block data with (n+1, m, m);
    ``blocks`` always returns the latter.
    """

    __slots__ = ("_lags", "_N")

    def __init__(self, lags, N):
        lags = np.array(lags, dtype=complex)
        if lags.ndim == 0:
            lags = lags[None]
        if lags.ndim == 3 and lags.shape[1] == lags.shape[2] == 1:
            lags = lags[:, 0, 0]
        if lags.ndim not in (1, 3) or (lags.ndim == 3 and lags.shape[1] != lags.shape[2]):
            raise ValueError(f"lags must have shape (n+1,) or (n+1, m, m), got {lags.shape}")
        self._N = DiscreteCircle(N).N
        n = lags.shape[0] - 1
        if n >= self._N:
            raise ValueError(f"need n < N, got n = {n}, N = {self._N}")
        c0 = lags[0] if lags.ndim == 3 else lags[:1, None]
        if np.max(np.abs(c0 - np.conj(c0.T))) > 1e-12 * max(1.0, np.max(np.abs(c0))):
            raise ValueError("C_0 must be Hermitian")
        c0 = 0.5 * (c0 + np.conj(c0.T))
        if np.min(np.linalg.eigvalsh(c0)) <= 0:
            raise ValueError("C_0 must be positive definite")
        if lags.ndim == 3:
            lags[0] = c0
        else:
            lags[0] = c0[0, 0].real
        lags.setflags(write=False)
        self._lags = lags

    @property
    def lags(self):
        return self._lags

    @property
    def N(self):
        return self._N

    @property
    def n(self):
        return self._lags.shape[0] - 1

    @property
    def m(self):
        return 1 if self._lags.ndim == 1 else self._lags.shape[1]

    @property
    def is_scalar(self):
        return self._lags.ndim == 1

    @property
    def circle(self):
        return DiscreteCircle(self._N)

    @property
    def c0_scale(self):
        """Size of the zeroth lag, used to make tolerances relative."""
        return float(np.real(np.trace(self.blocks[0])))

    @property
    def blocks(self):
        return self._lags if self._lags.ndim == 3 else self._lags[:, None, None]

    def toeplitz(self):
        """The (block-)Toeplitz matrix with C_{i-j} below and C_{j-i}^* above the diagonal."""
        C, m, n = self.blocks, self.m, self.n
        T = np.zeros(((n + 1) * m, (n + 1) * m), dtype=complex)
        for i in range(n + 1):
            for j in range(n + 1):
                blk = C[i - j] if i >= j else np.conj(C[j - i].T)
                T[i * m:(i + 1) * m, j * m:(j + 1) * m] = blk
        return T

    def symbol_values(self):
        """Grid values of the banded symbol C(zeta) = sum_{|k|<=n} C_k zeta^{-k}."""
        N, n = self._N, self.n
        coeffs = np.zeros((2 * N, self.m, self.m), dtype=complex)
        C = self.blocks
        coeffs[N - 1] = C[0]
        for k in range(1, n + 1):
            coeffs[N - 1 + k] = C[k]
            coeffs[N - 1 - k] = np.conj(C[k].T)
        return dft(coeffs)

    def to_json(self):
        if self.is_scalar:
            lags = [[float(v.real), float(v.imag)] for v in self._lags]
        else:
            lags = [[[[float(v.real), float(v.imag)] for v in row] for row in blk] for blk in self._lags]
        return {"m": self.m, "N": self._N, "lags": lags}

    @classmethod
    def from_json(cls, obj):
        m = int(obj.get("m", 1))
        raw = obj["lags"]
        if m == 1:
            lags = [parse_complex(v[0][0] if _is_nested_block(v) else v) for v in raw]
        else:
            lags = [[[parse_complex(v) for v in row] for row in blk] for blk in raw]
            arr = np.array(lags)
            if arr.shape[1:] != (m, m):
                raise ValueError(f"expected {m}x{m} lag blocks, got {arr.shape[1:]}")
        return cls(lags, int(obj["N"]))

    def __repr__(self):
        return f"CovarianceData(m={self.m}, n={self.n}, N={self._N})"


def _is_nested_block(v):
    return isinstance(v, list) and len(v) == 1 and isinstance(v[0], list) and len(v[0]) == 1


@dataclass(frozen=True, eq=False)
class FullPeriodicSequence:
    """All lags of a 2N-periodic stationary process.

    ``lags`` holds either C_0..C_N (wraparound implied) or C_0..C_{2N-1}
    given explicitly, in which case the wraparound C_{2N-k} = C_k^* is a
    checkable constraint rather than an assumption.
    """

    lags: np.ndarray
    N: int

    def __post_init__(self):
        lags = np.array(self.lags, dtype=complex)
        if lags.ndim == 1:
            lags = lags[:, None, None]
        if lags.shape[0] not in (self.N + 1, 2 * self.N):
            raise ValueError(f"expected {self.N + 1} or {2 * self.N} lags, got {lags.shape[0]}")
        lags.setflags(write=False)
        object.__setattr__(self, "lags", lags)

    @property
    def m(self):
        return self.lags.shape[1]

    def scalar_lags(self):
        """Lags as a 1-D array for m = 1, real when the imaginary parts are rounding noise."""
        if self.m != 1:
            raise ValueError("scalar_lags needs m = 1")
        v = self.lags[:, 0, 0]
        return v.real if nearly_real(v) else v

    @property
    def explicit_wraparound(self):
        return self.lags.shape[0] == 2 * self.N

    def wraparound_residual(self):
        """Largest violation of C_{2N-k} = C_k^* (k=1..N-1) and C_N = C_N^*."""
        L, N = self.lags, self.N
        res = float(np.max(np.abs(L[N] - np.conj(L[N].T))))
        if self.explicit_wraparound:
            for k in range(1, N):
                res = max(res, float(np.max(np.abs(L[2 * N - k] - np.conj(L[k].T)))))
        res = max(res, float(np.max(np.abs(L[0] - np.conj(L[0].T)))))
        return res

    def coefficients(self):
        """Circulant coefficients in grid order k = -N+1..N."""
        N, L = self.N, self.lags
        coeffs = np.empty((2 * N, self.m, self.m), dtype=complex)
        for k in range(0, N + 1):
            coeffs[N - 1 + k] = L[k]
        for k in range(1, N):
            coeffs[N - 1 - k] = np.conj(L[k].T)
        return coeffs

    def sigma(self):
        """Circulant covariance Circ{C_0, ..., C_N, C_{N-1}^*, ..., C_1^*}."""
        return CirculantMatrix.from_coefficients(self.coefficients())


def toeplitz_positive(c):
    """True iff the (block-)Toeplitz matrix of the data is positive definite.

    Necessary for membership in the periodic dual cone, not sufficient.
    """
    T = c.toeplitz()
    scale = np.linalg.norm(T, 2)
    try:
        L = linalg.cholesky(T, lower=True)
    except linalg.LinAlgError:
        return False
    return bool(np.min(np.abs(np.diag(L))) ** 2 > PIVOT_TOL * scale)


@dataclass(frozen=True)
class MembershipCertificate:
    feasible: bool
    Q: object = None
    diagnostic: dict = field(default_factory=dict)

    @property
    def status(self):
        return "Feasible" if self.feasible else "Infeasible"


def certify_membership(c, config=None):
    """Decide membership of ``c`` in the periodic dual cone by a maximum-entropy solve.

    Returns a certificate holding the maximum-entropy Q on success.  A solve
    that escapes to infinity (or stalls against the boundary) certifies
    infeasibility; running out of iterations raises IndeterminateError.
    """
    if not toeplitz_positive(c):
        return MembershipCertificate(False, None, {"reason": "Toeplitz matrix not positive definite"})
    try:
        if c.is_scalar:
            from .harmonics import PseudoPolynomial
            from .solver import solve_dual

            sol = solve_dual(c, PseudoPolynomial.constant(1.0), config)
        else:
            from .harmonics import PseudoPolynomial
            from .multivar import solve_dual_block

            sol = solve_dual_block(c, PseudoPolynomial.constant(1.0), config)
    except InfeasibleError as err:
        diag = {"reason": str(err), "iterations": err.iterations}
        if err.direction is not None:
            diag["boundary_direction"] = [[float(v.real), float(v.imag)] for v in np.ravel(err.direction)]
        return MembershipCertificate(False, None, diag)
    return MembershipCertificate(True, sol.Q, {"iterations": sol.iterations, "grad_norm": sol.grad_norm})


def validate_full_sequence(seq, tol=1e-12):
    """Check wraparound symmetry and positive definiteness of the circulant covariance."""
    scale = max(1.0, float(np.max(np.abs(seq.lags))))
    if seq.wraparound_residual() > tol * scale:
        return False
    vals = dft(seq.coefficients())
    vals = 0.5 * (vals + np.conj(np.swapaxes(vals, -1, -2)))
    return bool(np.all(np.linalg.eigvalsh(vals) > 0))
