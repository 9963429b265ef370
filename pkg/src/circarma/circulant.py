"""Circulant and block-circulant matrices held by their symbols.

A (block-)circulant matrix of size 2mN is stored as its symbol values
M(zeta_j), an array of shape (2N, m, m).  Products, sums, inverses and
logarithms are pointwise in that representation; the dense matrix is only
built for cross-checks and is capped in size.
"""

import os

import numpy as np

from .exceptions import DenseCapError, NotPositiveError
from .harmonics import DiscreteCircle, banded_coefficients, dft, idft

HERMITIAN_TOL = 1e-10
DEFAULT_DENSE_CAP = 4096


def dense_cap():
    return int(os.environ.get("CIRCARMA_DENSE_CAP", DEFAULT_DENSE_CAP))


def _asymmetry(values):
    scale = max(1.0, float(np.max(np.abs(values))))
    return float(np.max(np.abs(values - np.conj(np.swapaxes(values, -1, -2))))) / scale


class CirculantMatrix:
    """Block-circulant matrix sum_k S^{-k} (x) M_k given by symbol values."""

    __slots__ = ("_values", "_circle", "_hermitian")

    def __init__(self, values, hermitian=None):
        v = np.array(values, dtype=complex)
        if v.ndim == 1:
            v = v[:, None, None]
        if v.ndim != 3 or v.shape[1] != v.shape[2] or v.shape[0] % 2:
            raise ValueError(f"symbol values must have shape (2N, m, m), got {v.shape}")
        asym = _asymmetry(v)
        if hermitian is None:
            hermitian = asym < HERMITIAN_TOL
        if hermitian:
            if asym >= HERMITIAN_TOL:
                raise ValueError(f"symbol is not Hermitian (asymmetry {asym:.3g})")
            v = 0.5 * (v + np.conj(np.swapaxes(v, -1, -2)))
        v.setflags(write=False)
        self._values = v
        self._circle = DiscreteCircle(v.shape[0] // 2)
        self._hermitian = bool(hermitian)

    # construction -----------------------------------------------------------

    @classmethod
    def from_coefficients(cls, coeffs, hermitian=None):
        """From coefficients M_{-N+1}..M_N (grid order)."""
        c = np.asarray(coeffs, dtype=complex)
        if c.ndim == 1:
            c = c[:, None, None]
        return cls(dft(c), hermitian=hermitian)

    @classmethod
    def from_symbol(cls, p, N):
        """Banded circulant of a scalar pseudo-polynomial or matrix pseudo-polynomial."""
        return cls(p.values(DiscreteCircle(N)), hermitian=True)

    @classmethod
    def identity(cls, N, m=1):
        return cls(np.broadcast_to(np.eye(m), (2 * N, m, m)), hermitian=True)

    # properties -------------------------------------------------------------

    @property
    def values(self):
        return self._values

    @property
    def circle(self):
        return self._circle

    @property
    def N(self):
        return self._circle.N

    @property
    def m(self):
        return self._values.shape[1]

    @property
    def hermitian(self):
        return self._hermitian

    @property
    def size(self):
        return 2 * self.N * self.m

    def coefficients(self):
        """Coefficient form M_{-N+1}..M_N, shape (2N, m, m)."""
        return idft(self._values)

    def scalar_values(self):
        if self.m != 1:
            raise ValueError("not a scalar circulant")
        v = self._values[:, 0, 0]
        return v.real.copy() if self._hermitian else v.copy()

    # algebra ----------------------------------------------------------------

    def _check(self, other):
        if not isinstance(other, CirculantMatrix):
            raise TypeError("expected a CirculantMatrix")
        if other.N != self.N or other.m != self.m:
            raise ValueError(f"incompatible circulants: (N={self.N}, m={self.m}) vs (N={other.N}, m={other.m})")

    def __matmul__(self, other):
        return multiply(self, other)

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        self._check(other)
        return CirculantMatrix(self._values - other._values)

    def __neg__(self):
        return CirculantMatrix(-self._values, hermitian=self._hermitian)

    def scale(self, s):
        return CirculantMatrix(s * self._values)

    def adjoint(self):
        return CirculantMatrix(np.conj(np.swapaxes(self._values, -1, -2)), hermitian=self._hermitian)

    def inverse(self):
        return inverse(self)

    def log(self):
        return log_of(self)

    def exp(self):
        return exp_of(self)

    def dense(self):
        return dense(self)

    def __repr__(self):
        kind = "Hermitian " if self._hermitian else ""
        return f"<{kind}CirculantMatrix N={self.N} m={self.m}>"


def shift(N, m=1):
    """The (block) cyclic shift S (x) I_m; its symbol is zeta."""
    z = DiscreteCircle(N).points
    return CirculantMatrix(z[:, None, None] * np.eye(m), hermitian=False)


def fourier_matrix(N, m=1):
    """Unitary F with M = F^* diag(M(zeta_j)) F, blocks zeta_j^{N-1-l} I_m / sqrt(2N)."""
    idx = np.arange(-N + 1, N + 1)
    expo = N - 1 - np.arange(2 * N)
    F = np.exp(1j * np.pi * np.outer(idx, expo) / N) / np.sqrt(2 * N)
    return np.kron(F, np.eye(m)) if m > 1 else F


def diagonalize(M):
    """Return (F, values) with dense(M) = F^* blockdiag(values) F."""
    return fourier_matrix(M.N, M.m), M.values


def _result(values, hermitian_inputs):
    asym = _asymmetry(values)
    if asym < HERMITIAN_TOL:
        return CirculantMatrix(values, hermitian=True)
    if hermitian_inputs:
        raise ValueError(f"result should be Hermitian but asymmetry is {asym:.3g}")
    return CirculantMatrix(values, hermitian=False)


def multiply(A, B):
    A._check(B)
    return _result(A.values @ B.values, hermitian_inputs=False)


def add(A, B):
    A._check(B)
    return _result(A.values + B.values, hermitian_inputs=A.hermitian and B.hermitian)


def inverse(M):
    v = M.values
    if M.m == 1:
        d = v[:, 0, 0]
        bad = np.flatnonzero(np.abs(d) <= 1e-300)
        if bad.size:
            raise NotPositiveError("circulant symbol (singular)", M.circle.indices[bad[0]], M.N, 0.0)
        return _result((1.0 / d)[:, None, None], hermitian_inputs=M.hermitian)
    cond = np.linalg.cond(v)
    bad = np.flatnonzero(~np.isfinite(cond) | (cond > 1e15))
    if bad.size:
        raise NotPositiveError("circulant symbol (singular)", M.circle.indices[bad[0]], M.N)
    return _result(np.linalg.inv(v), hermitian_inputs=M.hermitian)


def _hermitian_function(M, fn, what):
    if not M.hermitian:
        raise ValueError(f"{what} requires a Hermitian circulant")
    w, V = np.linalg.eigh(M.values)
    low = np.min(w, axis=1)
    bad = np.flatnonzero(low <= 0)
    if bad.size:
        raise NotPositiveError("circulant symbol", M.circle.indices[bad[0]], M.N, float(low[bad[0]]))
    out = (V * fn(w)[:, None, :]) @ np.conj(np.swapaxes(V, -1, -2))
    return CirculantMatrix(out, hermitian=True)


def log_of(M):
    """Matrix logarithm through the spectral mapping theorem (symbol must be PD)."""
    return _hermitian_function(M, np.log, "log")


def exp_of(M):
    if not M.hermitian:
        raise ValueError("exp requires a Hermitian circulant")
    w, V = np.linalg.eigh(M.values)
    out = (V * np.exp(w)[:, None, :]) @ np.conj(np.swapaxes(V, -1, -2))
    return CirculantMatrix(out, hermitian=True)


def trace_form(A, B):
    """trace(dense(A) dense(B)) computed on the symbols."""
    A._check(B)
    t = np.einsum("jab,jba->", A.values, B.values)
    if A.hermitian and B.hermitian:
        return float(t.real)
    return complex(t)


def is_banded(M, n, tol=1e-8):
    """Bandedness test of order n.

    Returns ``(banded, residual)`` where ``residual`` is the largest entry
    magnitude among coefficients M_k with n < |k| < 2N - n.  The tolerance
    is relative to max(1, |M_0|_inf).
    """
    if not 0 <= n < M.N:
        raise ValueError(f"order n = {n} must satisfy 0 <= n < N = {M.N}")
    coeffs = M.coefficients()
    lags = np.abs(M.circle.indices)
    out = coeffs[lags > n]
    residual = float(np.max(np.abs(out))) if out.size else 0.0
    c0 = float(np.max(np.abs(coeffs[M.N - 1])))
    return residual <= tol * max(1.0, c0), residual


def dense(M, cap=None):
    """Materialize the 2mN x 2mN matrix; block (j, l) equals M_{j-l mod 2N}."""
    cap = dense_cap() if cap is None else cap
    if M.size > cap:
        raise DenseCapError(f"dense size {M.size} exceeds cap {cap} (set CIRCARMA_DENSE_CAP)")
    N, m = M.N, M.m
    coeffs = M.coefficients()
    lag = (np.arange(2 * N)[:, None] - np.arange(2 * N)[None, :])
    # coefficient of lag k sits at grid position k + N - 1 (mod 2N)
    pos = (lag + N - 1) % (2 * N)
    blocks = coeffs[pos]  # (2N, 2N, m, m)
    out = blocks.transpose(0, 2, 1, 3).reshape(2 * N * m, 2 * N * m)
    if M.hermitian:
        out = 0.5 * (out + out.conj().T)
    return out


def shift_matrix(N, m=1):
    """Dense block shift with I_m on the block superdiagonal and bottom-left corner."""
    S = np.roll(np.eye(2 * N), 1, axis=1)
    return np.kron(S, np.eye(m)) if m > 1 else S


def banded(p, N):
    """Scalar banded circulant from a pseudo-polynomial, via its coefficients."""
    return CirculantMatrix.from_coefficients(banded_coefficients(p, N), hermitian=True)
