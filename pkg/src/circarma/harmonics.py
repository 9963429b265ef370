"""The discrete unit circle T_2N, Hermitian pseudo-polynomials and moments.

Everything in this package lives on the 2N points zeta_k = exp(i k pi / N),
k = -N+1, ..., N, stored in that order.  Sequences indexed by lag
(covariances, symbol coefficients) use the same index range, so the value
array and the coefficient array of a symbol have identical layouts.

Conventions::

    M(zeta)  = sum_k m_k zeta^{-k}                    (DFT)
    m_k      = 1/(2N) sum_j M(zeta_j) zeta_j^k         (inverse DFT, moment)
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

# imaginary residue below this is rounding noise on a real-valued symbol
REAL_TOL = 1e-12


@dataclass(frozen=True)
class DiscreteCircle:
    """The 2N-th roots of unity ordered k = -N+1..N."""

    N: int

    def __post_init__(self):
        if isinstance(self.N, bool) or int(self.N) != self.N or self.N < 1:
            raise ValueError(f"N must be a positive integer, got {self.N!r}")
        object.__setattr__(self, "N", int(self.N))

    @property
    def size(self):
        return 2 * self.N

    @cached_property
    def indices(self):
        return _frozen(np.arange(-self.N + 1, self.N + 1))

    @cached_property
    def thetas(self):
        return _frozen(np.pi * self.indices / self.N)

    @cached_property
    def points(self):
        return _frozen(np.exp(1j * self.thetas))

    def character(self, k):
        """Values of zeta^k on the grid."""
        return np.exp(1j * k * self.thetas)


def grid(N):
    """Return the discrete unit circle with 2N points."""
    if N == 0:
        raise ValueError("N = 0 does not define a grid")
    return DiscreteCircle(N)


def _frozen(a):
    a.setflags(write=False)
    return a


class PseudoPolynomial:
    """Hermitian Laurent polynomial P(zeta) = sum_{|k|<=n} p_k zeta^{-k}.

    Only p_0..p_n are stored; p_{-k} = conj(p_k) is implied, so P is real on
    the unit circle.  ``real=True`` additionally forces real coefficients.
    """

    __slots__ = ("_coeffs", "_real")

    def __init__(self, coeffs, real=False):
        c = np.array(np.atleast_1d(coeffs), dtype=complex)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coefficients must be a non-empty 1-d sequence")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        if abs(c[0].imag) > REAL_TOL * max(1.0, abs(c[0])):
            raise ValueError(f"p_0 must be real, got {c[0]}")
        c[0] = c[0].real
        if real:
            scale = max(1.0, np.max(np.abs(c)))
            if np.max(np.abs(c.imag)) > REAL_TOL * scale:
                raise ValueError("real-only pseudo-polynomial has complex coefficients")
            c = c.real.astype(complex)
        c.setflags(write=False)
        self._coeffs = c
        self._real = bool(real)

    @property
    def coeffs(self):
        return self._coeffs

    @property
    def degree(self):
        return self._coeffs.size - 1

    @property
    def real(self):
        return self._real

    def padded(self, n):
        """Same polynomial with the coefficient vector padded to degree n."""
        if n < self.degree:
            raise ValueError(f"cannot pad degree {self.degree} down to {n}")
        c = np.zeros(n + 1, dtype=complex)
        c[: self.degree + 1] = self._coeffs
        return PseudoPolynomial(c, real=self._real)

    def laurent(self):
        """Coefficients p_{-n}..p_n."""
        c = self._coeffs
        return np.concatenate([np.conj(c[:0:-1]), c])

    def __call__(self, z):
        """Evaluate at arbitrary points; the result is real where |z| = 1."""
        z = np.asarray(z, dtype=complex)
        out = np.full(z.shape, self._coeffs[0], dtype=complex)
        zinv = 1.0 / z
        for k in range(1, self.degree + 1):
            out = out + self._coeffs[k] * zinv**k + np.conj(self._coeffs[k]) * z**k
        return out

    def values(self, circle):
        return eval_symbol(self, circle)

    def __add__(self, other):
        if not isinstance(other, PseudoPolynomial):
            return NotImplemented
        n = max(self.degree, other.degree)
        return PseudoPolynomial(self.padded(n).coeffs + other.padded(n).coeffs,
                                real=self._real and other._real)

    def __mul__(self, scalar):
        s = float(scalar)
        return PseudoPolynomial(self._coeffs * s, real=self._real)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, PseudoPolynomial):
            return NotImplemented
        n = max(self.degree, other.degree)
        return bool(np.array_equal(self.padded(n).coeffs, other.padded(n).coeffs))

    def __hash__(self):
        return hash(tuple(np.trim_zeros(self._coeffs, "b")))

    def __repr__(self):
        return f"PseudoPolynomial({np.array2string(self._coeffs, precision=6)})"

    @classmethod
    def from_factor(cls, a, real=False):
        """Hermitian square a(zeta) a(zeta)^* of a(zeta) = sum_{k>=0} a_k zeta^{-k}."""
        a = np.asarray(a, dtype=complex)
        n = a.size - 1
        c = np.array([np.sum(a[k:] * np.conj(a[: n + 1 - k])) for k in range(n + 1)])
        return cls(c, real=real)

    @classmethod
    def constant(cls, value):
        return cls([float(value)], real=True)

    def to_json(self):
        return {"n": self.degree, "coeffs": [[float(v.real), float(v.imag)] for v in self._coeffs]}

    @classmethod
    def from_json(cls, obj):
        coeffs = [parse_complex(v) for v in obj["coeffs"]]
        if "n" in obj and int(obj["n"]) != len(coeffs) - 1:
            raise ValueError(f"declared degree {obj['n']} but {len(coeffs)} coefficients")
        return cls(coeffs, real=bool(obj.get("real", False)))


def parse_complex(v):
    """Accept a number or a [re, im] pair."""
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise ValueError(f"complex value must be [re, im], got {v!r}")
        return complex(float(v[0]), float(v[1]))
    return complex(v)


@dataclass(frozen=True, eq=False)
class DiscreteSpectrum:
    """Values of a spectral density on the grid.

    Scalar spectra hold a real array of shape (2N,); matrix spectra hold
    Hermitian blocks of shape (2N, m, m).
    """

    circle: DiscreteCircle
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values)
        if v.shape[0] != self.circle.size or v.ndim not in (1, 3):
            raise ValueError(f"expected {self.circle.size} grid values, got shape {v.shape}")
        if v.ndim == 1:
            v = _realify(v, "spectrum")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def N(self):
        return self.circle.N

    @property
    def is_matrix(self):
        return self.values.ndim == 3

    @property
    def positive(self):
        if self.is_matrix:
            return bool(np.all(np.linalg.eigvalsh(self.values) > 0))
        return bool(np.all(self.values > 0))


def nearly_real(v):
    """True when every imaginary part is rounding noise relative to the largest entry."""
    v = np.asarray(v)
    if v.size == 0:
        return True
    return bool(np.max(np.abs(np.imag(v))) <= REAL_TOL * max(1.0, float(np.max(np.abs(v)))))


def _realify(v, what):
    v = np.asarray(v)
    if np.iscomplexobj(v):
        scale = max(1.0, float(np.max(np.abs(v)))) if v.size else 1.0
        resid = float(np.max(np.abs(v.imag))) if v.size else 0.0
        if resid > REAL_TOL * scale * 1e4:
            raise ValueError(f"{what} should be real; imaginary residue {resid:.3g}")
        v = v.real
    return np.array(v, dtype=float)


def eval_symbol(p, circle):
    """Values P(zeta_j) of a pseudo-polynomial on the grid (real array)."""
    if p.degree >= 2 * circle.N:
        raise ValueError(f"degree {p.degree} is not below 2N = {2 * circle.N}")
    th = circle.thetas
    out = np.full(circle.size, p.coeffs[0].real)
    for k in range(1, p.degree + 1):
        out += 2.0 * np.real(p.coeffs[k] * np.exp(-1j * k * th))
    return out


def discrete_moment(f, k, circle=None):
    """Integral of e^{ik theta} f against the uniform atomic measure on T_2N."""
    if isinstance(f, DiscreteSpectrum):
        circle = circle or f.circle
        f = f.values
    f = np.asarray(f)
    size = f.shape[0]
    if size % 2:
        raise ValueError("grid functions have an even number 2N of values")
    circle = circle or DiscreteCircle(size // 2)
    if abs(k) > circle.N:
        raise ValueError(f"|k| = {abs(k)} exceeds N = {circle.N}")
    w = circle.character(k) / size
    return np.tensordot(w, f, axes=(0, 0))


def moments_of(phi, n):
    """Moments c_0..c_n of a scalar or matrix grid function (n <= N)."""
    values = phi.values if isinstance(phi, DiscreteSpectrum) else np.asarray(phi)
    size = values.shape[0]
    N = size // 2
    if n > N:
        raise ValueError(f"n = {n} exceeds N = {N}")
    circle = DiscreteCircle(N)
    chars = np.exp(1j * np.outer(np.arange(n + 1), circle.thetas)) / size
    return np.tensordot(chars, values, axes=(1, 0))


def _roll_in(a, N):
    return np.roll(a, N + 1, axis=0)


def _roll_out(a, N):
    return np.roll(a, -(N + 1), axis=0)


def dft(coeffs):
    """Grid values from coefficients m_{-N+1}..m_N (fast path)."""
    coeffs = np.asarray(coeffs, dtype=complex)
    N = coeffs.shape[0] // 2
    return _roll_out(np.fft.fft(_roll_in(coeffs, N), axis=0), N)


def idft(values):
    """Coefficients m_{-N+1}..m_N from grid values (fast path)."""
    values = np.asarray(values, dtype=complex)
    N = values.shape[0] // 2
    return _roll_out(np.fft.ifft(_roll_in(values, N), axis=0), N)


def dft_matrix(N):
    """The 2N x 2N matrix [zeta_j^{-k}] mapping coefficients to values."""
    idx = np.arange(-N + 1, N + 1)
    return np.exp(-1j * np.pi * np.outer(idx, idx) / N)


def dft_reference(coeffs):
    """O(N^2) evaluation of the DFT; the fast path is checked against this."""
    coeffs = np.asarray(coeffs, dtype=complex)
    F = dft_matrix(coeffs.shape[0] // 2)
    return np.tensordot(F, coeffs, axes=(1, 0))


def idft_reference(values):
    values = np.asarray(values, dtype=complex)
    size = values.shape[0]
    F = dft_matrix(size // 2)
    return np.tensordot(F.conj(), values, axes=(1, 0)) / size


def banded_coefficients(p, N):
    """Full coefficient array (grid order) of a pseudo-polynomial of degree < N."""
    if p.degree >= N:
        raise ValueError(f"degree {p.degree} must be below N = {N}")
    out = np.zeros(2 * N, dtype=complex)
    out[N - 1] = p.coeffs[0]
    for k in range(1, p.degree + 1):
        out[N - 1 + k] = p.coeffs[k]
        out[N - 1 - k] = np.conj(p.coeffs[k])
    return out
