"""From a solved pair (P, Q) to stochastic models of the periodic process.

Covers the full circulant covariance extension, bilateral ARMA models
driven by the conjugate process, banded spectral factors and the forward
and backward unilateral ARMA models built from them, whitening filters,
spectral-domain simulation and the conditional-orthogonality test behind
covariance selection.
"""

from dataclasses import dataclass

import numpy as np

from .circulant import CirculantMatrix, dense, dense_cap
from .cones import FullPeriodicSequence
from .exceptions import DenseCapError, DiscreteOnlyError, FactorizationOnCircleError, NotPositiveError
from .harmonics import DiscreteCircle, DiscreteSpectrum, PseudoPolynomial, dft, idft, moments_of

FACTOR_TOL = 1e-8
KINDS = ("bilateral", "unilateral-forward", "unilateral-backward")


@dataclass(frozen=True, eq=False)
class ArmaModel:
    """ARMA coefficient sets.

    ``a`` multiplies y and ``b`` multiplies the driving noise.  For a
    bilateral model both are Hermitian and indexed k = -n..n (``a`` holds
    q_k, ``b`` holds p_k, the noise being the conjugate process).  A
    forward unilateral model is indexed 0..n with a_0 = 1, a backward one
    -n..0.  Matrix models carry (len, m, m) blocks in ``a`` and scalar ``b``.
    """

    kind: str
    order: int
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown model kind {self.kind!r}")
        for name in ("a", "b"):
            arr = np.array(getattr(self, name), dtype=complex)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def lags(self):
        n = self.order
        if self.kind == "bilateral":
            return np.arange(-n, n + 1)
        if self.kind == "unilateral-forward":
            return np.arange(0, n + 1)
        return np.arange(-n, 1)

    @property
    def m(self):
        return 1 if self.a.ndim == 1 else self.a.shape[1]

    def _transfer(self, coeffs, circle):
        # sum_k coeffs_k zeta^{-k}
        E = np.exp(-1j * np.outer(circle.thetas, self.lags))
        return np.tensordot(E, coeffs, axes=(1, 0))

    def spectrum(self, N):
        """Spectral density on T_2N implied by the model."""
        circle = DiscreteCircle(N)
        A = self._transfer(self.a, circle)
        B = self._transfer(self.b, circle)
        if self.kind == "bilateral":
            if self.m == 1:
                return DiscreteSpectrum(circle, (B / A).real)
            vals = np.linalg.inv(A) * B.real[:, None, None]
            return DiscreteSpectrum(circle, 0.5 * (vals + np.conj(np.swapaxes(vals, -1, -2))))
        return DiscreteSpectrum(circle, np.abs(B) ** 2 / np.abs(A) ** 2)

    def to_json(self):
        def enc(x):
            if np.ndim(x) == 0:
                return [float(np.real(x)), float(np.imag(x))]
            return [enc(v) for v in x]

        return {"kind": self.kind, "order": self.order, "lags": [int(k) for k in self.lags],
                "a": enc(self.a), "b": enc(self.b)}


def extend_covariances(Q, P, N):
    """Lags c_0..c_N of Phi = P/Q as a full periodic covariance sequence."""
    from .solver import spectrum_of

    phi = spectrum_of(P, Q, N)
    return FullPeriodicSequence(moments_of(phi, N), N)


def bilateral_arma(P, Q, N=None):
    """Bilateral model sum q_k y(t-k) = sum p_k e(t-k) with e the conjugate process."""
    n = max(P.degree, Q.degree)
    if N is not None:
        circle = DiscreteCircle(N)
        for name, poly in (("P", P), ("Q", Q)):
            v = poly.values(circle)
            if np.any(v <= 0):
                j = int(np.argmin(v))
                raise NotPositiveError(name, circle.indices[j], N, float(v[j]))
    return ArmaModel("bilateral", n, Q.padded(n).laurent(), P.padded(n).laurent())


def _classify_circle_root(M):
    th = np.linspace(-np.pi, np.pi, 8192, endpoint=False)
    vals = M(np.exp(1j * th)).real
    scale = max(1.0, float(np.max(np.abs(M.coeffs))))
    if np.min(vals) < -FACTOR_TOL * scale:
        raise DiscreteOnlyError(
            "symbol is negative somewhere on the unit circle; a banded factor exists at best on "
            "the discrete grid and is not constructed here")
    raise FactorizationOnCircleError("symbol has a zero on the unit circle")


def factor_banded(M, n=None, tol=FACTOR_TOL):
    """Outer factor a_0..a_n with a(zeta) a(zeta)^* = M(zeta), a_0 > 0.

    The roots of z^n M(z) come in pairs (r, 1/conj(r)); the factor keeps the
    ones inside the unit disc, so a(z) = a_0 prod (1 - r z^{-1}) is minimum
    phase.  Requires M > 0 on the whole unit circle.
    """
    n = M.degree if n is None else n
    if n < M.degree:
        raise ValueError(f"order {n} is below the degree {M.degree} of M")
    c = M.coeffs
    scale = float(np.max(np.abs(c)))
    nz = np.flatnonzero(np.abs(c) > 1e-14 * scale)
    eff = int(nz[-1]) if nz.size else 0
    if c[0].real <= 0:
        raise NotPositiveError("symbol (zeroth coefficient)", 0, 1, float(c[0].real))
    out = np.zeros(n + 1, dtype=complex)
    if eff == 0:
        out[0] = np.sqrt(c[0].real)
        return out
    trimmed = PseudoPolynomial(c[: eff + 1])
    laurent = trimmed.laurent()
    roots = np.roots(laurent)
    dpoly = np.polyder(laurent)
    with np.errstate(divide="ignore", invalid="ignore"):
        polished = roots - np.polyval(laurent, roots) / np.polyval(dpoly, roots)
    roots = np.where(np.isfinite(polished), polished, roots)
    mods = np.abs(roots)
    if np.any(np.abs(mods - 1.0) < tol):
        _classify_circle_root(trimmed)
    inside = roots[mods < 1.0]
    if inside.size != eff:
        _classify_circle_root(trimmed)
    alpha = np.poly(inside)
    if np.all(np.isreal(c)):
        alpha = alpha.real.astype(complex) if np.max(np.abs(alpha.imag)) < 1e-10 else alpha
    a0 = np.sqrt(c[0].real / np.sum(np.abs(alpha) ** 2))
    out[: eff + 1] = a0 * alpha
    resid = np.max(np.abs(PseudoPolynomial.from_factor(out).coeffs[: eff + 1] - c[: eff + 1]))
    if resid > tol * max(1.0, scale):
        raise FactorizationOnCircleError(f"factorization residual {resid:.3g} exceeds {tol:g}")
    return out


def unilateral_arma(P, Q):
    """Forward and backward unilateral ARMA models from banded factors of Q and P."""
    n = max(P.degree, Q.degree)
    a_raw = factor_banded(Q, n)
    b_raw = factor_banded(P, n)
    a = a_raw / a_raw[0]
    b = b_raw / a_raw[0]
    forward = ArmaModel("unilateral-forward", n, a, b)
    backward = ArmaModel("unilateral-backward", n, np.conj(a[::-1]), np.conj(b[::-1]))
    return forward, backward


@dataclass(frozen=True, eq=False)
class WhiteningFactor:
    """Circulant W with Sigma = W W^*.

    ``kind`` records the construction: ``"outer"`` (W = A^{-1} B from
    banded factors), ``"log"`` (exponential of the causal log spectrum) or
    ``"pointwise"`` (square root of the grid values).
    """

    kind: str
    values: np.ndarray
    a: np.ndarray = None
    b: np.ndarray = None

    @property
    def N(self):
        return self.values.shape[0] // 2

    def coefficients(self):
        """W_k for k = -N+1..N (grid order)."""
        return idft(self.values)

    def circulant(self):
        return CirculantMatrix(self.values, hermitian=False if self.kind != "pointwise" else None)

    def residual(self, phi):
        vals = phi.values if isinstance(phi, DiscreteSpectrum) else np.asarray(phi)
        return float(np.max(np.abs(np.abs(self.values) ** 2 - vals)))


def whitening(phi, P=None, Q=None, method=None):
    """Spectral factor W of a positive spectrum with |W(zeta_j)|^2 = Phi(zeta_j).

    ``method`` selects the construction:

    * ``"outer"``: W = b/a from banded factors of the generating pair (P, Q),
      which must be given;
    * ``"log"``: W = exp of the causal part of log Phi on the grid.  The
      modulus is exact on the grid and W is the outer factor up to
      cepstral aliasing;
    * ``"pointwise"``: the trivial square root of the grid values.

    The default is ``"outer"`` when (P, Q) are given and ``"log"`` otherwise.
    """
    if not isinstance(phi, DiscreteSpectrum):
        raise TypeError("expected a DiscreteSpectrum")
    if phi.is_matrix:
        raise ValueError("whitening is implemented for scalar spectra")
    if not phi.positive:
        j = int(np.argmin(phi.values))
        raise NotPositiveError("spectrum", phi.circle.indices[j], phi.N, float(phi.values[j]))
    if method is None:
        method = "outer" if P is not None and Q is not None else "log"
    if method == "outer":
        if P is None or Q is None:
            raise ValueError("the outer factor needs the pair (P, Q)")
        n = max(P.degree, Q.degree)
        a = factor_banded(Q, n)
        b = factor_banded(P, n)
        E = np.exp(-1j * np.outer(phi.circle.thetas, np.arange(n + 1)))
        return WhiteningFactor("outer", (E @ b) / (E @ a), a=a, b=b)
    if method == "log":
        N = phi.N
        g = idft(np.log(phi.values).astype(complex))
        h = np.zeros_like(g)
        h[N - 1] = 0.5 * g[N - 1].real
        h[N:2 * N - 1] = g[N:2 * N - 1]
        h[2 * N - 1] = 0.5 * g[2 * N - 1]
        return WhiteningFactor("log", np.exp(dft(h)))
    if method == "pointwise":
        return WhiteningFactor("pointwise", np.sqrt(phi.values).astype(complex))
    raise ValueError(f"unknown whitening method {method!r}")


def simulate(source, R, seed=None, N=None, real=False):
    """Draw R realizations of y(-N+1..N) by spectral sampling.

    The DFT coefficients yhat(zeta_k) are independent Gaussians with
    E|yhat|^2 = 2N Phi(zeta_k) and y(t) = 1/(2N) sum_k zeta_k^t yhat(zeta_k),
    which gives an exactly periodic stationary process.  With ``real=True``
    yhat is conjugate-symmetrized, which needs Phi(zeta_{-k}) = conj Phi(zeta_k).

    Returns an array of shape (R, 2N) or (R, 2N, m).
    """
    if isinstance(source, ArmaModel):
        if N is None:
            raise ValueError("N is required to simulate from an ARMA model")
        phi = source.spectrum(N)
    elif isinstance(source, DiscreteSpectrum):
        phi = source
    else:
        v = np.asarray(source)
        phi = DiscreteSpectrum(DiscreteCircle(v.shape[0] // 2), v)
    N = phi.N
    vals = phi.values if phi.is_matrix else phi.values[:, None, None]
    m = vals.shape[1]
    try:
        L = np.linalg.cholesky(2 * N * vals)
    except np.linalg.LinAlgError as err:
        raise ValueError("spectrum must be positive definite on the grid") from err
    rng = np.random.default_rng(seed)
    idx = phi.circle.indices
    if real:
        mirror = vals[(-idx + N - 1) % (2 * N)]
        if np.max(np.abs(mirror - np.conj(vals))) > 1e-10 * max(1.0, np.max(np.abs(vals))):
            raise ValueError("real output needs Phi(zeta_{-k}) = conj(Phi(zeta_k))")
        g = (rng.standard_normal((R, 2 * N, m)) + 1j * rng.standard_normal((R, 2 * N, m))) / np.sqrt(2)
        selfconj = (idx == 0) | (idx == N)
        g[:, selfconj] = rng.standard_normal((R, int(selfconj.sum()), m))
        yhat = np.einsum("jab,rjb->rja", L, g)
        # zeta_0 and zeta_N are self-conjugate; the rest come in pairs k, -k
        pos = np.arange(1, N) + N - 1
        neg = -np.arange(1, N) + N - 1
        yhat[:, neg] = np.conj(yhat[:, pos])
    else:
        g = (rng.standard_normal((R, 2 * N, m)) + 1j * rng.standard_normal((R, 2 * N, m))) / np.sqrt(2)
        yhat = np.einsum("jab,rjb->rja", L, g)
    y = np.moveaxis(idft(np.moveaxis(yhat, 1, 0)), 0, 1)
    if real:
        y = y.real
    return y[:, :, 0] if not phi.is_matrix else y


def sample_covariances(y, n):
    """Cyclic sample lags (1/2N) sum_t y(t+k) y(t)^* averaged over realizations.

    Returns ``(mean, standard_error)`` for k = 0..n, each of shape (n+1,)
    (scalar) or (n+1, m, m).
    """
    y = np.asarray(y)
    scalar = y.ndim == 2
    if scalar:
        y = y[:, :, None]
    R, size, _ = y.shape
    per = np.stack([np.einsum("rta,rtb->rab", np.roll(y, -k, axis=1), np.conj(y)) / size
                    for k in range(n + 1)], axis=1)
    mean = per.mean(axis=0)
    se_re = per.real.std(axis=0, ddof=1) / np.sqrt(R)
    se_im = per.imag.std(axis=0, ddof=1) / np.sqrt(R)
    se = se_re + 1j * se_im
    if scalar:
        return mean[:, 0, 0], se[:, 0, 0]
    return mean, se


def _positions(idx, N, m):
    t = (np.asarray(sorted(set(int(i) for i in idx))) + N - 1) % (2 * N)
    return (t[:, None] * m + np.arange(m)[None, :]).ravel()


def conditional_orthogonality(sigma, J, K):
    """E{ytilde_J ytilde_K^*} for disjoint time-index sets J and K.

    ytilde_K is the error of estimating y_K from all other components.  Its
    covariance is the Schur complement of the K block of Sigma, and the
    cross covariance equals Sigmatilde_J G[J, K] Sigmatilde_K with
    G = Sigma^{-1}; it vanishes exactly when G[J, K] does.  Time indices are
    taken modulo 2N into -N+1..N.
    """
    if isinstance(sigma, CirculantMatrix):
        S = dense(sigma)
        G = dense(sigma.inverse())
        N, m = sigma.N, sigma.m
    else:
        S = np.asarray(sigma, dtype=complex)
        if S.shape[0] > dense_cap():
            raise DenseCapError(f"matrix size {S.shape[0]} exceeds the dense cap")
        N, m = S.shape[0] // 2, 1
        G = np.linalg.inv(S)
    pj = _positions(J, N, m)
    pk = _positions(K, N, m)
    if np.intersect1d(pj, pk).size:
        raise ValueError("J and K must be disjoint")
    return _schur(S, pj) @ G[np.ix_(pj, pk)] @ _schur(S, pk)


def _schur(S, p):
    rest = np.setdiff1d(np.arange(S.shape[0]), p)
    out = S[np.ix_(p, p)]
    if rest.size:
        out = out - S[np.ix_(p, rest)] @ np.linalg.solve(S[np.ix_(rest, rest)], S[np.ix_(rest, p)])
    return out
