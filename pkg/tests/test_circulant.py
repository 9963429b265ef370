import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from circarma.circulant import (CirculantMatrix, banded, dense, diagonalize, fourier_matrix, inverse, is_banded,
                                log_of, shift, shift_matrix, trace_form)
from circarma.exceptions import DenseCapError, NotPositiveError
from circarma.harmonics import PseudoPolynomial, grid


def random_hermitian_symbol(rng, N, m, n=None, shift_=0.0):
    """Hermitian block symbol; banded of order n when n is given."""
    if n is None:
        A = rng.standard_normal((2 * N, m, m)) + 1j * rng.standard_normal((2 * N, m, m))
        return CirculantMatrix(A @ np.conj(np.swapaxes(A, -1, -2)) + shift_ * np.eye(m))
    coeffs = np.zeros((2 * N, m, m), dtype=complex)
    c0 = rng.standard_normal((m, m))
    coeffs[N - 1] = c0 + c0.T + shift_ * np.eye(m)
    for k in range(1, n + 1):
        B = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
        coeffs[N - 1 + k] = B
        coeffs[N - 1 - k] = B.conj().T
    return CirculantMatrix.from_coefficients(coeffs)


def random_general(rng, N, m):
    return CirculantMatrix(rng.standard_normal((2 * N, m, m)) + 1j * rng.standard_normal((2 * N, m, m)))


def test_identity_and_shift_symbols():
    I = CirculantMatrix.identity(4, 2)
    F, vals = diagonalize(I)
    assert np.allclose(vals, np.eye(2))
    S = shift(4)
    assert np.allclose(S.values[:, 0, 0], grid(4).points)
    assert not S.hermitian
    assert np.allclose(dense(S), shift_matrix(4))


def test_shift_matrix_properties():
    S = shift_matrix(3)
    assert np.allclose(np.linalg.matrix_power(S, 6), np.eye(6))
    assert np.allclose(np.linalg.inv(S), S.T)
    Sb = shift_matrix(3, 2)
    assert np.allclose(np.linalg.matrix_power(Sb, 6), np.eye(12))


def test_dense_diagonalization_oracle():
    rng = np.random.default_rng(0)
    M = random_hermitian_symbol(rng, 4, 2, n=2)
    F, vals = diagonalize(M)
    assert np.allclose(F @ F.conj().T, np.eye(16), atol=1e-12)
    D = np.zeros((16, 16), dtype=complex)
    for j in range(8):
        D[2 * j:2 * j + 2, 2 * j:2 * j + 2] = vals[j]
    assert np.allclose(dense(M), F.conj().T @ D @ F, atol=1e-9)
    # eigenvalues agree with the dense eigen-decomposition
    assert np.allclose(np.sort(np.linalg.eigvalsh(dense(M))), np.sort(np.linalg.eigvalsh(vals).ravel()), atol=1e-9)


def test_fourier_matrix_diagonalizes_scalar_shift():
    F = fourier_matrix(3)
    S = shift_matrix(3)
    D = F @ S @ F.conj().T
    assert np.allclose(D, np.diag(grid(3).points), atol=1e-12)


def test_dense_matches_period_four_layout():
    c0, c1, c2 = 3.0, 1.0, 0.5
    M = CirculantMatrix.from_coefficients([c1, c0, c1, c2])  # lags -1, 0, 1, 2
    expected = np.array([[c0, c1, c2, c1], [c1, c0, c1, c2], [c2, c1, c0, c1], [c1, c2, c1, c0]])
    assert np.allclose(dense(M), expected)
    assert np.allclose(dense(CirculantMatrix.identity(3)), np.eye(6))


def test_dense_shift_conjugation_and_loop_oracle():
    rng = np.random.default_rng(1)
    M = random_general(rng, 3, 2)
    D = dense(M)
    S = shift_matrix(3, 2)
    assert np.allclose(S @ D @ S.T, D, atol=1e-12)
    coeffs = M.coefficients()
    by_lag = np.array([coeffs[(k + 2) % 6] for k in range(6)])  # lag k at grid position k + N - 1
    assert np.allclose(D, oracles.block_dense(by_lag, 3), atol=1e-12)


def test_dense_cap(monkeypatch):
    M = CirculantMatrix.identity(8)
    with pytest.raises(DenseCapError):
        dense(M, cap=8)
    monkeypatch.setenv("CIRCARMA_DENSE_CAP", "4")
    with pytest.raises(DenseCapError):
        dense(M)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_algebra_homomorphism(m):
    rng = np.random.default_rng(10 + m)
    for N in (1, 3, 8):
        A, B = random_general(rng, N, m), random_general(rng, N, m)
        assert np.allclose(dense(A @ B), dense(A) @ dense(B), atol=1e-9)
        assert np.allclose(dense(A + B), dense(A) + dense(B), atol=1e-9)
        assert np.allclose(dense(A - B), dense(A) - dense(B), atol=1e-9)
        assert np.allclose(dense(A.adjoint()), dense(A).conj().T, atol=1e-9)


def test_block_multiplication_does_not_commute():
    rng = np.random.default_rng(2)
    A, B = random_hermitian_symbol(rng, 2, 2), random_hermitian_symbol(rng, 2, 2)
    assert np.max(np.abs((A @ B).values - (B @ A).values)) > 1e-3


def test_scalar_multiplication_commutes():
    rng = np.random.default_rng(2)
    A, B = random_general(rng, 4, 1), random_general(rng, 4, 1)
    assert np.allclose((A @ B).values, (B @ A).values)


def test_inverse_examples():
    I = CirculantMatrix.identity(3, 2)
    assert np.allclose(inverse(I).values, np.eye(2))
    M = banded(PseudoPolynomial([2.5, 1.0]), 4)
    inv = M.inverse()
    j = list(grid(4).indices).index(0)
    assert np.isclose(inv.values[j, 0, 0], 1 / 4.5)
    assert np.allclose(dense(inv), np.linalg.inv(dense(M)), atol=1e-12)


def test_inverse_coefficients_hermitian():
    rng = np.random.default_rng(4)
    M = random_hermitian_symbol(rng, 5, 2, shift_=1.0)
    c = M.inverse().coefficients()
    N = 5
    for k in range(1, N):
        assert np.allclose(c[N - 1 - k], c[N - 1 + k].conj().T, atol=1e-10)


def test_inverse_singular_names_point():
    M = banded(PseudoPolynomial([1.0, 0.5]), 2)  # 1 + cos(theta) vanishes at zeta = -1
    with pytest.raises(NotPositiveError) as err:
        M.inverse()
    assert err.value.index == 2
    assert np.isclose(err.value.point, -1)


def test_log_requires_positive_definite():
    M = banded(PseudoPolynomial([0.5, 1.0]), 3)
    with pytest.raises(NotPositiveError) as err:
        log_of(M)
    assert "zeta_" in str(err.value)


def test_log_exp_roundtrip_blocks():
    rng = np.random.default_rng(6)
    M = random_hermitian_symbol(rng, 4, 3, shift_=0.5)
    back = M.log().exp()
    assert np.allclose(back.values, M.values, atol=1e-9)
    # spectral mapping: dense log equals log of dense (Hermitian PD)
    w, V = np.linalg.eigh(dense(M))
    assert np.allclose(dense(M.log()), (V * np.log(w)) @ V.conj().T, atol=1e-9)


def test_trace_form_examples():
    I = CirculantMatrix.identity(5)
    assert np.isclose(trace_form(I, I), 10)
    a = np.array([2.0, 0.3 - 0.2j, 0.1j])
    b = np.array([1.0, -0.5j, 0.25])
    N = 5
    A, B = banded(PseudoPolynomial(a), N), banded(PseudoPolynomial(b), N)
    expected = 2 * N * (a[0] * b[0] + 2 * np.real(np.sum(a[1:] * np.conj(b[1:]))))
    assert np.isclose(trace_form(A, B), expected)
    rng = np.random.default_rng(8)
    C, D = random_hermitian_symbol(rng, 3, 2), random_hermitian_symbol(rng, 3, 2)
    assert np.isclose(trace_form(C, D), np.trace(dense(C) @ dense(D)).real, atol=1e-10)


def test_is_banded_examples():
    I = CirculantMatrix.identity(4)
    assert is_banded(I, 0) == (True, 0.0)
    M = banded(PseudoPolynomial([2.5, 1.0]), 8)
    ok, res = is_banded(M.inverse(), 1)
    assert not ok and res > 1e-3
    assert is_banded(M, 1)[0]
    with pytest.raises(ValueError):
        is_banded(M, 8)


def test_hermitian_detection_and_rejection():
    with pytest.raises(ValueError):
        CirculantMatrix(np.ones((3, 1, 1)))
    with pytest.raises(ValueError):
        CirculantMatrix(np.array([[[1, 1j], [0, 1]]] * 4), hermitian=True)
    M = CirculantMatrix(np.array([[[1, 1j], [-1j, 1]]] * 4))
    assert M.hermitian


@given(st.integers(0, 2 ** 31 - 1), st.integers(1, 4), st.integers(1, 3))
def test_coefficients_values_roundtrip(seed, N, m):
    rng = np.random.default_rng(seed)
    M = random_general(rng, N, m)
    again = CirculantMatrix.from_coefficients(M.coefficients())
    assert np.allclose(again.values, M.values, atol=1e-10)
