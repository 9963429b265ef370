import numpy as np
import pytest

import oracles
from circarma.cepstral import (CepstralData, JointDual, cepstral_moments, epsilon_adjustment, joint_dual_objective,
                               solve_joint)
from circarma.cones import CovarianceData
from circarma.exceptions import BoundaryError, NotPositiveError
from circarma.experiments import arma_truth, random_interior_pair
from circarma.harmonics import DiscreteSpectrum, PseudoPolynomial, grid, moments_of
from circarma.solver import dual_objective, solve_dual, spectrum_of, to_real

ONE = PseudoPolynomial([1.0])


def joint_oracle(P, Q, c, gamma, lam):
    """J_lam by explicit summation over the grid."""
    N, n = c.N, c.n
    q, p = Q.padded(n).coeffs, P.padded(n).coeffs
    g = np.concatenate([[0], gamma, np.zeros(n - len(gamma))])
    pair_c = c.lags[0].real * q[0].real + 2 * sum(np.real(c.lags[k] * np.conj(q[k])) for k in range(1, n + 1))
    pair_g = 2 * sum(np.real(g[k] * np.conj(p[k])) for k in range(1, n + 1))
    Pv, Qv = oracles.symbol_values(p, N), oracles.symbol_values(q, N)
    ent = sum(a * (np.log(a) - np.log(b)) - lam * np.log(a) for a, b in zip(Pv, Qv)) / (2 * N)
    return pair_c - pair_g + ent


def synthetic(n, N, seed, complex_coeffs=False):
    rng = np.random.default_rng(seed)
    P, Q = random_interior_pair(n, rng, complex_coeffs=complex_coeffs)
    phi = spectrum_of(P, Q, N)
    return P, Q, CovarianceData(moments_of(phi, n), N), cepstral_moments(phi, n)


def test_cepstral_data_validation_and_json():
    g = CepstralData([0.5, 0.1j])
    assert g.n == 2
    assert np.allclose(CepstralData.from_json(g.to_json()).gammas, g.gammas)
    with pytest.raises(ValueError):
        CepstralData([[1, 2]])
    with pytest.raises(ValueError):
        CepstralData([np.nan])


def test_cepstral_moments_examples():
    assert np.allclose(cepstral_moments(DiscreteSpectrum(grid(8), np.full(16, 3.0)), 3).gammas, 0, atol=1e-15)
    phi = spectrum_of(PseudoPolynomial([1.25, 0.5]), ONE, 64)
    got = cepstral_moments(phi, 3).gammas
    vals = phi.values
    assert np.allclose(got, [oracles.moment(np.log(vals), k) for k in (1, 2, 3)], atol=1e-14)
    # continuous cepstrum of |1 + 0.5 z^-1|^2 is -(-0.5)^k / k, approached as N grows
    cont = np.array([-(-0.5) ** k / k for k in (1, 2, 3)])
    errs = [np.max(np.abs(cepstral_moments(spectrum_of(PseudoPolynomial([1.25, 0.5]), ONE, N), 3).gammas - cont))
            for N in (4, 8, 16)]
    assert errs[0] > errs[1] > errs[2]
    with pytest.raises(NotPositiveError):
        cepstral_moments(DiscreteSpectrum(grid(2), [1.0, -1.0, 1.0, 1.0]), 1)


def test_cepstral_round_trip_oracle():
    rng = np.random.default_rng(1)
    P, Q = random_interior_pair(3, rng, complex_coeffs=True)
    phi = spectrum_of(P, Q, 12)
    vals = oracles.symbol_values(P.coeffs, 12) / oracles.symbol_values(Q.coeffs, 12)
    expected = [oracles.moment(np.log(vals), k) for k in range(1, 4)]
    assert np.allclose(cepstral_moments(phi, 3).gammas, expected, atol=1e-12)


def test_epsilon_examples():
    assert np.allclose(epsilon_adjustment(ONE, 0.1, 3, 8), 0)
    P = PseudoPolynomial([1.0, 0.3 - 0.1j, 0.1j])
    assert np.allclose(epsilon_adjustment(P, 0.0, 3, 8), 0)
    vals = 1 / oracles.symbol_values(P.coeffs, 8)
    assert np.allclose(epsilon_adjustment(P, 0.2, 3, 8), [0.2 * oracles.moment(vals, k) for k in (1, 2, 3)],
                       atol=1e-14)
    with pytest.raises(NotPositiveError):
        epsilon_adjustment(PseudoPolynomial([1.0, 1.0]), 0.1, 1, 4)


def test_joint_objective_examples():
    c = CovarianceData([1, 0, 0], 6)
    for lam in (0.0, 0.5):
        assert np.isclose(joint_dual_objective(ONE, ONE, c, [0, 0], lam), 1)
    Q = PseudoPolynomial([1.3, 0.2, -0.1])
    assert np.isclose(joint_dual_objective(ONE, Q, c, [0, 0], 0), dual_objective(Q, c, ONE))
    assert joint_dual_objective(ONE, PseudoPolynomial([0.5, 1.0]), c, [0, 0], 0.1) == np.inf
    with pytest.raises(ValueError):
        joint_dual_objective(PseudoPolynomial([2.0]), ONE, c, [0, 0], 0.1)


def test_joint_objective_summation_oracle():
    rng = np.random.default_rng(2)
    P, Q = random_interior_pair(3, rng, complex_coeffs=True)
    c = CovarianceData([1.4, 0.2 + 0.1j, -0.1, 0.05j], 9)
    gamma = [0.3 - 0.2j, 0.1, -0.05j]
    for lam in (0.0, 0.05):
        assert abs(joint_dual_objective(P, Q, c, gamma, lam) - joint_oracle(P, Q, c, gamma, lam)) < 1e-12


@pytest.mark.parametrize("seed", range(3))
def test_joint_gradient_and_hessian(seed):
    rng = np.random.default_rng(20 + seed)
    P, Q = random_interior_pair(2, rng, complex_coeffs=True)
    c = CovarianceData([1.2, 0.3 - 0.1j, 0.05], 8)
    prob = JointDual(c, [0.2 + 0.1j, -0.1], 0.05)
    z = np.concatenate([to_real(Q.coeffs), to_real(P.coeffs, constant=False)])
    g = prob.gradient(z)
    fd = oracles.central_gradient(prob.value, z)
    assert np.max(np.abs(g - fd)) <= 1e-5 * max(1.0, np.max(np.abs(g)))
    H = prob.hessian(z)
    Hfd = np.column_stack([oracles.central_gradient(lambda w, i=i: prob.gradient(w)[i], z) for i in range(z.size)])
    assert np.allclose(H, Hfd.T, rtol=1e-5, atol=1e-6)
    assert np.min(np.linalg.eigvalsh(H)) > 0


def test_white_noise_is_matched_exactly():
    for lam in (1e-3, 0.1):
        sol = solve_joint(CovarianceData([1, 0, 0], 8), [0, 0], lam)
        assert np.allclose(sol.P.coeffs, [1, 0, 0], atol=1e-9)
        assert np.allclose(sol.Q.coeffs, [1, 0, 0], atol=1e-9)


def test_me_fixed_point():
    c = CovarianceData(arma_truth().covariances(4), 32)
    me = solve_dual(c, ONE)
    gamma = cepstral_moments(me.phi, 4)
    sol = solve_joint(c, gamma, 1e-3)
    assert np.max(np.abs(sol.P.coeffs - np.array([1, 0, 0, 0, 0]))) <= 0.05


@pytest.mark.parametrize("complex_coeffs", [False, True])
def test_adjusted_matching_on_synthetic_truth(complex_coeffs):
    P, Q, c, gamma = synthetic(4, 64, 3, complex_coeffs)
    sol = solve_joint(c, gamma, 1e-2)
    assert sol.covariance_residual <= 1e-8
    assert sol.cepstral_residual <= 1e-6
    # residuals reported by the solver agree with an independent recomputation
    vals = sol.phi.values
    adjusted = gamma.gammas + epsilon_adjustment(sol.P, 1e-2, 4, 64)
    assert np.allclose([oracles.moment(np.log(vals), k) for k in range(1, 5)], adjusted, atol=1e-6)
    assert np.allclose(sol.epsilon, adjusted - gamma.gammas)
    assert sol.grad_norm <= 1e-8
    assert sol.P.coeffs[0] == 1 and sol.Q.real == (not complex_coeffs)


def test_epsilon_shrinks_with_lambda():
    _, _, c, gamma = synthetic(3, 32, 4)
    norms = [np.max(np.abs(solve_joint(c, gamma, lam).epsilon)) for lam in (1e-1, 1e-2, 1e-3)]
    assert norms[0] > norms[1] > norms[2]


def test_lambda_guards():
    _, _, c, gamma = synthetic(2, 16, 5)
    with pytest.raises(ValueError):
        solve_joint(c, gamma, 0.0)
    with pytest.raises(ValueError):
        solve_joint(c, gamma, -1.0)
    with pytest.raises(BoundaryError):
        solve_joint(c, gamma, 0.0, allow_unregularized=True)
    sol = solve_joint(c, gamma)
    assert np.isclose(sol.lam, 1e-2 * c.lags[0].real)


def test_real_data_small_lambda_stays_real():
    # truth of degree 2 fitted with n = 3: the lam -> 0 problem is degenerate (common factors),
    # the Hessian is ill-conditioned and rounding drift must not leak into imaginary parts
    Pt, Qt = PseudoPolynomial([1.0, 0.35, -0.1]), PseudoPolynomial([1.4, -0.6, 0.25])
    phi = spectrum_of(Pt, Qt, 64)
    c = CovarianceData(moments_of(phi, 3), 64)
    sol = solve_joint(c, cepstral_moments(phi, 3), 1e-6)
    assert sol.P.real and sol.Q.real
    assert sol.covariance_residual <= 1e-8 and sol.cepstral_residual <= 1e-6


def test_matched_degree_recovers_truth_as_lambda_shrinks():
    Pt, Qt = PseudoPolynomial([1.0, 0.35, -0.1]), PseudoPolynomial([1.4, -0.6, 0.25])
    phi = spectrum_of(Pt, Qt, 64)
    c = CovarianceData(moments_of(phi, 2), 64)
    gamma = cepstral_moments(phi, 2)
    errs = [np.max(np.abs(solve_joint(c, gamma, lam).P.coeffs - Pt.coeffs)) for lam in (1e-2, 1e-4, 1e-6)]
    assert errs[0] > errs[1] > errs[2] and errs[2] < 1e-4


def test_tiny_lambda_converges_near_common_factor_pair():
    # the Hessian condition number exceeds 1e12 along the way; the joint step must keep descending
    P, Q, c, gamma = synthetic(2, 16, 5)
    sol = solve_joint(c, gamma, 1e-8)
    assert sol.grad_norm <= 1e-8
    assert np.max(np.abs(sol.P.coeffs - P.coeffs)) < 1e-3
    assert np.max(np.abs(sol.Q.coeffs - Q.coeffs)) < 1e-2
