import numpy as np
import pytest

from circarma.exceptions import NotPositiveError
from circarma.experiments import (ArmaTruth, ar8_truth, arma_truth, me_decay_sweep, me_fit, pole_pairs,
                                  random_interior_pair, random_pseudo, sup_error)
from circarma.harmonics import PseudoPolynomial

FINE = 2**16


def fine_moments(values, n):
    """Trapezoid moments on a fine uniform grid; exact up to aliasing of order r^FINE."""
    th = 2 * np.pi * np.arange(FINE) / FINE
    return np.array([np.mean(np.exp(1j * k * th) * values) for k in range(n + 1)])


@pytest.mark.parametrize("truth", [ar8_truth(), arma_truth(),
                                   ArmaTruth((0.6j, -0.3 + 0.2j), (0.4 - 0.1j,), gain=1.5)])
def test_truth_covariances_and_cepstrum_against_integration(truth):
    th = 2 * np.pi * np.arange(FINE) / FINE
    phi = truth.spectrum_at(th)
    assert np.allclose(truth.covariances(6), fine_moments(phi, 6), atol=1e-10 * np.max(phi))
    assert np.allclose(truth.cepstrum(6), fine_moments(np.log(phi), 6)[1:], atol=1e-10)


def test_truth_real_flag_and_validation():
    assert ar8_truth().is_real and arma_truth().is_real
    assert not ArmaTruth((0.5j,)).is_real
    assert len(ar8_truth().poles) == 8
    assert np.all(np.isreal(ar8_truth().covariances(4)))
    with pytest.raises(NotPositiveError):
        ArmaTruth((1.0,))
    assert np.allclose(pole_pairs([0.5], [np.pi / 2]), [0.5j, -0.5j])


def test_white_and_ar1_truth_fit_exactly():
    white = ArmaTruth((), gain=2.0)
    assert np.allclose(white.covariances(3), [4, 0, 0, 0])
    P, Q = me_fit(white, 2, 8)
    assert sup_error(P, Q, white, np.linspace(-np.pi, np.pi, 50)) < 1e-12
    # 1/|1 - 0.5 e^{-i theta}|^2 = 1/(1.25 - cos theta)
    ar1 = ArmaTruth((0.5,))
    assert sup_error(PseudoPolynomial([1.0]), PseudoPolynomial([1.25, -0.5]), ar1, np.linspace(0, 6, 40)) < 1e-12


def test_small_sweep_is_ordered_and_decreasing():
    rows = me_decay_sweep(ar8_truth(), 8, [128, 32, 64], workers=2)
    assert [r["N"] for r in rows] == [32, 64, 128]
    assert all(r["model"] == "ar" and r["n"] == 8 for r in rows)
    errs = [r["error"] for r in rows]
    assert errs[0] > errs[1] > errs[2]
    with pytest.raises(ValueError):
        me_decay_sweep(ar8_truth(), 8, [])


def test_random_generators_are_interior():
    rng = np.random.default_rng(0)
    th = np.exp(1j * np.linspace(-np.pi, np.pi, 2000))
    for _ in range(10):
        R = random_pseudo(3, rng, floor=0.5, complex_coeffs=True)
        assert np.min(R(th).real) >= 0.5 - 1e-12
        P, Q = random_interior_pair(2, rng)
        assert P.coeffs[0] == 1 and np.min(Q(th).real) > 0
