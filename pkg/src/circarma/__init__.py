"""Rational covariance extension for periodic stationary processes.

A stationary process of period 2N has a circulant covariance matrix whose
spectrum lives on the 2N-th roots of unity.  Given finitely many lags this
package finds rational spectra P/Q that match them, solves the joint
covariance and cepstral matching problem, and turns the result into ARMA
models, whitening filters and simulations, for scalar and vector processes.
"""

from .cepstral import CepstralData, JointSolution, cepstral_moments, epsilon_adjustment, joint_dual_objective, solve_joint
from .circulant import (CirculantMatrix, add, banded, dense, diagonalize, exp_of, fourier_matrix, inverse, is_banded,
                        log_of, multiply, shift, trace_form)
from .cones import (CovarianceData, FullPeriodicSequence, MembershipCertificate, certify_membership,
                    toeplitz_positive, validate_full_sequence)
from .exceptions import (BoundaryError, CircArmaError, DenseCapError, DiscreteOnlyError,
                         FactorizationOnCircleError, IndeterminateError, InfeasibleError, NotPositiveError)
from .harmonics import (DiscreteCircle, DiscreteSpectrum, PseudoPolynomial, dft, discrete_moment, grid, idft,
                        moments_of)
from .multivar import (MatrixPseudoPolynomial, bilateral_matrix_arma, block_cepstrum, block_extension_and_sigma,
                       block_moments, block_spectrum, solve_dual_block, solve_joint_block)
from .realization import (ArmaModel, WhiteningFactor, bilateral_arma, conditional_orthogonality,
                          extend_covariances, factor_banded, sample_covariances, simulate, unilateral_arma,
                          whitening)
from .solver import DualSolution, SolverConfig, dual_gradient, dual_hessian, dual_objective, solve_dual, spectrum_of

__version__ = "0.1.0"
