"""Quantum harmonic analysis on the Bergman space of the unit disk.

Truncated-matrix numerics for the SU(1,1) discrete series representation,
QHA convolutions and the Toeplitz approximants ``S_{B_r}``.
"""

from .bergman import (
    Symbol, TruncatedSpace, adjoint, berezin, compress, inner, kernel_vector, norm,
    normalized_kernel_vector, op_norm, phi_operator, rank_one, read_operator_csv,
    toeplitz_matrix, trace_norm, write_operator_csv,
)
from .config import ConfigError, RunConfig, load_config
from .convolution import (
    GroupFunction, conv_fun_fun, conv_groupfun_op, conv_symbol_op, push_through_error,
    young_report,
)
from .exceptions import DegenerateInputError, IntegrationError, NumericalError
from .geometry import (
    GroupElement, RotationElement, abs_value_identity_check, act, cocycle, decompose, embed,
    lift_tau, pseudo_dist, tau,
)
from .localization import (
    LocalizationProfile, continuity_modulus_check, convergence_experiment, i_functional,
    localization_profile, s_br, s_br_complement, s_br_via_convolutions, s_g,
)
from .quadrature import (
    DiskQuadrature, GroupQuadrature, integrate_disk, integrate_group, integrate_lambda,
    region_nodes,
)
from .representation import (
    alpha, formal_dimension_estimate, matrix_coefficient, pi_matrix, pi_matrix_series,
    schur_pairing,
)

__version__ = "0.1.0"
