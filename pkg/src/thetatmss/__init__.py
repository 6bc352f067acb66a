"""Rotation-parametrized two-mode squeezed states and their verification tools.

The library models Gaussian states as covariance matrices (vacuum quadrature
variance 1/4), follows a family of two-mode squeezed states under a rotation
of the collective (eta, mu) plane, and evaluates the linear-entropy impurity
of one reduced mode in closed form. Two independent brute-force pathways
cross-check the closed forms: midpoint-grid integration of the Wigner
function, and regulated oscillatory integrals for the mutually unbiased
quadrature-basis overlaps. The `thetatmss` command line exposes all of it as
data files, figures and machine-readable reports.
"""

from .mub import (
    DEFAULT_SCHEDULE,
    ExtrapolationError,
    MubKernel,
    RegulatorSchedule,
    fourier_check,
    kernel_eval,
    overlap_modulus,
    predicted_overlap_modulus,
)
from .phase_space import (
    VACUUM_VARIANCE,
    apply_transform,
    epr_basis_change,
    is_symplectic,
    mode_rotation,
    purity,
    reduced_covariance,
    symplectic_eigenvalues,
    symplectic_form,
    vacuum_covariance,
    validate_covariance,
    vb_rotation,
)
from .tmss import (
    MATRIX_R_MAX,
    R_MAX,
    ImpurityValue,
    TmssParams,
    impurity_closed_form,
    impurity_from_covariance,
    theta_tmss_covariance,
    tmss_covariance,
    transition_width,
)
from .wigner import (
    GridResolutionError,
    QuadratureGrid,
    WignerGaussian,
    grid_second_moments,
    mode_marginal,
    moment_errors,
    quadrature_impurity,
    wigner_eval,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "VACUUM_VARIANCE",
    "symplectic_form",
    "vacuum_covariance",
    "validate_covariance",
    "is_symplectic",
    "mode_rotation",
    "epr_basis_change",
    "vb_rotation",
    "apply_transform",
    "reduced_covariance",
    "purity",
    "symplectic_eigenvalues",
    "R_MAX",
    "MATRIX_R_MAX",
    "TmssParams",
    "ImpurityValue",
    "tmss_covariance",
    "theta_tmss_covariance",
    "impurity_closed_form",
    "impurity_from_covariance",
    "transition_width",
    "GridResolutionError",
    "WignerGaussian",
    "wigner_eval",
    "QuadratureGrid",
    "mode_marginal",
    "quadrature_impurity",
    "grid_second_moments",
    "moment_errors",
    "ExtrapolationError",
    "MubKernel",
    "RegulatorSchedule",
    "DEFAULT_SCHEDULE",
    "kernel_eval",
    "predicted_overlap_modulus",
    "overlap_modulus",
    "fourier_check",
]
