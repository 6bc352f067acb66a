"""A rotation-parametrized family of two-mode squeezed Gaussian states.

The base state squeezes the EPR combinations (x1 - x2) and (p1 + p2): in the
EPR order (xi, nu, eta, mu) its covariance is diagonal with variances
(e^{-2r}, e^{2r}, e^{2r}, e^{-2r})/4. Rotating the conjugate (eta, mu) plane
by theta sweeps a family of equally pure states that ends, at theta = pi/2,
on a product of two single-mode squeezed states with no cross-mode
correlations left.

The linear-entropy impurity of either reduced mode has the closed form

    E(r, theta) = 1 - 1 / sqrt(1 + cos(theta)^2 * sinh(2 r)^2)

evaluated here through log(1 - E) so that squeezing as large as r = 400
keeps a finite, meaningful result.
"""

import math
from dataclasses import dataclass

import numpy as np

from .phase_space import (
    apply_transform,
    epr_basis_change,
    purity,
    reduced_covariance,
    vb_rotation,
)

__all__ = [
    "R_MAX",
    "MATRIX_R_MAX",
    "TmssParams",
    "ImpurityValue",
    "tmss_covariance",
    "theta_tmss_covariance",
    "impurity_closed_form",
    "impurity_from_covariance",
    "transition_width",
]

R_MAX = 400.0
# covariance entries grow like e^{2r}/4 and their squares enter determinants,
# so the matrix representation is only trusted well inside the overflow range
MATRIX_R_MAX = 150.0
_LOG2 = math.log(2.0)


def _check_r(r: float, limit: float = R_MAX) -> None:
    if not np.isfinite(r) or r < 0.0:
        raise ValueError(f"r must be finite and nonnegative, got {r!r}")
    if r > limit:
        raise ValueError(f"r = {r!r} exceeds the supported range (max {limit})")


@dataclass(frozen=True)
class TmssParams:
    """Squeezing strength r >= 0 and family angle theta, in radians."""

    r: float
    theta: float

    def __post_init__(self):
        _check_r(self.r)
        if not np.isfinite(self.theta):
            raise ValueError(f"theta must be finite, got {self.theta!r}")


@dataclass(frozen=True)
class ImpurityValue:
    """Impurity E together with log(1 - E), which stays finite as E -> 1."""

    value: float
    log_one_minus: float


def tmss_covariance(r: float) -> np.ndarray:
    """Covariance of the two-mode squeezed state in (x1, p1, x2, p2) order.

    Lab-frame entries are Var x_i = Var p_i = cosh(2r)/4,
    Cov(x1, x2) = sinh(2r)/4 and Cov(p1, p2) = -sinh(2r)/4; the determinant is
    1/256 for every r because the state is pure.
    """
    _check_r(r, MATRIX_R_MAX)
    lo = math.exp(-2.0 * r) / 4.0
    hi = math.exp(2.0 * r) / 4.0
    epr_diag = np.diag([lo, hi, hi, lo])  # (xi, nu, eta, mu) variances
    e = epr_basis_change()
    out = e.T @ epr_diag @ e
    return 0.5 * (out + out.T)


def theta_tmss_covariance(params: TmssParams) -> np.ndarray:
    """Covariance of the family member at (r, theta).

    Equal to the base state conjugated by the (eta, mu) plane rotation:
    apply_transform(tmss_covariance(r), vb_rotation(theta)).
    """
    return apply_transform(tmss_covariance(params.r), vb_rotation(params.theta))


def _log_sinh(x: float) -> float:
    """log(sinh x) for x > 0 without overflow; -inf at x = 0."""
    return x + math.log1p(-math.exp(-2.0 * x)) - _LOG2


def impurity_closed_form(params: TmssParams) -> ImpurityValue:
    """Closed-form linear-entropy impurity 1 - tr(rho_reduced^2) of one mode.

    Computed as log(1 - E) = -log1p((cos(theta) sinh(2r))^2) / 2 with the
    squared product kept in log space. The two exact zeros of the family,
    r = 0 and cos(theta) = 0, come out as exactly 0, and extreme squeezing
    saturates E to 1 while log(1 - E) keeps the resolved magnitude.
    """
    c = math.cos(params.theta)
    if params.r == 0.0 or c == 0.0:
        return ImpurityValue(0.0, 0.0)
    g = math.log(abs(c)) + _log_sinh(2.0 * params.r)
    log_one_minus = -0.5 * float(np.logaddexp(0.0, 2.0 * g))
    return ImpurityValue(-math.expm1(log_one_minus), log_one_minus)


def impurity_from_covariance(params: TmssParams) -> float:
    """Impurity recomputed along the matrix path, with no shared algebra.

    Builds the covariance of the family member, keeps mode 0 and subtracts
    the Gaussian purity of that block. Usable while the matrix entries are
    representable (r well below MATRIX_R_MAX); agreement with the closed form
    is part of the verification suite.
    """
    sigma = theta_tmss_covariance(params)
    return 1.0 - purity(reduced_covariance(sigma, 0))


def transition_width(r: float, level: float = 0.5, tol: float = 1e-12) -> float:
    """Angular distance below theta = pi/2 at which the impurity regains `level`.

    Along theta in [0, pi/2] the impurity falls monotonically from its maximum
    to 0, so for any reachable level there is a single crossing theta*;
    returned is pi/2 - theta*. The crossing is bracketed by bisection on
    log(1 - E), which stays well conditioned at large r where the window
    shrinks like e^{-2r}.
    """
    _check_r(r)
    if r < 1.0:
        raise ValueError("transition width is defined for r >= 1")
    if not 0.0 < level < 1.0:
        raise ValueError(f"level must lie strictly inside (0, 1), got {level!r}")
    if impurity_closed_form(TmssParams(r, 0.0)).value <= level:
        raise ValueError(f"impurity never reaches level {level} at r = {r}")
    target = math.log1p(-level)
    lo, hi = 0.0, 0.5 * math.pi  # log(1-E) - target: negative at lo, positive at hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if impurity_closed_form(TmssParams(r, mid)).log_one_minus < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * math.pi - 0.5 * (lo + hi)
