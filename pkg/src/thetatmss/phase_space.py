"""Gaussian states on quadrature phase space, represented by covariance matrices.

Quadratures are ordered (x1, p1, x2, p2, ...) and every vacuum quadrature has
variance 1/4, so a pure n-mode Gaussian state satisfies det(sigma) = 16**(-n).
Symplectic transforms act on covariance matrices by congruence, and reduced
states are plain diagonal blocks.
"""

import numpy as np

VACUUM_VARIANCE = 0.25

__all__ = [
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
]


def symplectic_form(n_modes: int) -> np.ndarray:
    """Antisymmetric form Omega, one [[0, 1], [-1, 0]] block per mode."""
    if n_modes < 1:
        raise ValueError("need at least one mode")
    block = np.array([[0.0, 1.0], [-1.0, 0.0]])
    return np.kron(np.eye(n_modes), block)


def vacuum_covariance(n_modes: int) -> np.ndarray:
    return VACUUM_VARIANCE * np.eye(2 * n_modes)


def _as_even_square(mat, name: str) -> np.ndarray:
    mat = np.asarray(mat, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] % 2:
        raise ValueError(f"{name} must be square with even dimension, got shape {mat.shape}")
    return mat


def validate_covariance(sigma, tol: float = 1e-9) -> np.ndarray:
    """Return sigma as a float array after checking it is an admissible state.

    Admissible means symmetric (to 1e-12 relative to the largest entry) with
    every symplectic eigenvalue at least the vacuum variance 1/4, up to tol.
    """
    sigma = _as_even_square(sigma, "sigma")
    scale = max(1.0, float(np.abs(sigma).max()))
    if np.abs(sigma - sigma.T).max() > 1e-12 * scale:
        raise ValueError("covariance matrix must be symmetric")
    nu_min = float(symplectic_eigenvalues(sigma).min())
    if nu_min < VACUUM_VARIANCE - tol:
        raise ValueError(
            f"uncertainty bound violated: smallest symplectic eigenvalue {nu_min:.6e} < 1/4"
        )
    return sigma


def is_symplectic(S, tol: float = 1e-10) -> bool:
    """Whether S preserves the symplectic form: S Omega S^T = Omega."""
    S = _as_even_square(S, "S")
    omega = symplectic_form(S.shape[0] // 2)
    return bool(np.abs(S @ omega @ S.T - omega).max() <= tol)


def mode_rotation(theta: float, mode: int, n_modes: int) -> np.ndarray:
    """Rotation of one mode's (x, p) plane.

    The rotated position row is (cos theta, sin theta), so it measures the
    quadrature cos(theta) x + sin(theta) p; theta = pi/2 turns x into p.
    """
    if not 0 <= mode < n_modes:
        raise ValueError(f"mode {mode} out of range for {n_modes} modes")
    c, s = np.cos(theta), np.sin(theta)
    S = np.eye(2 * n_modes)
    i = 2 * mode
    S[i, i] = c
    S[i, i + 1] = s
    S[i + 1, i] = -s
    S[i + 1, i + 1] = c
    return S


def epr_basis_change() -> np.ndarray:
    """Orthogonal symplectic map from (x1, p1, x2, p2) to the EPR quadratures.

    Rows are xi = (x1 - x2)/sqrt2, nu = (p1 - p2)/sqrt2, eta = (x1 + x2)/sqrt2
    and mu = (p1 + p2)/sqrt2, so (xi, nu) and (eta, mu) are conjugate pairs and
    the symplectic form keeps its block-diagonal shape.
    """
    h = 1.0 / np.sqrt(2.0)
    return np.array(
        [
            [h, 0.0, -h, 0.0],
            [0.0, h, 0.0, -h],
            [h, 0.0, h, 0.0],
            [0.0, h, 0.0, h],
        ]
    )


def vb_rotation(theta: float) -> np.ndarray:
    """Rotation by theta of the (eta, mu) EPR plane, expressed in lab quadratures.

    Acts as eta -> cos(theta) eta + sin(theta) mu and
    mu -> cos(theta) mu - sin(theta) eta while xi and nu are untouched; at
    theta = pi/2 it exchanges eta and mu (with one sign flip).
    """
    c, s = np.cos(theta), np.sin(theta)
    rot = np.eye(4)
    rot[2, 2] = c
    rot[2, 3] = s
    rot[3, 2] = -s
    rot[3, 3] = c
    e = epr_basis_change()
    return e.T @ rot @ e


def apply_transform(sigma, S, tol: float = 1e-10) -> np.ndarray:
    """Congruence sigma -> S sigma S^T; S must be symplectic."""
    sigma = _as_even_square(sigma, "sigma")
    S = _as_even_square(S, "S")
    if S.shape != sigma.shape:
        raise ValueError(f"shape mismatch: sigma {sigma.shape} vs S {S.shape}")
    if not is_symplectic(S, tol):
        raise ValueError("S is not symplectic")
    out = S @ sigma @ S.T
    return 0.5 * (out + out.T)  # kill roundoff asymmetry


def reduced_covariance(sigma, mode: int) -> np.ndarray:
    """Covariance of one kept mode, the Gaussian analogue of the partial trace."""
    sigma = _as_even_square(sigma, "sigma")
    n = sigma.shape[0] // 2
    if not 0 <= mode < n:
        raise ValueError(f"mode {mode} out of range for {n} modes")
    i = 2 * mode
    return sigma[i : i + 2, i : i + 2].copy()


def purity(sigma) -> float:
    """tr(rho^2) of the Gaussian state, which is (1/4)^n / sqrt(det sigma)."""
    sigma = _as_even_square(sigma, "sigma")
    n = sigma.shape[0] // 2
    det = float(np.linalg.det(sigma))
    if det <= 0.0:
        raise ValueError("covariance matrix must have positive determinant")
    return VACUUM_VARIANCE**n / np.sqrt(det)


def symplectic_eigenvalues(sigma) -> np.ndarray:
    """Moduli of the eigenvalues of i Omega sigma, one per mode, ascending.

    For an admissible state they are bounded below by the vacuum variance 1/4,
    with equality on every mode exactly for pure states.
    """
    sigma = _as_even_square(sigma, "sigma")
    n = sigma.shape[0] // 2
    ev = np.linalg.eigvals(symplectic_form(n) @ sigma)
    return np.sort(np.abs(ev))[0::2][:n].copy()  # eigenvalues come in +-i nu pairs
