"""Brute-force phase-space integration used to cross-check closed forms.

Everything here treats a Gaussian state as nothing but its Wigner function
sampled on a finite midpoint grid. Tracing out the second mode becomes a
plain Riemann sum over the (x2, p2) axes, purity becomes pi times the sum of
the squared marginal, and second moments become weighted sums. None of it
reuses the covariance algebra from the rest of the package beyond reading
grid extents off the diagonal, which is what makes the agreement tests
meaningful.

The four-fold sums are organized around the factorization of the Gaussian
exponent into per-axis and pairwise terms, streamed one x1 row at a time.
Strong squeezing can push individual pairwise factors past the double
range even though every summand is finite; rows that come back non-finite
are recomputed along a slower path that exponentiates whole row tensors at
once and tolerates exponents up to the full double range.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

__all__ = [
    "GridResolutionError",
    "WignerGaussian",
    "wigner_eval",
    "QuadratureGrid",
    "mode_marginal",
    "quadrature_impurity",
    "grid_second_moments",
    "moment_errors",
]

_MIN_POINTS = 32
_MIN_SIGMAS = 6.0
_SECOND_MOMENT_POWERS = ((0, 0), (1, 0), (0, 1), (2, 0), (0, 2), (1, 1))


class GridResolutionError(RuntimeError):
    """The grid cannot represent the state well enough for the request."""


class WignerGaussian:
    """Wigner function of a centered Gaussian state, exp(-z.A.z/2)/((2pi)^n sqrt(det))."""

    def __init__(self, sigma):
        sigma = np.asarray(sigma, dtype=float)
        if sigma.ndim != 2 or sigma.shape[0] != sigma.shape[1] or sigma.shape[0] % 2:
            raise ValueError("covariance must be square with even dimension")
        try:
            np.linalg.cholesky(0.5 * (sigma + sigma.T))
        except np.linalg.LinAlgError:
            raise ValueError("covariance must be positive definite") from None
        det = float(np.linalg.det(sigma))
        self.sigma = sigma
        self.n_modes = sigma.shape[0] // 2
        self._inverse = np.linalg.inv(sigma)
        self._prefactor = 1.0 / ((2.0 * math.pi) ** self.n_modes * math.sqrt(det))

    def __call__(self, z):
        """Evaluate at phase-space points z, shape (..., 2 n_modes)."""
        z = np.asarray(z, dtype=float)
        if z.shape[-1] != 2 * self.n_modes:
            raise ValueError(
                f"points must have last dimension {2 * self.n_modes}, got {z.shape[-1]}"
            )
        quad = np.einsum("...i,ij,...j->...", z, self._inverse, z)
        return self._prefactor * np.exp(-0.5 * quad)


def wigner_eval(sigma, z):
    """One-shot Wigner evaluation; see WignerGaussian for the batched form."""
    return WignerGaussian(sigma)(z)


@dataclass(frozen=True)
class QuadratureGrid:
    """Midpoint grids for the four quadrature axes (x1, p1, x2, p2).

    Axis a covers [-H_a, H_a] with H_a a fixed multiple of the standard
    deviation read off the covariance diagonal, so the truncated Gaussian
    tails stay below any tolerance this module is asked to certify.
    """

    points: tuple
    spacings: tuple

    @classmethod
    def from_covariance(cls, sigma, points_per_axis=160, half_extent_sigmas=8.0):
        sigma = np.asarray(sigma, dtype=float)
        if sigma.shape != (4, 4):
            raise ValueError("grids are built for two-mode covariances (4 x 4)")
        if points_per_axis < _MIN_POINTS:
            raise ValueError(f"points_per_axis must be at least {_MIN_POINTS}")
        if half_extent_sigmas < _MIN_SIGMAS:
            raise ValueError(f"half_extent_sigmas must be at least {_MIN_SIGMAS}")
        points = []
        spacings = []
        for axis in range(4):
            variance = float(sigma[axis, axis])
            if variance <= 0.0:
                raise ValueError("covariance diagonal must be positive")
            half = half_extent_sigmas * math.sqrt(variance)
            step = 2.0 * half / points_per_axis
            points.append(-half + (np.arange(points_per_axis) + 0.5) * step)
            spacings.append(step)
        return cls(tuple(points), tuple(spacings))

    @property
    def points_per_axis(self):
        return self.points[0].size


def _run_rows(worker, n_rows, threads):
    # disjoint row ranges, so concurrent writes never touch the same cells
    if threads <= 1:
        worker(0, n_rows)
        return
    chunk = -(-n_rows // threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [
            pool.submit(worker, lo, min(lo + chunk, n_rows))
            for lo in range(0, n_rows, chunk)
        ]
        for future in futures:
            future.result()


def _marginals(sigma, grid, powers, threads=1):
    """Weighted partial traces M_ab(x1, p1) = sum x2^a p2^b W h2 h3.

    Returns {(a, b): map} for each requested pair of inner-axis powers. The
    maps carry the inner cell area, so summing one against h0 h1 integrates
    the corresponding observable over the whole grid.
    """
    sigma = np.asarray(sigma, dtype=float)
    det = float(np.linalg.det(sigma))
    if det <= 0.0:
        raise ValueError("covariance must have positive determinant")
    powers = [(int(a), int(b)) for a, b in powers]
    for a, b in powers:
        if a < 0 or b < 0:
            raise ValueError("moment powers must be nonnegative")
    a_mat = np.linalg.inv(sigma)
    g = grid.points
    n = g[0].size
    q = [np.exp(-0.5 * a_mat[i, i] * g[i] ** 2) for i in range(4)]
    prefactor = 0.25 / (math.pi**2 * math.sqrt(det))
    inner_area = grid.spacings[2] * grid.spacings[3]
    out = {key: np.empty((n, n)) for key in powers}
    a_powers = sorted({a for a, _ in powers})
    b_powers = sorted({b for _, b in powers})

    with np.errstate(over="ignore", under="ignore"):
        f01 = np.exp(-a_mat[0, 1] * np.outer(g[0], g[1]))
        f02 = np.exp(-a_mat[0, 2] * np.outer(g[0], g[2]))
        f03 = np.exp(-a_mat[0, 3] * np.outer(g[0], g[3]))
        f12 = np.exp(-a_mat[1, 2] * np.outer(g[1], g[2]))
        f13 = np.exp(-a_mat[1, 3] * np.outer(g[1], g[3]))
        f23 = np.exp(-a_mat[2, 3] * np.outer(g[2], g[3]))

    def factored_rows(lo, hi):
        w2 = {a: q[2] * g[2] ** a for a in a_powers}
        w3 = {b: q[3] * g[3] ** b for b in b_powers}
        with np.errstate(over="ignore", invalid="ignore", under="ignore"):
            for i in range(lo, hi):
                base = (q[0][i] * q[1]) * f01[i]
                row2 = f02[i]
                row3 = f03[i]
                for b in b_powers:
                    gmat = (f13 * (row3 * w3[b])) @ f23.T
                    for a in a_powers:
                        if (a, b) not in out:
                            continue
                        out[a, b][i] = base * np.einsum(
                            "k,jk,jk->j", row2 * w2[a], f12, gmat
                        )

    _run_rows(factored_rows, n, threads)
    if all(np.isfinite(m).all() for m in out.values()):
        for m in out.values():
            m *= prefactor * inner_area
        return out

    # pairwise factors overflowed; redo rows with the whole exponent assembled
    # before a single exp, with the axis-0 Gaussian factor applied afterwards
    diag1 = -0.5 * a_mat[1, 1] * g[1] ** 2
    diag2 = -0.5 * a_mat[2, 2] * g[2] ** 2
    diag3 = -0.5 * a_mat[3, 3] * g[3] ** 2
    p12 = a_mat[1, 2] * np.outer(g[1], g[2])
    p13 = a_mat[1, 3] * np.outer(g[1], g[3])
    p23 = a_mat[2, 3] * np.outer(g[2], g[3])

    def direct_rows(lo, hi):
        w2 = {a: g[2] ** a for a in a_powers}
        w3 = {b: g[3] ** b for b in b_powers}
        with np.errstate(over="ignore", invalid="ignore", under="ignore"):
            for i in range(lo, hi):
                expo = (
                    (diag1 - a_mat[0, 1] * g[0][i] * g[1])[:, None, None]
                    + (diag2 - a_mat[0, 2] * g[0][i] * g[2])[None, :, None]
                    + (diag3 - a_mat[0, 3] * g[0][i] * g[3])[None, None, :]
                )
                expo -= p12[:, :, None]
                expo -= p13[:, None, :]
                expo -= p23[None, :, :]
                np.exp(expo, out=expo)
                flat = expo.reshape(n * n, n)
                for b in b_powers:
                    partial = (flat @ w3[b]).reshape(n, n)
                    for a in a_powers:
                        if (a, b) not in out:
                            continue
                        out[a, b][i] = q[0][i] * (partial @ w2[a])

    _run_rows(direct_rows, n, threads)
    if not all(np.isfinite(m).all() for m in out.values()):
        raise GridResolutionError(
            "marginal sums overflow double precision at this squeezing and grid"
        )
    for m in out.values():
        m *= prefactor * inner_area
    return out


def mode_marginal(sigma, grid, threads=1):
    """Wigner function of mode 0 alone, sampled on the (x1, p1) grid.

    Integrates the two-mode Wigner function over the (x2, p2) axes by
    midpoint sums; the result already carries the inner cell area.
    """
    return _marginals(sigma, grid, [(0, 0)], threads=threads)[0, 0]


def quadrature_impurity(sigma, grid=None, *, purity_prefactor=math.pi,
                        norm_tol=1e-6, threads=1):
    """Impurity of mode 0 as 1 - pi * integral of the squared marginal.

    For a single mode in this convention (vacuum variance 1/4) the trace of
    rho^2 equals pi times the phase-space integral of the squared Wigner
    function; `purity_prefactor` exists so tests can demonstrate that any
    other constant fails the normalization cross-check against exact states.

    The marginal is first integrated to confirm the grid resolves the state:
    a total mass off from 1 by more than `norm_tol` raises
    GridResolutionError instead of returning a silently biased number.
    """
    if grid is None:
        grid = QuadratureGrid.from_covariance(sigma)
    marginal = mode_marginal(sigma, grid, threads=threads)
    outer_area = grid.spacings[0] * grid.spacings[1]
    norm = float(marginal.sum()) * outer_area
    if abs(norm - 1.0) > norm_tol:
        raise GridResolutionError(
            f"marginal mass {norm!r} deviates from 1 by more than {norm_tol}"
        )
    return 1.0 - purity_prefactor * float((marginal * marginal).sum()) * outer_area


def grid_second_moments(sigma, grid, threads=1):
    """All sixteen second moments of the sampled state, as a 4 x 4 matrix.

    Inner-axis powers ride along the partial-trace sweep; outer-axis powers
    weight the resulting maps. Moments are normalized by the measured mass so
    the comparison against the covariance isolates moment error from the
    (separately checked) normalization error.
    """
    maps = _marginals(sigma, grid, _SECOND_MOMENT_POWERS, threads=threads)
    outer_area = grid.spacings[0] * grid.spacings[1]
    g0 = grid.points[0][:, None]
    g1 = grid.points[1][None, :]
    m00 = maps[0, 0]
    norm = float(m00.sum()) * outer_area
    s = np.empty((4, 4))
    s[0, 0] = (g0 * g0 * m00).sum()
    s[1, 1] = (g1 * g1 * m00).sum()
    s[0, 1] = (g0 * g1 * m00).sum()
    s[2, 2] = maps[2, 0].sum()
    s[3, 3] = maps[0, 2].sum()
    s[2, 3] = maps[1, 1].sum()
    s[0, 2] = (g0 * maps[1, 0]).sum()
    s[1, 2] = (g1 * maps[1, 0]).sum()
    s[0, 3] = (g0 * maps[0, 1]).sum()
    s[1, 3] = (g1 * maps[0, 1]).sum()
    for i in range(4):
        for j in range(i):
            s[i, j] = s[j, i]
    return s * (outer_area / norm)


def moment_errors(sigma, grid, *, zero_cutoff=1e-12, threads=1):
    """Entry-wise deviation of the grid moments from the covariance.

    Relative error where the target entry is nonzero (above `zero_cutoff` in
    magnitude), absolute error where it vanishes.
    """
    sigma = np.asarray(sigma, dtype=float)
    estimate = grid_second_moments(sigma, grid, threads=threads)
    errors = np.abs(estimate - sigma)
    scale = np.abs(sigma)
    nonzero = scale > zero_cutoff
    errors[nonzero] /= scale[nonzero]
    return errors
