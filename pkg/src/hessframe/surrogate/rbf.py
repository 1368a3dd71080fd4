"""Gaussian radial basis function surrogates.

Centers sit on the sample points, so the function-value model is a square
interpolation system. The gradient-enhanced model keeps exactly the same
centers and regresses on the stacked ``(p + p*n) x p`` system of values and
gradients, which keeps both models at equal flexibility.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.spatial.distance import cdist

from hessframe.errors import IllConditionedError, InsufficientDataError
from hessframe.numerics import RCOND_THRESHOLD, solve_least_squares, solve_linear
from hessframe.surrogate.base import Dataset, Surrogate, resolve_transform

DEFAULT_GRID = tuple(np.logspace(-2.0, 2.0, 41))


def gaussian(z, centers, eps: float) -> np.ndarray:
    """Basis matrix ``exp(-eps * |z_i - c_j|^2)``."""
    return np.exp(-eps * cdist(np.atleast_2d(z), np.atleast_2d(centers), "sqeuclidean"))


def gaussian_gradient(z, centers, eps: float, phi: np.ndarray | None = None) -> np.ndarray:
    """``d phi_j / d z`` at every ``z_i``; shape ``(p, n, K)``."""
    z = np.atleast_2d(z)
    c = np.atleast_2d(centers)
    if phi is None:
        phi = gaussian(z, c, eps)
    diff = z[:, :, None] - c.T[None, :, :]  # (p, n, K)
    return -2.0 * eps * phi[:, None, :] * diff


def gaussian_hessian(z, center, eps: float) -> np.ndarray:
    """Analytic Hessian of one Gaussian basis function at a single point."""
    z = np.asarray(z, dtype=float)
    d = z - np.asarray(center, dtype=float)
    phi = np.exp(-eps * d @ d)
    return phi * (4.0 * eps**2 * np.outer(d, d) - 2.0 * eps * np.eye(d.size))


@dataclass(frozen=True)
class RbfConfig:
    """Shape parameter choice.

    ``shape="auto"`` selects from ``grid`` by Rippa's closed-form
    leave-one-out estimate, aggregated with ``aggregate`` (one of
    ``"abs"``, ``"squared"``, ``"signed"``).
    """

    shape: float | str = "auto"
    grid: tuple = DEFAULT_GRID
    aggregate: str = "abs"

    def __post_init__(self):
        if self.shape != "auto" and not (isinstance(self.shape, (int, float)) and self.shape > 0):
            raise ValueError("shape must be a positive number or 'auto'")
        if self.shape == "auto" and len(self.grid) == 0:
            raise ValueError("an automatic shape needs a non-empty candidate grid")
        if any(e <= 0 for e in self.grid):
            raise ValueError("candidate shapes must be positive")
        if self.aggregate not in _AGGREGATES:
            raise ValueError(f"aggregate must be one of {sorted(_AGGREGATES)}")


_AGGREGATES = {
    "signed": lambda e: float(np.mean(e)),
    "abs": lambda e: float(np.mean(np.abs(e))),
    "squared": lambda e: float(np.mean(e**2)),
}


@dataclass(eq=False)
class RbfSurrogate(Surrogate):
    centers: np.ndarray = field(default_factory=lambda: np.empty((0, 0)))
    shape: float = 1.0
    gradient_enhanced: bool = False
    loocv_errors: np.ndarray | None = None

    kind = "rbf"

    def evaluate(self, z):
        return gaussian(z, self.centers, self.shape) @ self.weights

    def hyperparameters(self):
        return {"shape": self.shape, "gradient_enhanced": self.gradient_enhanced}

    def _arrays(self):
        return {"centers": self.centers}


def _loo_from_cholesky(m: np.ndarray, f: np.ndarray) -> np.ndarray:
    # M^-1 = L^-T L^-1; more accurate near the singularity cut-off than eigh
    li = np.linalg.inv(np.linalg.cholesky(m))
    w = np.einsum("...ji,...j->...i", li, li @ f)
    return w / np.sum(li**2, axis=-2)


def _loo(m: np.ndarray, f: np.ndarray) -> np.ndarray:
    """Residuals for a stack of basis matrices; rows that are not numerically
    positive definite come back as nan."""
    try:
        return _loo_from_cholesky(m, f)
    except np.linalg.LinAlgError:
        out = np.full(m.shape[:-1], np.nan)
        for k in range(m.shape[0]):
            try:
                out[k] = _loo_from_cholesky(m[k], f)
            except np.linalg.LinAlgError:
                pass
        return out


def _rcond(vals: np.ndarray) -> np.ndarray:
    a = np.abs(vals)
    return a.min(axis=-1) / a.max(axis=-1)


def rippa_residuals(z, f, eps: float) -> np.ndarray:
    """Leave-one-out residuals ``f_i - s_(-i)(z_i) = W_i / (M^-1)_ii`` from one fit.

    Raises
    ------
    IllConditionedError
        If the basis matrix is singular to working precision for ``eps``.
    """
    m = gaussian(z, z, eps)
    rc = float(_rcond(np.linalg.eigvalsh(m)))
    res = _loo(m[None], np.asarray(f, dtype=float))[0] if rc >= RCOND_THRESHOLD else None
    if res is None or np.any(np.isnan(res)):
        raise IllConditionedError(f"RBF matrix singular for eps={eps:g}", rc)
    return res


class LoocvResult(NamedTuple):
    shape: float
    grid: np.ndarray
    errors: np.ndarray  # nan where the candidate was singular


# cap on floats held by one batch of stacked basis matrices
_BATCH_FLOATS = 2_000_000


def rippa_loocv(data: Dataset, grid=DEFAULT_GRID, aggregate: str = "abs", transform=None) -> LoocvResult:
    """Pick the Gaussian shape with the smallest closed-form leave-one-out error.

    Per candidate the error is the mean of the per-point residuals
    ``W_i / (M^-1)_ii`` under ``aggregate``; ``"signed"`` is the plain mean.
    Singular candidates are excluded; ties go to the smallest shape.
    """
    if aggregate not in _AGGREGATES:
        raise ValueError(f"aggregate must be one of {sorted(_AGGREGATES)}")
    d, _ = resolve_transform(data, transform)
    grid = np.sort(np.asarray(grid, dtype=float))
    if grid.size == 0:
        raise ValueError("empty candidate grid")
    agg = _AGGREGATES[aggregate]
    d2 = cdist(d.points, d.points, "sqeuclidean")
    f = d.values
    errors = np.full(grid.size, np.nan)
    step = max(1, _BATCH_FLOATS // d2.size)
    for lo in range(0, grid.size, step):
        eps = grid[lo:lo + step]
        m = np.exp(-eps[:, None, None] * d2)
        ok = _rcond(np.linalg.eigvalsh(m)) >= RCOND_THRESHOLD
        if not np.any(ok):
            continue
        res = _loo(m[ok], f)
        errors[lo + np.flatnonzero(ok)] = [np.nan if np.isnan(r).any() else agg(r) for r in res]
    if np.all(np.isnan(errors)):
        raise IllConditionedError("every candidate shape gives a singular RBF matrix", 0.0)
    return LoocvResult(float(grid[np.nanargmin(errors)]), grid, errors)


def _ridge_solve(m: np.ndarray, f: np.ndarray) -> np.ndarray:
    lam = 1e-10 * np.trace(m) / m.shape[0]
    return np.linalg.solve(m + lam * np.eye(m.shape[0]), f)


def fit_rbf(data: Dataset, config: RbfConfig | None = None, gradient_enhanced: bool = False, transform=None) -> RbfSurrogate:
    """Gaussian RBF surrogate with centers on the samples.

    With ``config.shape == "auto"`` the shape comes from Rippa LOOCV on the
    function values, for both the plain and the gradient-enhanced model.
    """
    config = config or RbfConfig()
    d, t = resolve_transform(data, transform)
    if len(d) < 1:
        raise InsufficientDataError("RBF fit needs at least one point")
    if gradient_enhanced and not d.has_gradients:
        raise InsufficientDataError("gradient-enhanced fit needs gradients")

    loo = None
    if config.shape == "auto":
        loo = rippa_loocv(d, config.grid, config.aggregate)
        eps = loo.shape
    else:
        eps = float(config.shape)

    z = d.points
    phi = gaussian(z, z, eps)
    flags: tuple = ()
    if gradient_enhanced:
        dphi = gaussian_gradient(z, z, eps, phi)
        a = np.vstack([phi, dphi.reshape(-1, phi.shape[1])])
        b = np.concatenate([d.values, d.gradients.ravel()])
        sol = solve_least_squares(a, b)
        w = sol.x
        if sol.rank_deficient:
            flags = ("rank-deficient",)
    else:
        try:
            w = solve_linear(phi, d.values)
        except IllConditionedError:
            w = _ridge_solve(phi, d.values)
            flags = ("ridge",)
    return RbfSurrogate(
        w, t, centers=z, shape=eps, gradient_enhanced=gradient_enhanced,
        loocv_errors=None if loo is None else loo.errors, flags=flags,
    )
