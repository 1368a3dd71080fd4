"""Ordinary Kriging with an anisotropic Gaussian correlation.

Correlation between samples is ``exp(-sum_k eps_k (x_ik - x_jk)^2)``. The
mean and process variance are the generalized least-squares estimates

    mu = 1^T M^-1 f / 1^T M^-1 1,
    sigma^2 = (f - mu)^T M^-1 (f - mu) / p,

and ``eps`` is chosen by maximizing the concentrated log-likelihood
``-p/2 log(sigma^2) - 1/2 log|M|`` with restarted Nelder-Mead searches in
``log10(eps)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.linalg import lapack
from scipy.optimize import minimize
from scipy.spatial.distance import cdist

from hessframe.errors import IllConditionedError, InsufficientDataError
from hessframe.numerics import RCOND_THRESHOLD
from hessframe.sampling import make_rng
from hessframe.surrogate.base import Dataset, Surrogate, resolve_transform
from hessframe.transform import DomainTransform, diagonal_transform

NUGGETS = (0.0, 1e-10, 1e-8, 1e-6)
SIGMA2_FLOOR = 1e-300


def correlation(a, b, eps) -> np.ndarray:
    a = np.atleast_2d(a)
    b = np.atleast_2d(b)
    se = np.sqrt(np.asarray(eps, dtype=float))
    return np.exp(-cdist(a * se, b * se, "sqeuclidean"))


class _Factor(NamedTuple):
    chol: np.ndarray
    nugget: float
    mu: float
    sigma2: float
    alpha: np.ndarray  # M^-1 (f - mu)
    loglik: float


# above this many floats the per-axis distance stack is not cached
_STACK_FLOATS = 4_000_000


def _axis_sqdist(z: np.ndarray) -> np.ndarray | None:
    p, n = z.shape
    if p * p * n > _STACK_FLOATS:
        return None
    return (z.T[:, :, None] - z.T[:, None, :]) ** 2  # (n, p, p)


def _factorize(z: np.ndarray, f: np.ndarray, eps, stack: np.ndarray | None = None) -> _Factor | None:
    if stack is None:
        m = correlation(z, z, eps)
    else:
        m = np.exp(-np.tensordot(np.asarray(eps, dtype=float), stack, axes=1))
    p = len(f)
    rhs = np.column_stack([f, np.ones(p)])
    for nugget in NUGGETS:
        a = m
        if nugget:
            a = m.copy()
            a.flat[:: p + 1] += nugget
        c, info = lapack.dpotrf(a, lower=1, clean=1)
        if info != 0:
            continue
        diag = np.diag(c)
        if (diag.min() / diag.max()) ** 2 < RCOND_THRESHOLD:
            continue
        sol, info = lapack.dpotrs(c, rhs, lower=1)
        if info != 0:
            continue
        mi_f, mi_1 = sol[:, 0], sol[:, 1]
        mu = float(mi_f.sum() / mi_1.sum())
        alpha = mi_f - mu * mi_1
        sigma2 = max(float((f - mu) @ alpha) / p, SIGMA2_FLOOR)
        logdet = 2.0 * np.log(diag).sum()
        loglik = -0.5 * p * np.log(sigma2) - 0.5 * logdet
        return _Factor(c, nugget, mu, sigma2, alpha, float(loglik))
    return None


def log_likelihood(z, f, eps) -> float:
    """Concentrated log-likelihood; ``-inf`` when the correlation matrix is unusable."""
    fac = _factorize(np.atleast_2d(z), np.asarray(f, dtype=float), eps)
    return -np.inf if fac is None else fac.loglik


@dataclass(eq=False)
class KrigingSurrogate(Surrogate):
    centers: np.ndarray = field(default_factory=lambda: np.empty((0, 0)))
    shapes: np.ndarray = field(default_factory=lambda: np.empty(0))
    mean: float = 0.0
    variance: float = 0.0
    nugget: float = 0.0
    loglik: float = -np.inf

    kind = "kriging"

    def evaluate(self, z):
        return self.mean + correlation(z, self.centers, self.shapes) @ self.weights

    def hyperparameters(self):
        return {
            "shapes": self.shapes.tolist(),
            "mean": self.mean,
            "variance": self.variance,
            "nugget": self.nugget,
        }

    def _arrays(self):
        return {"centers": self.centers}


class TuneResult(NamedTuple):
    shapes: np.ndarray
    loglik: float
    starts: np.ndarray  # (restarts, dim) starting log10 shapes
    start_logliks: np.ndarray
    fallback: bool


def _initial_simplex(x0: np.ndarray, step: float, bounds: tuple) -> np.ndarray:
    lo, hi = bounds
    sim = np.tile(x0, (x0.size + 1, 1))
    for i in range(x0.size):
        sim[i + 1, i] += step if x0[i] + step <= hi else -step
    return np.clip(sim, lo, hi)


def tune_kriging(
    data: Dataset,
    transform=None,
    seed: int = 0,
    restarts: int = 5,
    maxiter: int = 100,
    log_bounds: tuple = (-3.0, 3.0),
    start_range: tuple = (-2.0, 2.0),
    simplex_step: float = 1.0,
) -> TuneResult:
    """Maximize the log-likelihood over ``log10(eps)``.

    ``restarts`` starting vectors are drawn log-uniformly in
    ``10**start_range`` from ``seed``; each Nelder-Mead run is capped at
    ``maxiter`` iterations and the best end point is returned. If no run
    improves on its start, isotropic ``eps = 1`` is returned instead.

    The initial simplex has edges of ``simplex_step`` decades along each
    axis; a small default simplex barely leaves the start in 100 iterations.
    """
    d, _ = resolve_transform(data, transform)
    p, n = d.points.shape
    if p < n + 2:
        raise InsufficientDataError(f"Kriging tuning needs at least {n + 2} points, got {p}")
    z, f = d.points, d.values
    rng = make_rng(seed)
    starts = rng.uniform(*start_range, size=(restarts, n))

    stack = _axis_sqdist(z)

    def objective(theta):
        fac = _factorize(z, f, 10.0**theta, stack)
        return 1e300 if fac is None else -fac.loglik

    best_theta, best_ll = None, -np.inf
    start_ll = np.empty(restarts)
    improved = False
    for k, x0 in enumerate(starts):
        start_ll[k] = -objective(x0)
        res = minimize(
            objective, x0, method="Nelder-Mead",
            bounds=[log_bounds] * n,
            options={
                "maxiter": maxiter, "xatol": 1e-4, "fatol": 1e-8,
                "initial_simplex": _initial_simplex(x0, simplex_step, log_bounds),
            },
        )
        ll = -float(res.fun)
        if ll > start_ll[k] and ll > -1e299:
            improved = True
        if ll > best_ll:
            best_theta, best_ll = res.x, ll
    if not improved or best_theta is None:
        ones = np.ones(n)
        return TuneResult(ones, log_likelihood(z, f, ones), starts, start_ll, True)
    return TuneResult(10.0**best_theta, best_ll, starts, start_ll, False)


def fit_kriging(data: Dataset, shapes=None, transform=None, seed: int = 0) -> KrigingSurrogate:
    """Fit ordinary Kriging; ``shapes=None`` tunes them by maximum likelihood."""
    d, t = resolve_transform(data, transform)
    if len(d) < 2:
        raise InsufficientDataError("Kriging needs at least two points")
    if shapes is None:
        shapes = tune_kriging(d, seed=seed).shapes
    shapes = np.broadcast_to(np.asarray(shapes, dtype=float), (d.dim,)).copy()
    fac = _factorize(d.points, d.values, shapes)
    if fac is None:
        raise IllConditionedError("Kriging correlation matrix is singular even with a nugget", 0.0)
    flags = ("nugget",) if fac.nugget > 0 else ()
    return KrigingSurrogate(
        fac.alpha, t, centers=d.points, shapes=shapes, mean=fac.mu, variance=fac.sigma2,
        nugget=fac.nugget, loglik=fac.loglik, flags=flags,
    )


def kriging_scale_transform(shapes) -> DomainTransform:
    """Axis scaling ``s_k = sqrt(eps_k)`` that turns the shapes into unit shapes."""
    shapes = np.asarray(shapes, dtype=float)
    if np.any(shapes <= 0):
        raise ValueError("Kriging shapes must be positive")
    return diagonal_transform(np.sqrt(shapes), "kriging-scale")
