"""Curvature-based domain transformation.

Local Hessians are estimated at every sample (SR1 chains when gradients are
available, interpolating quadratic fits otherwise), rectified to their
absolute-eigenvalue form, averaged, and the average is eigendecomposed into
a global rotation ``V`` and per-direction scales ``s = sqrt(lambda)``.

The resulting map is ``x_hat = diag(s) V^T (x - shift)``. ``shift`` is zero
for curvature transforms and only used to place min-max scaled data on the
unit cube.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from hessframe.errors import DimensionMismatchError, IllConditionedError, InsufficientDataError
from hessframe.numerics import solve_linear, sym_eig

logger = logging.getLogger(__name__)

PROVENANCES = ("gradient-sr1", "function-quadratic", "kriging-scale", "minmax", "ideal", "identity")

#: SR1 update is skipped when |r.s| <= SR1_SKIP * |r| |s|
SR1_SKIP = 1e-8
#: eigenvalues below EIG_FLOOR * max(lambda) are clamped before the square root
EIG_FLOOR = 1e-8


@dataclass(frozen=True, eq=False)
class DomainTransform:
    """Affine map ``x_hat = diag(scales) rotation^T (x - shift)``.

    Columns of ``rotation`` are the principal directions; ``scales`` are
    strictly positive.
    """

    rotation: np.ndarray
    scales: np.ndarray
    provenance: str = "identity"
    shift: np.ndarray | None = None
    flags: tuple = ()

    def __post_init__(self):
        v = np.asarray(self.rotation, dtype=float)
        s = np.asarray(self.scales, dtype=float)
        n = s.size
        if v.shape != (n, n):
            raise DimensionMismatchError(f"rotation shape {v.shape} does not match {n} scales")
        if not np.all(np.isfinite(s)) or np.any(s <= 0):
            raise ValueError("scales must be finite and positive")
        if np.max(np.abs(v.T @ v - np.eye(n))) > 1e-8:
            raise ValueError("rotation is not orthogonal")
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")
        shift = np.zeros(n) if self.shift is None else np.asarray(self.shift, dtype=float)
        if shift.shape != (n,):
            raise DimensionMismatchError("shift does not match dimension")
        object.__setattr__(self, "rotation", v)
        object.__setattr__(self, "scales", s)
        object.__setattr__(self, "shift", shift)
        object.__setattr__(self, "flags", tuple(self.flags))

    @property
    def dim(self) -> int:
        return self.scales.size

    @property
    def matrix(self) -> np.ndarray:
        """Linear part ``diag(s) V^T``."""
        return self.scales[:, None] * self.rotation.T

    def forward(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return ((x - self.shift) @ self.rotation) * self.scales

    def inverse(self, xh) -> np.ndarray:
        xh = np.asarray(xh, dtype=float)
        return (xh / self.scales) @ self.rotation.T + self.shift

    def transform_gradient(self, g) -> np.ndarray:
        """Gradient with respect to ``x_hat`` given the gradient w.r.t. ``x``.

        Column form ``diag(1/s) V^T g``; equivalently the row form
        ``g . S^-1 R^T`` with ``R = V^T`` being the frame rotation.
        Works on a single vector or on rows of a batch.
        """
        g = np.asarray(g, dtype=float)
        return (g @ self.rotation) / self.scales

    def pullback_hessian(self, h) -> np.ndarray:
        """Hessian of ``f o inverse`` given the Hessian ``h`` of ``f``."""
        w = self.rotation / self.scales  # V diag(1/s)
        return w.T @ np.asarray(h, dtype=float) @ w

    def then(self, outer: "DomainTransform", provenance: str | None = None) -> "DomainTransform":
        """Composition ``outer.forward(self.forward(x))``.

        ``outer`` must be a pure axis scaling (identity rotation, no shift).
        """
        if not np.array_equal(outer.rotation, np.eye(self.dim)) or np.any(outer.shift != 0):
            raise ValueError("only pure axis scalings can be composed on the outside")
        return DomainTransform(
            self.rotation,
            self.scales * outer.scales,
            provenance or outer.provenance,
            self.shift,
            self.flags + outer.flags,
        )

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "rotation": self.rotation.ravel().tolist(),
            "scales": self.scales.tolist(),
            "shift": self.shift.tolist(),
            "provenance": self.provenance,
            "flags": list(self.flags),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DomainTransform":
        n = int(d["dim"])
        return cls(
            np.asarray(d["rotation"], dtype=float).reshape(n, n),
            np.asarray(d["scales"], dtype=float),
            d["provenance"],
            np.asarray(d.get("shift", np.zeros(n)), dtype=float),
            tuple(d.get("flags", ())),
        )


def identity_transform(dim: int) -> DomainTransform:
    return DomainTransform(np.eye(dim), np.ones(dim), "identity")


def minmax_transform(points) -> DomainTransform:
    """Per-dimension affine map of the points' bounding box onto ``[0, 1]``."""
    x = np.atleast_2d(np.asarray(points, dtype=float))
    lo, hi = x.min(axis=0), x.max(axis=0)
    span = hi - lo
    if np.any(span <= 0):
        raise InsufficientDataError("min-max scaling needs a non-zero extent in every dimension")
    n = x.shape[1]
    return DomainTransform(np.eye(n), 1.0 / span, "minmax", lo)


def diagonal_transform(scales, provenance: str) -> DomainTransform:
    s = np.asarray(scales, dtype=float)
    return DomainTransform(np.eye(s.size), s, provenance)


# -- local Hessian estimation -------------------------------------------------


@dataclass(frozen=True, eq=False)
class LocalHessianEstimate:
    center: np.ndarray
    hessian: np.ndarray
    method: str
    support: tuple
    degenerate: bool = False
    regularized: bool = False


def _neighbour_order(points: np.ndarray, center_index: int, metric_scale: np.ndarray | None) -> np.ndarray:
    """Indices sorted by distance to the center, ties broken by index."""
    diff = points - points[center_index]
    if metric_scale is not None:
        diff = diff * metric_scale
    d2 = np.einsum("ij,ij->i", diff, diff)
    return np.lexsort((np.arange(len(d2)), d2))


def _minmax_metric(points: np.ndarray) -> np.ndarray:
    span = points.max(axis=0) - points.min(axis=0)
    span[span <= 0] = 1.0
    return 1.0 / span


def sr1_hessian(
    center_index: int,
    points,
    gradients,
    metric_scale: np.ndarray | None = None,
) -> LocalHessianEstimate:
    """Local Hessian from SR1 updates over the ``N`` nearest neighbours.

    Starting from the identity, one symmetric rank-one update is applied per
    neighbour, neighbours ordered from the furthest to the closest. Each step
    goes from the neighbour to the center, ``dx = x_c - x_k`` and
    ``y = g_c - g_k``.

    ``metric_scale`` rescales coordinates for neighbour selection only
    (defaults to min-max scaling of ``points``).
    """
    x = np.asarray(points, dtype=float)
    g = np.asarray(gradients, dtype=float)
    p, n = x.shape
    if g.shape != x.shape:
        raise DimensionMismatchError("gradients must have the same shape as points")
    if p < n + 1:
        raise InsufficientDataError(f"SR1 estimate needs {n + 1} points in {n}D, got {p}")
    if metric_scale is None:
        metric_scale = _minmax_metric(x)
    order = _neighbour_order(x, center_index, metric_scale)
    nbrs = [k for k in order if k != center_index][:n]

    h = np.eye(n)
    applied = 0
    for k in reversed(nbrs):  # furthest first
        dx = x[center_index] - x[k]
        y = g[center_index] - g[k]
        r = y - h @ dx
        denom = r @ dx
        if abs(denom) <= SR1_SKIP * np.linalg.norm(r) * np.linalg.norm(dx):
            continue
        h = h + np.outer(r, r) / denom
        applied += 1
    h = 0.5 * (h + h.T)
    return LocalHessianEstimate(
        x[center_index].copy(), h, "gradient-sr1", (center_index, *nbrs), degenerate=applied == 0
    )


def quadratic_terms(n: int) -> int:
    """Unknowns of a full quadratic in ``n`` variables: ``1 + 2n + n(n-1)/2``."""
    return 1 + 2 * n + n * (n - 1) // 2


def _quadratic_design(z: np.ndarray) -> np.ndarray:
    p, n = z.shape
    iu, ju = np.triu_indices(n)
    return np.hstack([np.ones((p, 1)), z, z[:, iu] * z[:, ju]])


def quadfit_hessian(
    center_index: int,
    points,
    values,
    metric_scale: np.ndarray | None = None,
) -> LocalHessianEstimate:
    """Local Hessian of an interpolating quadratic through the nearest cluster.

    The cluster holds the center and its closest neighbours, exactly as many
    points as a full quadratic has coefficients. If the cluster is degenerate
    (e.g. co-planar) a ridge-regularized fit is used and the estimate is
    flagged ``regularized``.
    """
    x = np.asarray(points, dtype=float)
    f = np.asarray(values, dtype=float).ravel()
    p, n = x.shape
    m = quadratic_terms(n)
    if f.size != p:
        raise DimensionMismatchError("values must have one entry per point")
    if p < m:
        raise InsufficientDataError(f"quadratic fit needs {m} points in {n}D, got {p}")
    if metric_scale is None:
        metric_scale = _minmax_metric(x)
    order = _neighbour_order(x, center_index, metric_scale)
    cluster = order[:m]

    # center and normalize the cluster for conditioning
    z = x[cluster] - x[center_index]
    radius = np.max(np.abs(z), axis=0)
    radius[radius == 0] = 1.0
    z = z / radius
    a = _quadratic_design(z)
    rhs = f[cluster]
    regularized = False
    try:
        w = solve_linear(a, rhs)
    except IllConditionedError:
        lam = 1e-10 * max(1.0, np.trace(a.T @ a) / m)
        w = np.linalg.solve(a.T @ a + lam * np.eye(m), a.T @ rhs)
        regularized = True

    hz = np.zeros((n, n))
    iu, ju = np.triu_indices(n)
    c = w[1 + n:]
    hz[iu, ju] = c
    hz[ju, iu] = c
    hz[np.diag_indices(n)] *= 2.0
    h = hz / np.outer(radius, radius)
    return LocalHessianEstimate(
        x[center_index].copy(), 0.5 * (h + h.T), "function-quadratic", tuple(int(i) for i in cluster),
        regularized=regularized,
    )


# -- averaging and the global transform ----------------------------------------


def rectify(h) -> np.ndarray:
    """Replace the eigenvalues of ``h`` with their absolute values."""
    vals, vecs = sym_eig(h)
    out = (vecs * np.abs(vals)) @ vecs.T
    return 0.5 * (out + out.T)


def average_hessian(estimates: Sequence) -> np.ndarray:
    """Mean of the rectified local Hessians, summed in the given order.

    Accepts :class:`LocalHessianEstimate` objects or bare matrices.
    """
    mats = [e.hessian if isinstance(e, LocalHessianEstimate) else np.asarray(e, dtype=float) for e in estimates]
    if not mats:
        raise InsufficientDataError("cannot average an empty list of Hessians")
    n = mats[0].shape[0]
    total = np.zeros((n, n))
    for h in mats:
        if h.shape != (n, n):
            raise DimensionMismatchError("local Hessians differ in dimension")
        total += rectify(h)
    return total / len(mats)


def transform_from_hessian(h_avg, provenance: str, flags: Iterable[str] = ()) -> DomainTransform:
    """Rotation = eigenvectors of ``h_avg``; scales = sqrt of floored eigenvalues."""
    vals, vecs = sym_eig(h_avg)
    top = vals.max()
    floor = EIG_FLOOR * top if top > 0 else 1.0
    flags = tuple(flags)
    if np.any(vals < floor):
        flags += ("eigenvalue-floor",)
    return DomainTransform(vecs, np.sqrt(np.maximum(vals, floor)), provenance, None, flags)


def transform_from_hessians(hessians: Sequence, provenance: str) -> DomainTransform:
    return transform_from_hessian(average_hessian(hessians), provenance)


def build_transform(points, values=None, gradients=None, metric_scale=None) -> DomainTransform:
    """Global rotation + scaling from local Hessians at every sample.

    Uses SR1 estimates when ``gradients`` is given, interpolating quadratic
    fits on ``values`` otherwise. If every local estimate is degenerate the
    identity transform is returned, flagged ``all-degenerate``.
    """
    x = np.asarray(points, dtype=float)
    if x.ndim != 2 or x.shape[0] < 1:
        raise InsufficientDataError("need a non-empty (p, dim) point array")
    if metric_scale is None:
        metric_scale = _minmax_metric(x)
    if gradients is not None:
        est = [sr1_hessian(i, x, gradients, metric_scale) for i in range(len(x))]
        provenance = "gradient-sr1"
    elif values is not None:
        est = [quadfit_hessian(i, x, values, metric_scale) for i in range(len(x))]
        provenance = "function-quadratic"
    else:
        raise InsufficientDataError("build_transform needs values or gradients")

    if all(e.degenerate for e in est):
        logger.warning("all local Hessian estimates are degenerate; using the identity transform")
        return DomainTransform(np.eye(x.shape[1]), np.ones(x.shape[1]), "identity", None, ("all-degenerate",))
    flags = ("regularized-fit",) if any(e.regularized for e in est) else ()
    return transform_from_hessian(average_hessian(est), provenance, flags)


# -- analytic reference transform ---------------------------------------------


def mean_abs_sin(freq) -> np.ndarray:
    """``integral_0^1 |sin(F t)| dt`` for ``F > 0``."""
    freq = np.asarray(freq, dtype=float)
    half_periods = np.floor(freq / np.pi)
    rest = freq - half_periods * np.pi
    return (2.0 * half_periods + 1.0 - np.cos(rest)) / freq


def ideal_transform(spec, rotation=None, scales=None) -> DomainTransform:
    """Reference transform for a sinusoid embedded as ``x_hat = R diag(S) x``.

    Undoes the applied frame and scales every decomposed direction by the
    square root of its mean absolute curvature over the unit interval,
    ``(A_i F_i^2 / N) * mean|sin(F_i t)|``.
    """
    n = spec.dim
    r = np.eye(n) if rotation is None else np.asarray(rotation, dtype=float)
    s = np.ones(n) if scales is None else np.asarray(scales, dtype=float)
    a, f = spec.amplitudes, spec.frequencies
    curvature = a * f**2 / n * mean_abs_sin(f)
    return DomainTransform(r, np.sqrt(curvature) / s, "ideal")
