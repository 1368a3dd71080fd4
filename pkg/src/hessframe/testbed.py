"""Analytic test functions with exact gradients and Hessians.

Evaluators are vectorized over a leading batch axis: ``value`` maps
``(n, dim) -> (n,)``, ``gradient`` maps ``(n, dim) -> (n, dim)`` and
``hessian`` maps ``(n, dim) -> (n, dim, dim)``. A single point of shape
``(dim,)`` is accepted as well and the batch axis is dropped on output.

Gradients are stored as plain vectors. Where a formula is written with row
vectors (``dF/dx_hat = dF/dx . S^-1 R^T``) the stored column gradient is
its transpose, ``R S^-1 grad``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from hessframe.errors import DimensionMismatchError
from hessframe.sampling import check_bounds, unit_bounds


def _batch(x, dim: int) -> tuple[np.ndarray, bool]:
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    x = np.atleast_2d(x)
    if x.shape[-1] != dim:
        raise DimensionMismatchError(f"expected points of dimension {dim}, got {x.shape[-1]}")
    return x, single


@dataclass(frozen=True, eq=False)
class TestFunction:
    __test__ = False  # not a pytest class

    dim: int
    _value: Callable[[np.ndarray], np.ndarray]
    _gradient: Callable[[np.ndarray], np.ndarray]
    _hessian: Callable[[np.ndarray], np.ndarray]
    bounds: np.ndarray
    name: str = "function"

    def value(self, x):
        x, single = _batch(x, self.dim)
        out = self._value(x)
        return out[0] if single else out

    def gradient(self, x):
        x, single = _batch(x, self.dim)
        out = self._gradient(x)
        return out[0] if single else out

    def hessian(self, x):
        x, single = _batch(x, self.dim)
        out = self._hessian(x)
        return out[0] if single else out

    __call__ = value


@dataclass(frozen=True, eq=False)
class SinusoidSpec:
    """Amplitudes and angular frequencies of ``(1/N) sum A_i sin(F_i x_i)``."""

    amplitudes: np.ndarray
    frequencies: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.amplitudes, dtype=float)
        f = np.asarray(self.frequencies, dtype=float)
        if a.ndim != 1 or a.shape != f.shape or a.size < 1:
            raise DimensionMismatchError("amplitudes and frequencies must be equal-length vectors")
        object.__setattr__(self, "amplitudes", a)
        object.__setattr__(self, "frequencies", f)

    @property
    def dim(self) -> int:
        return self.amplitudes.size


def make_sinusoid(n: int) -> SinusoidSpec:
    """Dimension-``n`` member of the sinusoid family (1-based index ``i``)."""
    if n < 1:
        raise ValueError("dimension must be >= 1")
    i = np.arange(1, n + 1, dtype=float)
    amp = -2.0 * np.exp(-((2.0 * i - n) ** 2) / n) + 3.0
    freq = 3.0 * np.pi / (2.0 + 2.0 * np.exp((-20.0 * i + n) / 2.0)) + np.pi / 2.0
    return SinusoidSpec(amp, freq)


def eval_sinusoid(spec: SinusoidSpec, x) -> tuple:
    """Value and gradient of the sinusoid at ``x`` (single point or batch)."""
    x, single = _batch(x, spec.dim)
    n = spec.dim
    a, f = spec.amplitudes, spec.frequencies
    val = (np.sin(x * f) * a).sum(axis=1) / n
    grad = a * f * np.cos(x * f) / n
    if single:
        return val[0], grad[0]
    return val, grad


def sinusoid_function(spec: SinusoidSpec, name: str = "sinusoid") -> TestFunction:
    n = spec.dim
    a, f = spec.amplitudes, spec.frequencies

    def hess(x):
        diag = -a * f**2 * np.sin(x * f) / n
        out = np.zeros((x.shape[0], n, n))
        idx = np.arange(n)
        out[:, idx, idx] = diag
        return out

    return TestFunction(
        dim=n,
        _value=lambda x: eval_sinusoid(spec, x)[0],
        _gradient=lambda x: eval_sinusoid(spec, x)[1],
        _hessian=hess,
        bounds=unit_bounds(n),
        name=name,
    )


#: spec of ``sin(2 pi x1) + sin(2 pi x2)`` written as a member of the family
EXAMPLE_2D_SPEC = SinusoidSpec(np.array([2.0, 2.0]), np.array([2.0 * np.pi, 2.0 * np.pi]))


def example_2d() -> TestFunction:
    """``f(x) = sin(2 pi x1) + sin(2 pi x2)`` on the unit square."""
    return sinusoid_function(EXAMPLE_2D_SPEC, name="example2d")


def quadratic_form(a) -> TestFunction:
    """``f(x) = x^T A x / 2`` on ``[-1, 1]^n``; gradient ``A x``, Hessian ``A``."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError("quadratic form needs a square matrix")
    a = 0.5 * (a + a.T)
    n = a.shape[0]
    return TestFunction(
        dim=n,
        _value=lambda x: 0.5 * np.einsum("ni,ij,nj->n", x, a, x),
        _gradient=lambda x: x @ a,
        _hessian=lambda x: np.broadcast_to(a, (x.shape[0], n, n)).copy(),
        bounds=np.tile([-1.0, 1.0], (n, 1)),
        name="quadratic",
    )


def rotation_2d(degrees: float) -> np.ndarray:
    t = np.deg2rad(degrees)
    return np.array([[np.cos(t), -np.sin(t)], [np.sin(t), np.cos(t)]])


def image_bounding_box(m: np.ndarray, bounds) -> np.ndarray:
    """Axis-aligned bounding box of ``m @ box`` for a box given by ``bounds``."""
    b = check_bounds(bounds, m.shape[1])
    lo = np.where(m > 0, m * b[:, 0], m * b[:, 1]).sum(axis=1)
    hi = np.where(m > 0, m * b[:, 1], m * b[:, 0]).sum(axis=1)
    return np.column_stack([lo, hi])


def wrap_frame(f: TestFunction, rotation=None, scales=None) -> TestFunction:
    """Express ``f`` in the distorted frame ``x_hat = R diag(S) x``.

    The returned function ``g`` satisfies ``g(x_hat) = f(M^-1 x_hat)`` with
    ``M = R diag(S)``; its gradient is ``M^-T grad f`` and its Hessian
    ``M^-T H M^-1``. Bounds are the bounding box of the image of ``f``'s
    bounds.
    """
    n = f.dim
    r = np.eye(n) if rotation is None else np.asarray(rotation, dtype=float)
    s = np.ones(n) if scales is None else np.asarray(scales, dtype=float)
    if r.shape != (n, n) or s.shape != (n,):
        raise DimensionMismatchError("rotation / scales do not match the function dimension")
    if np.max(np.abs(r.T @ r - np.eye(n))) > 1e-8:
        raise ValueError("rotation matrix is not orthogonal")
    if np.any(s <= 0):
        raise ValueError("scales must be positive")
    m = r * s
    m_inv = (r / s).T  # diag(1/s) R^T

    def pre(xh):
        return xh @ m_inv.T

    def grad(xh):
        # row form: grad_f(x) . S^-1 R^T
        return f._gradient(pre(xh)) @ m_inv

    def hess(xh):
        return np.einsum("ai,nab,bj->nij", m_inv, f._hessian(pre(xh)), m_inv)

    return TestFunction(
        dim=n,
        _value=lambda xh: f._value(pre(xh)),
        _gradient=grad,
        _hessian=hess,
        bounds=image_bounding_box(m, f.bounds),
        name=f.name,
    )
