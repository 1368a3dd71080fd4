"""Polynomial response surfaces without coupling terms."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from hessframe.errors import InsufficientDataError
from hessframe.numerics import solve_least_squares
from hessframe.surrogate.base import Dataset, Surrogate, resolve_transform


def polynomial_basis(z: np.ndarray, order: int) -> np.ndarray:
    """Columns ``z_i^j`` for ``j = 1..order``, ``i = 1..n`` then the constant."""
    cols = [z**j for j in range(1, order + 1)]
    return np.hstack(cols + [np.ones((z.shape[0], 1))])


def polynomial_basis_gradient(z: np.ndarray, order: int) -> np.ndarray:
    """Gradient rows of :func:`polynomial_basis`, shape ``(p * n, K)``.

    Row ``i * n + m`` holds ``d/dz_m`` of every basis function at point ``i``.
    """
    p, n = z.shape
    k = order * n + 1
    out = np.zeros((p, n, k))
    idx = np.arange(n)
    for j in range(1, order + 1):
        out[:, idx, (j - 1) * n + idx] = j * z ** (j - 1)
    return out.reshape(p * n, k)


@dataclass(eq=False)
class PolynomialSurrogate(Surrogate):
    order: int = 2
    gradient_enhanced: bool = False

    kind = "polynomial"

    def evaluate(self, z):
        return polynomial_basis(z, self.order) @ self.weights

    def hyperparameters(self):
        return {"order": self.order, "gradient_enhanced": self.gradient_enhanced}


def fit_polynomial(data: Dataset, order: int = 2, gradient_enhanced: bool = False, transform=None) -> PolynomialSurrogate:
    """Least-squares polynomial fit, optionally regressing on gradients too.

    With ``gradient_enhanced`` the gradient rows are stacked below the
    function-value rows and the combined system is solved in the
    least-squares sense; the basis (and so the flexibility) is unchanged.
    """
    if order < 1:
        raise ValueError("polynomial order must be >= 1")
    d, t = resolve_transform(data, transform)
    a = polynomial_basis(d.points, order)
    b = d.values
    if gradient_enhanced:
        if not d.has_gradients:
            raise InsufficientDataError("gradient-enhanced fit needs gradients")
        a = np.vstack([a, polynomial_basis_gradient(d.points, order)])
        b = np.concatenate([b, d.gradients.ravel()])
    if a.shape[0] < a.shape[1]:
        raise InsufficientDataError(f"{a.shape[0]} equations for {a.shape[1]} polynomial coefficients")
    sol = solve_least_squares(a, b)
    flags = ("rank-deficient",) if sol.rank_deficient else ()
    return PolynomialSurrogate(sol.x, t, order=order, gradient_enhanced=gradient_enhanced, flags=flags)
