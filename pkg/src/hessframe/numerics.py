"""Dense linear-algebra primitives.

Every routine here is a pure function of its inputs. Matrices are plain
``numpy.ndarray`` objects; symmetric matrices are validated on entry and
symmetrized exactly so downstream code can rely on ``m == m.T``.
"""

from __future__ import annotations

import warnings
from functools import cmp_to_key
from typing import NamedTuple

import numpy as np
import scipy.linalg
from scipy.linalg import lapack

from hessframe.errors import ConvergenceError, DimensionMismatchError, IllConditionedError

#: reciprocal condition number below which a system is treated as singular
RCOND_THRESHOLD = 1e-12
#: relative off-diagonal size below which a symmetric matrix counts as diagonal
DIAGONAL_TOL = 1e-12


class EigenDecomposition(NamedTuple):
    """Eigenpairs of a symmetric matrix.

    ``values`` is sorted in descending order and column ``i`` of ``vectors``
    belongs to ``values[i]``. Each column is signed so that its
    largest-magnitude entry is non-negative (first such entry on ties).
    """

    values: np.ndarray
    vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors.T


class LeastSquaresSolution(NamedTuple):
    x: np.ndarray
    rank: int
    rank_deficient: bool


def as_symmetric(m, tol: float = 1e-10) -> np.ndarray:
    """Validate a square finite matrix and return its exact symmetric part."""
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise DimensionMismatchError(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    scale = max(1.0, float(np.max(np.abs(m))))
    if np.max(np.abs(m - m.T)) > tol * scale:
        raise ValueError("matrix is not symmetric")
    return 0.5 * (m + m.T)


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    idx = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[idx, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def sym_eig(m) -> EigenDecomposition:
    """Eigendecomposition of a real symmetric (possibly indefinite) matrix.

    Raises
    ------
    ConvergenceError
        If LAPACK's symmetric eigensolver fails to converge.
    """
    m = as_symmetric(m)
    off = m - np.diag(np.diag(m))
    tol = DIAGONAL_TOL * max(float(np.max(np.abs(m))), np.finfo(float).tiny)
    if np.max(np.abs(off)) <= tol:
        # numerically diagonal: return coordinate axes so repeated eigenvalues
        # do not pick up an arbitrary rotation from rounding noise; values
        # within tol keep their axis order
        w = np.diag(m).copy()
        order = sorted(range(w.size), key=cmp_to_key(lambda i, j: 0 if abs(w[i] - w[j]) <= tol else (1 if w[i] < w[j] else -1)))
        return EigenDecomposition(w[order], np.eye(m.shape[0])[:, order])
    try:
        w, v = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"symmetric eigensolver did not converge: {exc}") from exc
    order = np.argsort(-w, kind="stable")
    return EigenDecomposition(w[order], _fix_signs(v[:, order]))


def solve_linear(a, b) -> np.ndarray:
    """Solve the square system ``a @ x = b`` by LU factorization.

    ``b`` may be a vector or a matrix of right-hand sides.

    Raises
    ------
    IllConditionedError
        When the 1-norm reciprocal condition estimate falls below
        :data:`RCOND_THRESHOLD`.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"solve_linear needs a square matrix, got {a.shape}")
    if b.shape[0] != a.shape[0]:
        raise DimensionMismatchError(f"rhs has {b.shape[0]} rows, matrix has {a.shape[0]}")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(a, check_finite=True)
    anorm = np.linalg.norm(a, 1)
    if anorm == 0.0:
        raise IllConditionedError("zero matrix", 0.0)
    rcond, info = lapack.dgecon(lu, anorm, norm="1")
    if info != 0 or not np.isfinite(rcond) or rcond < RCOND_THRESHOLD:
        raise IllConditionedError("matrix is singular to working precision", float(rcond))
    return scipy.linalg.lu_solve((lu, piv), b)


def solve_least_squares(a, b) -> LeastSquaresSolution:
    """Minimum-norm least-squares solution of an overdetermined system.

    Rank is determined from the SVD with the usual ``eps * max(m, n)``
    relative cutoff; a rank below ``a.shape[1]`` sets ``rank_deficient``.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim != 2:
        raise DimensionMismatchError("least squares needs a 2-D matrix")
    if a.shape[0] < a.shape[1]:
        raise DimensionMismatchError(f"underdetermined system {a.shape}; need rows >= cols")
    if b.shape[0] != a.shape[0]:
        raise DimensionMismatchError(f"rhs has {b.shape[0]} rows, matrix has {a.shape[0]}")
    x, _, rank, _ = np.linalg.lstsq(a, b, rcond=None)
    return LeastSquaresSolution(x, int(rank), int(rank) < a.shape[1])


def rotation_from_matrix(a) -> np.ndarray:
    """Orthogonal matrix ``expm(pi * (a - a.T))``; det is +1 by construction."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError("rotation generator must be square")
    return scipy.linalg.expm(np.pi * (a - a.T))


def random_rotation(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Random rotation from the exponential map of a skew matrix.

    Generator entries are drawn uniformly from ``[-0.5, 0.5]``.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    return rotation_from_matrix(rng.uniform(-0.5, 0.5, size=(dim, dim)))
