from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from hessframe.errors import DimensionMismatchError
from hessframe.transform import DomainTransform, identity_transform


@dataclass(frozen=True, eq=False)
class Dataset:
    """Samples of a function in a single reference frame.

    ``gradients`` is either ``None`` or a ``(p, dim)`` array covering every
    point; partial gradient information is not supported.
    """

    points: np.ndarray
    values: np.ndarray
    gradients: np.ndarray | None = None
    frame: str = "original"

    def __post_init__(self):
        x = np.atleast_2d(np.asarray(self.points, dtype=float))
        f = np.asarray(self.values, dtype=float).ravel()
        if f.size != x.shape[0]:
            raise DimensionMismatchError(f"{x.shape[0]} points but {f.size} values")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(f))):
            raise ValueError("dataset contains non-finite entries")
        g = self.gradients
        if g is not None:
            g = np.asarray(g, dtype=float).reshape(x.shape)
            if not np.all(np.isfinite(g)):
                raise ValueError("dataset gradients contain non-finite entries")
        object.__setattr__(self, "points", x)
        object.__setattr__(self, "values", f)
        object.__setattr__(self, "gradients", g)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def has_gradients(self) -> bool:
        return self.gradients is not None

    def transformed(self, t: DomainTransform) -> "Dataset":
        """The same samples expressed in the frame of ``t``."""
        if t.dim != self.dim:
            raise DimensionMismatchError("transform dimension does not match dataset")
        g = None if self.gradients is None else t.transform_gradient(self.gradients)
        return Dataset(t.forward(self.points), self.values, g, t.provenance)

    @classmethod
    def from_function(cls, fn, points) -> "Dataset":
        x = np.atleast_2d(np.asarray(points, dtype=float))
        return cls(x, fn.value(x), fn.gradient(x))


@dataclass(eq=False)
class Surrogate:
    """A trained model living in the frame of ``transform``.

    ``predict`` takes points in the original frame. Subclasses implement
    ``evaluate`` on already-transformed coordinates.
    """

    weights: np.ndarray
    transform: DomainTransform
    flags: tuple = field(default=(), kw_only=True)

    kind = "abstract"

    @property
    def n_basis(self) -> int:
        return int(self.weights.size)

    def evaluate(self, z: np.ndarray) -> np.ndarray:  # pragma: no cover
        raise NotImplementedError

    def predict(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        single = x.ndim == 1
        x = np.atleast_2d(x)
        if x.shape[1] != self.transform.dim:
            raise DimensionMismatchError(f"expected {self.transform.dim}-D points, got {x.shape[1]}-D")
        out = self.evaluate(self.transform.forward(x))
        return out[0] if single else out

    __call__ = predict

    def hyperparameters(self) -> dict:
        return {}

    def _arrays(self) -> dict:
        return {}

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "hyperparameters": self.hyperparameters(),
            "weights": self.weights.tolist(),
            **{k: np.asarray(v).tolist() for k, v in self._arrays().items()},
            "transform": self.transform.to_dict(),
            "flags": list(self.flags),
        }


def predict(s: Surrogate, x) -> np.ndarray:
    return s.predict(x)


def resolve_transform(data: Dataset, transform: DomainTransform | None) -> tuple[Dataset, DomainTransform]:
    t = identity_transform(data.dim) if transform is None else transform
    return data.transformed(t), t
