"""Seeded construction and test point sets."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from hessframe.errors import InvalidDomainError


def make_rng(seed: int, *keys: int) -> np.random.Generator:
    """Independent PCG64 stream for ``(seed, *keys)``.

    Streams for different key tuples are statistically independent, so
    parallel repeats can draw from ``make_rng(seed, repeat)`` in any order.
    """
    return np.random.default_rng(np.random.SeedSequence([int(seed), *map(int, keys)]))


def check_bounds(bounds, dim: int | None = None) -> np.ndarray:
    b = np.asarray(bounds, dtype=float)
    if b.ndim == 1 and b.shape == (2,) and dim is not None:
        b = np.tile(b, (dim, 1))
    if b.ndim != 2 or b.shape[1] != 2:
        raise InvalidDomainError(f"bounds must have shape (dim, 2), got {b.shape}")
    if dim is not None and b.shape[0] != dim:
        raise InvalidDomainError(f"bounds cover {b.shape[0]} dimensions, expected {dim}")
    if not np.all(np.isfinite(b)) or np.any(b[:, 0] >= b[:, 1]):
        raise InvalidDomainError("every dimension needs finite bounds with low < high")
    return b


def unit_bounds(dim: int) -> np.ndarray:
    return np.tile([0.0, 1.0], (dim, 1))


@dataclass(frozen=True, eq=False)
class SampleSet:
    points: np.ndarray  # (n, dim)
    bounds: np.ndarray  # (dim, 2)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.points.shape[0]

    def to_dict(self) -> dict:
        return {"bounds": self.bounds.tolist(), "points": self.points.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "SampleSet":
        return cls(np.asarray(d["points"], dtype=float), np.asarray(d["bounds"], dtype=float))


def latin_hypercube(p: int, dim: int, bounds, rng: np.random.Generator) -> SampleSet:
    """Plain Latin hypercube sample (no space-filling optimization).

    Each dimension is cut into ``p`` equal strata; every stratum receives
    exactly one point at a uniformly random position inside it, and the
    stratum order is an independent permutation per dimension.
    """
    if p < 1 or dim < 1:
        raise ValueError("p and dim must both be >= 1")
    b = check_bounds(bounds, dim)
    u = np.empty((p, dim))
    for j in range(dim):
        u[:, j] = (rng.permutation(p) + rng.random(p)) / p
    return SampleSet(b[:, 0] + u * (b[:, 1] - b[:, 0]), b)


def uniform_cloud(n: int, dim: int, bounds, rng: np.random.Generator) -> SampleSet:
    """``n`` i.i.d. uniform points inside ``bounds``."""
    if n < 1 or dim < 1:
        raise ValueError("n and dim must both be >= 1")
    b = check_bounds(bounds, dim)
    return SampleSet(rng.uniform(b[:, 0], b[:, 1], size=(n, dim)), b)
