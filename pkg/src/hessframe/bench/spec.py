"""Declarative experiment description and the built-in presets."""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path

from hessframe.errors import SpecError

DOMAINS = ("gradient-transform", "function-transform", "kriging-scale", "minmax", "ideal", "raw")
KINDS = ("rbf", "ge-rbf", "polynomial", "ge-polynomial", "kriging")
FUNCTIONS = ("sinusoid", "example2d")
TEST_CLOUDS = ("per-repeat", "shared")
REGIONS = ("bounding-box", "image", "unit")


@dataclass
class ExperimentSpec:
    """One benchmark sweep.

    ``function`` is embedded in the frame ``x_hat = R diag(frame_scales) x``
    where ``R`` is a random rotation drawn from ``frame_seed`` (the fixed 30
    degree rotation for ``example2d``) when ``rotated`` is set.
    """

    sample_counts: list
    function: str = "sinusoid"
    dim: int = 2
    rotated: bool = True
    frame_seed: int = 0
    frame_scales: list | None = None
    domains: list = field(default_factory=lambda: ["gradient-transform", "function-transform", "kriging-scale", "minmax", "ideal"])
    kinds: list = field(default_factory=lambda: ["rbf", "ge-rbf"])
    repeats: int = 50
    test_points: int = 100_000
    seed: int = 0
    test_cloud: str = "per-repeat"
    sample_region: str = "bounding-box"
    keep_pointwise: bool = False
    polynomial_order: int = 2

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if self.function not in FUNCTIONS:
            raise SpecError(f"function must be one of {FUNCTIONS}, got {self.function!r}")
        if self.function == "example2d" and self.dim != 2:
            raise SpecError("example2d is two-dimensional")
        if not isinstance(self.dim, int) or self.dim < 1:
            raise SpecError("dim must be a positive integer")
        if not self.domains:
            raise SpecError("domains must not be empty")
        for d in self.domains:
            if d not in DOMAINS:
                raise SpecError(f"unknown domain {d!r}; choose from {DOMAINS}")
        if not self.kinds:
            raise SpecError("kinds must not be empty")
        for k in self.kinds:
            if k not in KINDS:
                raise SpecError(f"unknown model kind {k!r}; choose from {KINDS}")
        if len(set(self.domains)) != len(self.domains) or len(set(self.kinds)) != len(self.kinds):
            raise SpecError("domains and kinds must not repeat")
        counts = list(self.sample_counts)
        if not counts or any(not isinstance(p, int) or p < 1 for p in counts):
            raise SpecError("sample_counts must be a non-empty list of positive integers")
        if any(b <= a for a, b in zip(counts, counts[1:])):
            raise SpecError("sample_counts must be strictly ascending")
        if not isinstance(self.repeats, int) or self.repeats < 1:
            raise SpecError("repeats must be >= 1")
        if not isinstance(self.test_points, int) or self.test_points < 1:
            raise SpecError("test_points must be >= 1")
        if self.test_cloud not in TEST_CLOUDS:
            raise SpecError(f"test_cloud must be one of {TEST_CLOUDS}")
        if self.sample_region not in REGIONS:
            raise SpecError(f"sample_region must be one of {REGIONS}")
        if self.frame_scales is not None:
            if len(self.frame_scales) != self.dim or any(s <= 0 for s in self.frame_scales):
                raise SpecError("frame_scales needs one positive entry per dimension")
        if self.polynomial_order < 1:
            raise SpecError("polynomial_order must be >= 1")

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentSpec":
        if not isinstance(d, dict):
            raise SpecError("experiment spec must be a JSON object")
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(d) - known)
        if unknown:
            raise SpecError(f"unknown spec keys: {', '.join(unknown)}")
        if "sample_counts" not in d:
            raise SpecError("spec is missing 'sample_counts'")
        try:
            return cls(**d)
        except TypeError as exc:
            raise SpecError(str(exc)) from exc

    @classmethod
    def load(cls, path) -> "ExperimentSpec":
        try:
            d = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise SpecError(f"cannot read spec {path}: {exc}") from exc
        return cls.from_dict(d)

    def replace(self, **changes) -> "ExperimentSpec":
        return dataclasses.replace(self, **changes)


# Sample-count grids approximate the visible ranges of the published figures.
PRESETS = {
    "2d": dict(dim=2, sample_counts=list(range(7, 27))),
    "4d": dict(dim=4, sample_counts=[10, 20, 30, 40, 50]),
    "8d": dict(dim=8, sample_counts=[40, 70, 100, 130, 160, 190]),
    "16d": dict(dim=16, sample_counts=[200, 400, 800, 1200, 1600, 2000]),
}
LONG_PRESETS = ("16d",)


def preset(name: str) -> ExperimentSpec:
    if name not in PRESETS:
        raise SpecError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    return ExperimentSpec(**PRESETS[name])


def quick(spec: ExperimentSpec) -> ExperimentSpec:
    """CI-sized variant: 10 repeats, 10^4 test points."""
    return spec.replace(repeats=min(spec.repeats, 10), test_points=min(spec.test_points, 10_000))
