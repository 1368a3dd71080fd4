"""Experiment execution: domains x model kinds x sample counts x repeats.

A work unit is one ``(p, repeat)`` pair. It draws a single construction set
that every domain and model kind shares, so comparisons within a repeat are
paired. Each domain transform is computed from that construction set alone;
the test cloud never feeds into a transform or a fit.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from hessframe.bench.spec import ExperimentSpec
from hessframe.numerics import random_rotation
from hessframe.sampling import SampleSet, latin_hypercube, make_rng, uniform_cloud, unit_bounds
from hessframe.surrogate import Dataset, RbfConfig, fit_kriging, fit_polynomial, fit_rbf, tune_kriging
from hessframe.surrogate.kriging import kriging_scale_transform
from hessframe.testbed import (
    EXAMPLE_2D_SPEC,
    SinusoidSpec,
    TestFunction,
    make_sinusoid,
    rotation_2d,
    sinusoid_function,
    wrap_frame,
)
from hessframe.transform import (
    DomainTransform,
    build_transform,
    ideal_transform,
    identity_transform,
    minmax_transform,
)

logger = logging.getLogger(__name__)

# stream keys for make_rng(seed, key, ...)
_CONSTRUCT, _TEST, _KRIGING, _LINES = 0, 1, 2, 3


@dataclass(frozen=True, eq=False)
class Problem:
    """A sinusoid embedded in the frame ``x_hat = rotation diag(scales) x``."""

    fn: TestFunction
    sinusoid: SinusoidSpec
    rotation: np.ndarray
    scales: np.ndarray
    region: str = "bounding-box"

    @property
    def dim(self) -> int:
        return self.fn.dim

    @property
    def bounds(self) -> np.ndarray:
        """Axis-aligned box around the sampling region, in the embedded frame."""
        if self.region == "unit":
            return unit_bounds(self.dim)
        return self.fn.bounds

    def sample(self, p: int, rng: np.random.Generator, lhs: bool = True) -> np.ndarray:
        """Points in the embedded frame, drawn over the configured region.

        ``bounding-box`` covers the box around the image of the unit cube,
        ``image`` the image itself and ``unit`` the unit cube of the
        embedded frame.
        """
        draw = latin_hypercube if lhs else uniform_cloud
        if self.region != "image":
            return draw(p, self.dim, self.bounds, rng).points
        unit = draw(p, self.dim, unit_bounds(self.dim), rng).points
        return unit @ (self.rotation * self.scales).T


def make_problem(spec: ExperimentSpec) -> Problem:
    n = spec.dim
    if spec.function == "example2d":
        sin_spec = EXAMPLE_2D_SPEC
        rot = rotation_2d(30.0) if spec.rotated else np.eye(2)
    else:
        sin_spec = make_sinusoid(n)
        rot = random_rotation(n, np.random.default_rng(spec.frame_seed)) if spec.rotated else np.eye(n)
    scales = np.ones(n) if spec.frame_scales is None else np.asarray(spec.frame_scales, dtype=float)
    fn = wrap_frame(sinusoid_function(sin_spec, spec.function), rot, scales)
    return Problem(fn, sin_spec, rot, scales, spec.sample_region)


@dataclass(eq=False)
class RmseRecord:
    domain: str
    kind: str
    p: int
    repeat: int
    rmse: float = float("nan")
    failure: str | None = None
    cloud: str = ""
    errors: np.ndarray | None = None  # signed pointwise prediction errors

    @property
    def ok(self) -> bool:
        return self.failure is None


@dataclass(eq=False)
class ExperimentResult:
    spec: ExperimentSpec
    records: list
    transforms: dict = field(default_factory=dict)  # (domain, p, repeat) -> DomainTransform
    samples: dict = field(default_factory=dict)  # (p, repeat) -> SampleSet

    @property
    def failures(self) -> int:
        return sum(not r.ok for r in self.records)


def rmse(pred, truth) -> float:
    err = np.asarray(pred, dtype=float) - np.asarray(truth, dtype=float)
    return float(np.sqrt(np.mean(err**2)))


def construction_set(spec: ExperimentSpec, problem: Problem, p: int, repeat: int) -> Dataset:
    x = problem.sample(p, make_rng(spec.seed, _CONSTRUCT, repeat, p))
    return Dataset(x, problem.fn.value(x), problem.fn.gradient(x))


def test_cloud(spec: ExperimentSpec, problem: Problem, repeat: int) -> tuple[str, np.ndarray]:
    if spec.test_cloud == "shared":
        key, rng = "shared", make_rng(spec.seed, _TEST)
    else:
        key, rng = f"r{repeat}", make_rng(spec.seed, _TEST, repeat)
    return key, problem.sample(spec.test_points, rng, lhs=False)


def build_domain(domain: str, problem: Problem, data: Dataset, seed: int = 0) -> DomainTransform:
    """Domain transform computed from ``data`` (and, for ``ideal``, the known frame)."""
    if domain == "gradient-transform":
        return build_transform(data.points, gradients=data.gradients)
    if domain == "function-transform":
        return build_transform(data.points, values=data.values)
    if domain == "minmax":
        return minmax_transform(data.points)
    if domain == "kriging-scale":
        mm = minmax_transform(data.points)
        tuned = tune_kriging(data, transform=mm, seed=seed)
        return mm.then(kriging_scale_transform(tuned.shapes), "kriging-scale")
    if domain == "ideal":
        return ideal_transform(problem.sinusoid, problem.rotation, problem.scales)
    if domain == "raw":
        return identity_transform(problem.dim)
    raise ValueError(f"unknown domain {domain!r}")


def fit_kind(kind: str, data: Dataset, transform: DomainTransform, spec: ExperimentSpec, seed: int = 0):
    if kind == "rbf":
        return fit_rbf(data, RbfConfig(), False, transform)
    if kind == "ge-rbf":
        return fit_rbf(data, RbfConfig(), True, transform)
    if kind == "polynomial":
        return fit_polynomial(data, spec.polynomial_order, False, transform)
    if kind == "ge-polynomial":
        return fit_polynomial(data, spec.polynomial_order, True, transform)
    if kind == "kriging":
        return fit_kriging(data, transform=transform, seed=seed)
    raise ValueError(f"unknown model kind {kind!r}")


def _failure_tag(exc: Exception) -> str:
    return f"{type(exc).__name__}: {exc}".replace("\n", " ").replace(",", ";")


def run_unit(spec: ExperimentSpec, p: int, repeat: int, problem: Problem | None = None):
    """All domains and kinds for one ``(p, repeat)``.

    Returns ``(records, transforms, construction SampleSet)``.
    """
    problem = problem or make_problem(spec)
    data = construction_set(spec, problem, p, repeat)
    cloud_key, xt = test_cloud(spec, problem, repeat)
    truth = problem.fn.value(xt)
    kseed = int(make_rng(spec.seed, _KRIGING, repeat, p).integers(2**31))

    records, transforms = [], {}
    for domain in spec.domains:
        try:
            t = build_domain(domain, problem, data, kseed)
        except Exception as exc:  # recorded, run continues
            logger.warning("domain %s failed at p=%d repeat=%d: %s", domain, p, repeat, exc)
            tag = _failure_tag(exc)
            records += [RmseRecord(domain, k, p, repeat, failure=tag, cloud=cloud_key) for k in spec.kinds]
            continue
        transforms[(domain, p, repeat)] = t
        for kind in spec.kinds:
            rec = RmseRecord(domain, kind, p, repeat, cloud=cloud_key)
            try:
                model = fit_kind(kind, data, t, spec, kseed)
                err = model.predict(xt) - truth
                if not np.all(np.isfinite(err)):
                    raise FloatingPointError("non-finite predictions")
                rec.rmse = float(np.sqrt(np.mean(err**2)))
                if spec.keep_pointwise:
                    rec.errors = err
            except Exception as exc:
                logger.warning("fit %s/%s failed at p=%d repeat=%d: %s", domain, kind, p, repeat, exc)
                rec.failure = _failure_tag(exc)
            records.append(rec)
    return records, transforms, SampleSet(data.points, problem.bounds)


def _run_unit_args(args):
    return run_unit(*args)


def canonical_key(spec: ExperimentSpec):
    di = {d: i for i, d in enumerate(spec.domains)}
    ki = {k: i for i, k in enumerate(spec.kinds)}
    return lambda r: (di[r.domain], ki[r.kind], r.p, r.repeat)


def run_experiment(spec: ExperimentSpec, workers: int = 1, progress=None) -> ExperimentResult:
    """Run every cell of ``spec``; output order is canonical regardless of ``workers``."""
    units = [(p, r) for p in spec.sample_counts for r in range(spec.repeats)]
    result = ExperimentResult(spec, [])
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outs = pool.map(_run_unit_args, [(spec, p, r) for p, r in units], chunksize=1)
            outs = list(outs)
    else:
        problem = make_problem(spec)
        outs = []
        for p, r in units:
            outs.append(run_unit(spec, p, r, problem))
            if progress is not None:
                progress(p, r)
    for (p, r), (recs, trans, samples) in zip(units, outs):
        result.records.extend(recs)
        result.transforms.update(trans)
        result.samples[(p, r)] = samples
    result.records.sort(key=canonical_key(spec))
    return result


# -- aggregation ---------------------------------------------------------------


def shape_variance(records) -> float:
    """Mean over test points of the across-repeat (population) variance of the error.

    All records must carry pointwise errors on the same shared test cloud.
    """
    recs = [r for r in records if r.ok]
    if len(recs) < 2:
        raise ValueError("shape variance needs at least two successful repeats")
    if any(r.errors is None for r in recs):
        raise ValueError("records lack pointwise errors (set keep_pointwise)")
    clouds = {r.cloud for r in recs}
    if len(clouds) != 1 or any(r.errors.shape != recs[0].errors.shape for r in recs):
        raise ValueError("records were evaluated on mismatched test clouds")
    errs = np.vstack([r.errors for r in recs])
    return float(np.mean(np.var(errs, axis=0)))


def summarize(result: ExperimentResult) -> list:
    """Per ``(domain, kind, p)`` statistics; failures are excluded from means."""
    spec = result.spec
    cells = {}
    for r in result.records:
        cells.setdefault((r.domain, r.kind, r.p), []).append(r)
    out = []
    for domain in spec.domains:
        for kind in spec.kinds:
            for p in spec.sample_counts:
                recs = cells.get((domain, kind, p), [])
                good = np.array([r.rmse for r in recs if r.ok])
                entry = {
                    "domain": domain,
                    "kind": kind,
                    "p": p,
                    "n": int(good.size),
                    "failures": sum(not r.ok for r in recs),
                    "mean": float(good.mean()) if good.size else None,
                    "variance": float(good.var()) if good.size else None,
                    "mean_log10": float(np.log10(good).mean()) if good.size else None,
                    "variance_log10": float(np.log10(good).var()) if good.size else None,
                }
                if spec.keep_pointwise and spec.test_cloud == "shared" and good.size >= 2:
                    entry["shape_variance"] = shape_variance(recs)
                out.append(entry)
    return out
