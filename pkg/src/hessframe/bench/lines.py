"""1-D slices through N-dimensional space for visual comparison."""

from __future__ import annotations

import logging
from typing import NamedTuple

import numpy as np

from hessframe.bench.runner import _LINES, _failure_tag, build_domain, construction_set, fit_kind, make_problem
from hessframe.bench.spec import ExperimentSpec
from hessframe.sampling import check_bounds, make_rng

logger = logging.getLogger(__name__)


class LineSlice(NamedTuple):
    start: np.ndarray
    end: np.ndarray
    t: np.ndarray
    truth: np.ndarray
    prediction: np.ndarray


def random_lines(count: int, bounds, rng: np.random.Generator) -> list:
    """``count`` segments with endpoints uniform in ``bounds``; coincident endpoints are redrawn."""
    b = check_bounds(bounds)
    lines = []
    while len(lines) < count:
        a = rng.uniform(b[:, 0], b[:, 1])
        e = rng.uniform(b[:, 0], b[:, 1])
        if np.array_equal(a, e):
            continue
        lines.append((a, e))
    return lines


def line_slice(surrogate, fn, n_points: int, lines) -> list:
    """Sample ``fn`` and ``surrogate`` at ``n_points`` equally spaced parameters per line.

    ``lines`` is either a list of ``(start, end)`` pairs or an integer count,
    in which case ``fn.bounds`` and a fixed seed of 0 are used to draw them.
    """
    if isinstance(lines, int):
        lines = random_lines(lines, fn.bounds, make_rng(0, _LINES))
    t = np.linspace(0.0, 1.0, n_points)
    out = []
    for a, e in lines:
        a, e = np.asarray(a, dtype=float), np.asarray(e, dtype=float)
        if np.array_equal(a, e):
            raise ValueError("degenerate line segment")
        x = a + t[:, None] * (e - a)
        out.append(LineSlice(a, e, t, fn.value(x), surrogate.predict(x)))
    return out


def run_lines(spec: ExperimentSpec, line_count: int = 4, n_points: int = 200, surrogates: int = 1,
              failures: list | None = None) -> list:
    """Line slices for every (domain, kind, p) of ``spec``.

    All surrogates share the same ``line_count`` lines so their shapes can be
    compared directly. ``surrogates`` repeats (sub-seeded as in
    :func:`run_experiment`) are fitted per cell. Returns one list of rows
    ``(domain, kind, p, repeat, t, truth, prediction)`` per line.

    Cells whose transform or fit fails are skipped; if ``failures`` is a
    list, ``(domain, kind, p, repeat, tag)`` is appended for each.
    """
    problem = make_problem(spec)
    lines = random_lines(line_count, problem.bounds, make_rng(spec.seed, _LINES))
    rows = [[] for _ in lines]
    for p in spec.sample_counts:
        for repeat in range(min(surrogates, spec.repeats)):
            data = construction_set(spec, problem, p, repeat)
            for domain in spec.domains:
                try:
                    t = build_domain(domain, problem, data, seed=spec.seed)
                except Exception as exc:
                    _skip(failures, [(domain, kind, p, repeat) for kind in spec.kinds], exc)
                    continue
                for kind in spec.kinds:
                    try:
                        model = fit_kind(kind, data, t, spec, spec.seed)
                    except Exception as exc:
                        _skip(failures, [(domain, kind, p, repeat)], exc)
                        continue
                    for k, sl in enumerate(line_slice(model, problem.fn, n_points, lines)):
                        rows[k] += [
                            (domain, kind, p, repeat, float(ti), float(yt), float(yp))
                            for ti, yt, yp in zip(sl.t, sl.truth, sl.prediction)
                        ]
    return rows


def _skip(failures, cells, exc) -> None:
    tag = _failure_tag(exc)
    for cell in cells:
        logger.warning("line cell %s skipped: %s", cell, tag)
        if failures is not None:
            failures.append((*cell, tag))
