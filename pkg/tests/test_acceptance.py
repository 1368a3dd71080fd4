"""Acceptance checks, one test per criterion.

A summary line per criterion is printed at the end of the run (see conftest).
Numeric details are printed from each test and show up with ``-s`` or on failure.
"""
import subprocess
import sys
import time

import numpy as np
import pytest

from hessframe.bench import ExperimentSpec, run_experiment, summarize
from hessframe.numerics import random_rotation
from hessframe.surrogate.rbf import DEFAULT_GRID, gaussian, rippa_loocv
from hessframe.surrogate import Dataset
from hessframe.testbed import make_sinusoid, sinusoid_function
from hessframe.transform import (
    DomainTransform,
    quadfit_hessian,
    quadratic_terms,
    rectify,
    sr1_hessian,
    transform_from_hessians,
)


def _mixed_sym(rng, n):
    q = random_rotation(n, rng)
    lam = rng.uniform(0.2, 5.0, n) * rng.choice([-1.0, 1.0], n)
    lam[0], lam[-1] = abs(lam[0]), -abs(lam[-1])  # at least one of each sign
    return (q * lam) @ q.T


def _explicit_loo(z, f, eps):
    out = np.empty(len(f))
    for i in range(len(f)):
        keep = np.arange(len(f)) != i
        w = np.linalg.solve(gaussian(z[keep], z[keep], eps), f[keep])
        out[i] = f[i] - (gaussian(z[i], z[keep], eps) @ w)[0]
    return out


def _fd_hessian(fn, x, h=1e-3):
    n = x.size
    eye = np.eye(n)

    def central(step):
        out = np.empty((n, n))
        for i in range(n):
            for j in range(n):
                ei, ej = step * eye[i], step * eye[j]
                out[i, j] = (fn(x + ei + ej) - fn(x + ei - ej) - fn(x - ei + ej) + fn(x - ei - ej)) / (4 * step**2)
        return out

    return (4 * central(h / 2) - central(h)) / 3


def test_criterion_1_whitening_oracle():
    start = time.perf_counter()
    rng = np.random.default_rng(101)
    worst = 0.0
    for k in range(100):
        n = 2 + k % 5
        a = _mixed_sym(rng, n)
        x = rng.uniform(-1, 1, size=(n + 3, n))
        # Hessian of 0.5 x^T A x is A at every sample
        t = transform_from_hessians([a for _ in x], "ideal")
        err = np.linalg.norm(t.pullback_hessian(rectify(a)) - np.eye(n), "fro")
        worst = max(worst, err)
    elapsed = time.perf_counter() - start
    print(f"criterion 1: worst Frobenius error {worst:.2e}, {elapsed:.2f}s")
    assert worst < 1e-6
    assert elapsed < 10


def test_criterion_2_sr1_and_quadfit_exactness():
    start = time.perf_counter()
    rng = np.random.default_rng(102)
    worst_sr1 = worst_quad = 0.0
    for n in range(2, 9):
        for _ in range(5):
            a = _mixed_sym(rng, n)
            b, c = rng.normal(size=n), rng.normal()
            x = rng.uniform(-1, 1, size=(quadratic_terms(n), n))
            grads = x @ a + b
            vals = 0.5 * np.einsum("ni,ij,nj->n", x, a, x) + x @ b + c
            sr1 = sr1_hessian(0, x[: n + 1], grads[: n + 1]).hessian
            quad = quadfit_hessian(0, x, vals).hessian
            worst_sr1 = max(worst_sr1, np.max(np.abs(sr1 - a)))
            worst_quad = max(worst_quad, np.max(np.abs(quad - a)))
    elapsed = time.perf_counter() - start
    print(f"criterion 2: SR1 {worst_sr1:.2e}, quadfit {worst_quad:.2e}, {elapsed:.2f}s")
    assert worst_sr1 < 1e-6
    assert worst_quad < 1e-8
    assert elapsed < 10


def test_criterion_3_rippa_identity():
    start = time.perf_counter()
    rng = np.random.default_rng(103)
    worst, compared = 0.0, 0
    for k in range(20):
        p = 5 + k % 11  # 5..15
        z = rng.uniform(size=(p, 2))
        f = np.sin(2 * np.pi * z[:, 0]) + np.cos(3 * z[:, 1]) + rng.normal(scale=0.1, size=p)
        loo = rippa_loocv(Dataset(z, f), DEFAULT_GRID, aggregate="signed")
        for eps, e in zip(loo.grid, loo.errors):
            if np.isnan(e):
                continue  # singular candidate, excluded from the search
            worst = max(worst, abs(e - np.mean(_explicit_loo(z, f, eps))))
            compared += 1
    elapsed = time.perf_counter() - start
    print(f"criterion 3: {compared} candidates, worst {worst:.2e}, {elapsed:.2f}s")
    assert compared > 0
    assert worst < 1e-8
    assert elapsed < 30


def test_criterion_4_gradient_chain_rule():
    start = time.perf_counter()
    rng = np.random.default_rng(104)
    h = 1e-6
    worst = 0.0
    for k in range(50):
        n = 2 + k % 15  # 2..16
        f = sinusoid_function(make_sinusoid(n))
        t = DomainTransform(random_rotation(n, rng), rng.uniform(0.3, 3.0, n), "gradient-sr1", rng.uniform(-1, 1, n))
        for _ in range(10):
            xh = t.forward(rng.uniform(0, 1, n))
            g = t.transform_gradient(f.gradient(t.inverse(xh)))
            fd = np.array([(f.value(t.inverse(xh + h * e)) - f.value(t.inverse(xh - h * e))) / (2 * h)
                           for e in np.eye(n)])
            worst = max(worst, np.linalg.norm(g - fd) / np.linalg.norm(g))
    elapsed = time.perf_counter() - start
    print(f"criterion 4: worst relative error {worst:.2e}, {elapsed:.2f}s")
    assert worst < 1e-5
    assert elapsed < 30


FRAMES = {
    "original": dict(rotated=False),
    "scaled": dict(rotated=False, frame_scales=[2.0, 1.0]),
    "rotated": dict(rotated=True, frame_scales=[2.0, 1.0]),
}


def test_criterion_5_2d_ordering():
    start = time.perf_counter()
    counts = list(range(7, 15))
    cells = {}
    for name, kw in FRAMES.items():
        spec = ExperimentSpec(
            sample_counts=counts, function="example2d", domains=["raw"], kinds=["rbf"],
            repeats=50, test_points=1000, test_cloud="shared", keep_pointwise=True, **kw,
        )
        for c in summarize(run_experiment(spec)):
            cells[name, c["p"]] = c
    elapsed = time.perf_counter() - start
    mean_bad, var_bad = [], []
    for p in counts:
        m = [cells[name, p]["mean"] for name in FRAMES]
        v = [cells[name, p]["shape_variance"] for name in FRAMES]
        print(f"criterion 5: p={p} mean {m[0]:.4f} < {m[1]:.4f} < {m[2]:.4f}; "
              f"shape variance {v[0]:.4f} < {v[1]:.4f} < {v[2]:.4f}")
        if not m[0] < m[1] < m[2]:
            mean_bad.append(p)
        if p <= 10 and not v[0] < v[1] < v[2]:
            var_bad.append(p)
    print(f"criterion 5: {elapsed:.0f}s")
    assert not mean_bad, f"mean RMSE ordering broken at p={mean_bad}"
    assert not var_bad, f"shape variance ordering broken at p={var_bad}"
    assert elapsed < 300


@pytest.fixture(scope="module")
def transform_benefit():
    """Shared 4D/8D GE-RBF sweep used by criteria 6 and 7."""
    start = time.perf_counter()
    out = {}
    for dim, counts in ((4, [20, 30, 40, 50]), (8, [130, 160, 190])):
        spec = ExperimentSpec(
            sample_counts=counts, function="sinusoid", dim=dim,
            domains=["gradient-transform", "kriging-scale", "minmax", "ideal"], kinds=["ge-rbf"],
            repeats=20, test_points=10_000,
        )
        result = run_experiment(spec)
        out[dim] = {(c["domain"], c["p"]): c["mean"] for c in summarize(result)}
        out[dim]["counts"] = counts
    out["elapsed"] = time.perf_counter() - start
    return out


def test_criterion_6_transform_benefit(transform_benefit):
    bad = []
    for dim in (4, 8):
        m = transform_benefit[dim]
        for p in m["counts"]:
            grad, mm = m["gradient-transform", p], m["minmax", p]
            print(f"criterion 6: {dim}D p={p} gradient {grad:.4f} minmax {mm:.4f} ideal {m['ideal', p]:.4f}")
            if not grad <= mm:
                bad.append((dim, p))
        top = m["counts"][-1]
        if not m["gradient-transform", top] <= 2 * m["ideal", top]:
            bad.append((dim, "ideal"))
    print(f"criterion 6: {transform_benefit['elapsed']:.0f}s")
    assert not bad, f"gradient transform loses at {bad}"
    assert transform_benefit["elapsed"] < 1200


def test_criterion_7_kriging_plateau(transform_benefit):
    m = transform_benefit[8]
    p = m["counts"][-1]
    krig, mm, grad = m["kriging-scale", p], m["minmax", p], m["gradient-transform", p]
    print(f"criterion 7: 8D p={p} |kriging - minmax| {abs(krig - mm):.4f}, minmax - gradient {mm - grad:.4f}")
    assert abs(krig - mm) < mm - grad


@pytest.mark.slow
def test_criterion_8_16d_surrogate_check():
    start = time.perf_counter()
    spec = ExperimentSpec(
        sample_counts=[400], function="sinusoid", dim=16, domains=["gradient-transform", "minmax"],
        kinds=["ge-rbf"], repeats=10, test_points=10_000,
    )
    m = {c["domain"]: c["mean"] for c in summarize(run_experiment(spec))}
    elapsed = time.perf_counter() - start
    ratio = m["gradient-transform"] / m["minmax"]
    print(f"criterion 8: gradient {m['gradient-transform']:.4f} minmax {m['minmax']:.4f} "
          f"ratio {ratio:.3f}, {elapsed:.0f}s")
    assert ratio < 0.7
    assert elapsed < 3600


def test_criterion_9_determinism(tmp_path):
    start = time.perf_counter()
    outputs = []
    for k in range(2):
        out = tmp_path / f"run{k}"
        cmd = [sys.executable, "-m", "hessframe.bench", "run", "--preset", "2d", "--quick",
               "--seed", "0", "--out-dir", str(out), "--no-transforms"]
        proc = subprocess.run(cmd, capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
        outputs.append((out / "rmse.csv").read_bytes())
    elapsed = time.perf_counter() - start
    print(f"criterion 9: {len(outputs[0])} bytes, {elapsed:.1f}s")
    assert outputs[0] == outputs[1]
    assert elapsed < 60


def test_criterion_10_basis_curvature():
    start = time.perf_counter()
    c = np.array([0.4, -0.1, 0.7])
    worst = 0.0
    for eps in (0.1, 1.0, 10.0):
        num = _fd_hessian(lambda x: gaussian(x, c, eps)[0, 0], c)
        worst = max(worst, np.max(np.abs(num + 2 * eps * np.eye(3))))
    elapsed = time.perf_counter() - start
    print(f"criterion 10: worst entry error {worst:.2e}, {elapsed:.3f}s")
    assert worst < 1e-6
    assert elapsed < 1
