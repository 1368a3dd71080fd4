import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hessframe.errors import InvalidDomainError
from hessframe.sampling import SampleSet, latin_hypercube, make_rng, uniform_cloud, unit_bounds


def _strata_counts(points, bounds, p):
    u = (points - bounds[:, 0]) / (bounds[:, 1] - bounds[:, 0])
    idx = np.minimum(np.floor(u * p).astype(int), p - 1)
    return np.stack([np.bincount(idx[:, j], minlength=p) for j in range(points.shape[1])])


class TestLatinHypercube:
    def test_one_point_per_quarter(self):
        s = latin_hypercube(4, 1, [[0.0, 1.0]], make_rng(0))
        np.testing.assert_array_equal(np.sort(np.floor(s.points[:, 0] * 4)), [0, 1, 2, 3])

    def test_single_point(self):
        s = latin_hypercube(1, 5, unit_bounds(5), make_rng(1))
        assert len(s) == 1 and s.dim == 5
        assert np.all((s.points >= 0) & (s.points <= 1))

    def test_stratum_audit_8d(self):
        b = unit_bounds(8)
        s = latin_hypercube(50, 8, b, make_rng(7))
        np.testing.assert_array_equal(_strata_counts(s.points, b, 50), 1)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(1, 40), st.integers(1, 6), st.integers(0, 2**31), st.floats(-5, 5), st.floats(0.1, 10))
    def test_stratification_property(self, p, dim, seed, lo, width):
        b = np.tile([lo, lo + width], (dim, 1))
        s = latin_hypercube(p, dim, b, make_rng(seed))
        assert np.all((s.points >= b[:, 0]) & (s.points <= b[:, 1]))
        np.testing.assert_array_equal(_strata_counts(s.points, b, p), 1)

    def test_not_centered(self):
        s = latin_hypercube(20, 2, unit_bounds(2), make_rng(3))
        offsets = (s.points * 20) % 1.0
        assert not np.allclose(offsets, 0.5)

    def test_degenerate_bounds(self):
        with pytest.raises(InvalidDomainError):
            latin_hypercube(5, 2, [[0.0, 1.0], [1.0, 1.0]], make_rng(0))
        with pytest.raises(InvalidDomainError):
            latin_hypercube(5, 2, [[0.0, 1.0]], make_rng(0))

    def test_seed_reproducible(self):
        a = latin_hypercube(30, 3, unit_bounds(3), make_rng(5, 2, 9)).points
        b = latin_hypercube(30, 3, unit_bounds(3), make_rng(5, 2, 9)).points
        np.testing.assert_array_equal(a, b)

    def test_distinct_keys_distinct_streams(self):
        a = latin_hypercube(10, 2, unit_bounds(2), make_rng(5, 0)).points
        b = latin_hypercube(10, 2, unit_bounds(2), make_rng(5, 1)).points
        assert not np.array_equal(a, b)


class TestUniformCloud:
    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            uniform_cloud(0, 2, unit_bounds(2), make_rng(0))

    def test_mean_near_midpoint(self):
        n = 100_000
        s = uniform_cloud(n, 2, [[0.0, 1.0], [-2.0, 2.0]], make_rng(0))
        sigma = np.array([1.0, 4.0]) / np.sqrt(12 * n)
        assert np.all(np.abs(s.points.mean(axis=0) - [0.5, 0.0]) < 3 * sigma)

    def test_inside_bounds_16d(self):
        s = uniform_cloud(1000, 16, unit_bounds(16), make_rng(2))
        assert np.all((s.points >= 0) & (s.points <= 1))

    def test_serialization_roundtrip(self):
        s = uniform_cloud(7, 3, unit_bounds(3), make_rng(4))
        back = SampleSet.from_dict(json.loads(json.dumps(s.to_dict())))
        np.testing.assert_array_equal(back.points, s.points)
        np.testing.assert_array_equal(back.bounds, s.bounds)
