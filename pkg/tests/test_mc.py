"""Sampling determinism, KS agreement and separation oracles."""

import json
import math

import numpy as np
import pytest

from lfrorder import (
    DomainError,
    ecdf_agreement,
    sample_pair,
    sample_system,
    system_dist,
)
from lfrorder.mc import SampleBatch, _ks_from_sorted_cdf

from conftest import cs

X52 = cs((0.02, 0.04, 0.06), (0.2, 0.5, 0.7))
X54 = cs((0.2, 0.4, 0.6), (0.8, 1.0, 1.5))
TWO_EXP = cs((1.0, 1.0), (0.0, 0.0))


class TestSampling:
    def test_single_component_kinds_coincide(self):
        single = cs([0.7], [0.4])
        a = sample_system(single, "series", 5000, seed=4)
        b = sample_system(single, "parallel", 5000, seed=4)
        np.testing.assert_array_equal(a.values, b.values)

    def test_min_of_two_exponentials_mean(self):
        batch = sample_system(TWO_EXP, "series", 1_000_000, seed=5)
        assert batch.values.mean() == pytest.approx(0.5, abs=2e-3)

    def test_parallel_ecdf_matches_analytic_cdf(self):
        batch = sample_system(X54, "parallel", 1_000_000, seed=12)
        dist = system_dist("parallel", X54)
        analytic = dist.cdf(1.0)
        empirical = np.searchsorted(batch.values, 1.0, side="right") / batch.size
        assert empirical == pytest.approx(analytic, abs=2e-3)

    def test_shard_invariance(self):
        for shards in (1, 2, 7):
            batch = sample_system(X52, "series", 10_001, seed=99, shards=shards)
            if shards == 1:
                reference = batch.values
            else:
                np.testing.assert_array_equal(batch.values, reference)

    def test_seed_determinism(self):
        a = sample_system(X52, "series", 1000, seed=3)
        b = sample_system(X52, "series", 1000, seed=3)
        np.testing.assert_array_equal(a.values, b.values)

    def test_size_validation(self):
        with pytest.raises(DomainError):
            sample_system(X52, "series", 0, seed=1)
        with pytest.raises(DomainError):
            sample_system(X52, "series", 10, seed=1, shards=20)

    def test_bracketing_with_shared_draws(self):
        mins, maxs = sample_pair(X52, X52, "series", 2000, seed=6, common=True)[0], \
                     sample_pair(X52, X52, "parallel", 2000, seed=6, common=True)[0]
        assert np.all(np.sort(mins.values) <= np.sort(maxs.values))

    def test_independent_pair_streams_differ(self):
        bx, by = sample_pair(X52, X52, "series", 1000, seed=6, common=False)
        assert not np.array_equal(bx.values, by.values)


class TestKs:
    def test_own_cdf_within_band(self):
        for seed in (1, 7, 42):
            rep = ecdf_agreement(sample_system(X52, "series", 10_000, seed))
            assert rep.band == pytest.approx(1.63 / 100.0)
            assert rep.passed

    def test_mismatched_cdf_separates(self):
        batch = sample_system(X52, "series", 10_000, seed=3)
        rep = ecdf_agreement(batch, system_dist("parallel", X52))
        assert rep.statistic > 0.1
        # analytic separation at the series median confirms the gap
        med = system_dist("series", X52).quantile(0.5)
        assert system_dist("parallel", X52).cdf(med) < 0.4

    def test_single_point_degenerate_statistic(self):
        single = cs([1.0], [0.0])
        batch = sample_system(single, "series", 1, seed=8)
        u = system_dist("series", single).cdf(batch.values[0])
        rep = ecdf_agreement(batch)
        assert rep.statistic == pytest.approx(max(u, 1 - u), abs=1e-15)

    def test_inverse_transform_uniformity(self):
        batch = sample_system(X54, "parallel", 20_000, seed=13)
        u = np.asarray(batch.dist.cdf(batch.values))
        stat = _ks_from_sorted_cdf(u)  # identity CDF on (0,1)
        assert stat < 1.63 / math.sqrt(batch.size)


class TestBatch:
    def test_finalized_batch_is_sorted(self):
        batch = sample_system(X52, "parallel", 500, seed=2)
        assert np.all(np.diff(batch.values) >= 0)

    def test_unsorted_values_rejected(self):
        with pytest.raises(DomainError):
            SampleBatch(np.array([2.0, 1.0]), "series", X52, seed=0, size=2)

    def test_csv_export(self, tmp_path):
        batch = sample_system(X52, "series", 50, seed=1)
        path = tmp_path / "batch.csv"
        batch.to_csv(str(path))
        lines = path.read_text().splitlines()
        meta = json.loads(lines[0].lstrip("# "))
        assert meta["seed"] == 1 and meta["kind"] == "series"
        assert lines[1] == "value"
        assert len(lines) == 52
        assert float(lines[2]) == batch.values[0]
