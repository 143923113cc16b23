import numpy as np
import pytest

import oracle
from clustcompare.baselines import omega_index, onmi, onmi_lfk, onmi_mgh, pair_coverage_histogram
from clustcompare.errors import ClusteringError, EmptyClustering, UniverseMismatch
from clustcompare.model import Clustering, validate


def random_partition(rng, n):
    return rng.integers(0, rng.integers(1, n + 1), size=n)


class TestOmega:
    def test_identical_partitions(self):
        c = Clustering.from_labels([0, 0, 1, 1, 2])
        assert omega_index(c, c) == 1.0

    def test_identical_overlapping(self):
        c = validate([{0, 1, 2}, {2, 3}, {1, 2, 3}], 5)
        assert omega_index(c, c) == 1.0

    def test_small_overlap_example(self):
        a = validate([{0, 1}, {1, 2}], 3)
        b = validate([{0, 1, 2}], 3)
        # observed 2/3, expected (2 * 3) / 9
        assert omega_index(a, b) == pytest.approx(0.0, abs=1e-12)
        assert omega_index(a, b) == pytest.approx(oracle.omega(a.to_sets(), b.to_sets(), 3), abs=1e-12)

    def test_equals_ari_on_partitions(self):
        rng = np.random.default_rng(2024)
        for _ in range(50):
            n = int(rng.integers(2, 51))
            la, lb = random_partition(rng, n), random_partition(rng, n)
            got = omega_index(Clustering.from_labels(la), Clustering.from_labels(lb))
            assert abs(got - oracle.ari(la.tolist(), lb.tolist())) <= 1e-9

    def test_matches_pair_enumeration(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            n = int(rng.integers(2, 25))
            a = oracle.random_clustering(rng, n)
            b = oracle.random_clustering(rng, n)
            assert omega_index(validate(a, n), validate(b, n)) == pytest.approx(oracle.omega(a, b, n), abs=1e-12)

    def test_degenerate_expectation(self):
        # every pair shares nothing in both: expected agreement is 1
        assert omega_index(validate([], 4), validate([], 4)) == 1.0
        assert omega_index(validate([{0, 1, 2, 3}], 4), validate([{0, 1, 2, 3}], 4)) == 1.0

    def test_requires_two_objects(self):
        with pytest.raises(ClusteringError):
            omega_index(validate([{0}], 1), validate([{0}], 1))

    def test_universe_mismatch(self):
        with pytest.raises(UniverseMismatch):
            omega_index(validate([{0}], 2), validate([{0}], 3))


class TestPairHistogram:
    def test_rows_sum_to_pair_count(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            n = int(rng.integers(2, 40))
            c = validate(oracle.random_clustering(rng, n), n)
            h = pair_coverage_histogram(c)
            assert h.sum() == n * (n - 1) // 2
            assert (h >= 0).all()

    def test_counts(self):
        h = pair_coverage_histogram(validate([{0, 1, 2}, {1, 2}], 4))
        assert h.tolist() == [3, 2, 1]


class TestOnmi:
    @pytest.mark.parametrize("variant", ["lfk", "mgh"])
    def test_identity(self, variant):
        rng = np.random.default_rng(3)
        for _ in range(30):
            n = int(rng.integers(2, 40))
            sets = oracle.random_clustering(rng, n)
            if not sets:
                continue
            c = validate(sets, n)
            assert onmi(c, c, variant) == 1.0

    def test_crossed_partitions_lfk_zero(self):
        a = validate([{0, 1}, {2, 3}], 4)
        b = validate([{0, 2}, {1, 3}], 4)
        assert onmi_lfk(a, b) == pytest.approx(0.0, abs=1e-12)
        assert oracle.onmi_lfk(a.to_sets(), b.to_sets(), 4) == pytest.approx(0.0, abs=1e-12)

    def test_mgh_bounded(self):
        rng = np.random.default_rng(4)
        done = 0
        while done < 100:
            n = int(rng.integers(2, 60))
            a, b = oracle.random_clustering(rng, n), oracle.random_clustering(rng, n)
            if not a or not b:
                continue
            v = onmi_mgh(validate(a, n), validate(b, n))
            assert 0.0 <= v <= 1.0
            done += 1

    @pytest.mark.parametrize("variant", ["lfk", "mgh"])
    def test_matches_direct_formula(self, variant):
        ref = oracle.onmi_lfk if variant == "lfk" else oracle.onmi_mgh
        rng = np.random.default_rng(5)
        done = 0
        while done < 100:
            n = int(rng.integers(2, 40))
            a, b = oracle.random_clustering(rng, n), oracle.random_clustering(rng, n)
            if not a or not b:
                continue
            ca, cb = validate(a, n), validate(b, n)
            assert onmi(ca, cb, variant) == pytest.approx(ref(a, b, n), abs=1e-9)
            assert onmi(ca, cb, variant) == pytest.approx(onmi(cb, ca, variant), abs=1e-12)
            done += 1

    def test_empty_clustering_rejected(self):
        with pytest.raises(EmptyClustering):
            onmi_lfk(validate([], 3), validate([{0}], 3))

    def test_universe_spanning_clusters(self):
        full = validate([{0, 1, 2}], 3)
        assert onmi_mgh(full, full) == 1.0
        assert onmi_lfk(full, full) == 1.0
