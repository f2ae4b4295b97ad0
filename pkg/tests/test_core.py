import math

import numpy as np
import pytest

from phlandmarks.core import (
    Barcode,
    PointCloud,
    delta_neighborhood,
    euclidean_distance,
    pairwise_distances,
)


def line_cloud(*xs):
    return PointCloud(np.array(xs, dtype=float).reshape(-1, 1))


class TestEuclideanDistance:
    def test_identity(self):
        assert euclidean_distance((0, 0, 0), (0, 0, 0)) == 0.0

    def test_unit_axis_step(self):
        assert euclidean_distance((0, 0, 0), (1, 0, 0)) == 1.0

    def test_3_4_5_triangle(self):
        assert euclidean_distance((1, 2), (4, 6)) == 5.0

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            euclidean_distance((0, 0), (0, 0, 0))

    def test_symmetry_random(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            a, b = rng.normal(size=(2, 4))
            assert euclidean_distance(a, b) == euclidean_distance(b, a)


class TestPointCloud:
    def test_requires_points(self):
        with pytest.raises(ValueError):
            PointCloud(np.empty((0, 3)))

    def test_labels_length_checked(self):
        with pytest.raises(ValueError):
            PointCloud(np.zeros((3, 2)), labels=[True, False])

    def test_arrays_frozen(self):
        cloud = PointCloud(np.zeros((3, 2)), labels=[True, False, True])
        with pytest.raises(ValueError):
            cloud.points[0, 0] = 1.0
        with pytest.raises(ValueError):
            cloud.labels[0] = False

    def test_rejects_nan(self):
        with pytest.raises(ValueError):
            PointCloud(np.array([[0.0, np.nan]]))


class TestPairwiseDistances:
    def test_single_point(self):
        d = pairwise_distances(PointCloud(np.array([[1.0, 2.0]])))
        assert d.shape == (1, 1) and d[0, 0] == 0.0

    def test_collinear_hand_values(self):
        d = pairwise_distances(line_cloud(0, 1, 3))
        assert d[0, 1] == 1.0 and d[0, 2] == 3.0 and d[1, 2] == 2.0

    def test_symmetric_zero_diagonal(self):
        rng = np.random.default_rng(0)
        cloud = PointCloud(rng.normal(size=(40, 3)))
        d = pairwise_distances(cloud)
        assert np.array_equal(d, d.T)
        assert np.all(np.diag(d) == 0.0)
        assert np.all(d >= 0.0)


class TestDeltaNeighborhood:
    def test_hand_example(self):
        cloud = line_cloud(0, 1, 3)
        assert delta_neighborhood(cloud, 0, 1.0).tolist() == [1]

    def test_empty_ball(self):
        cloud = line_cloud(0, 1, 3)
        assert delta_neighborhood(cloud, 0, 0.5).size == 0

    def test_closed_ball_boundary(self):
        cloud = line_cloud(0, 0.5, 1)
        assert delta_neighborhood(cloud, 1, 0.5).tolist() == [0, 2]

    def test_index_out_of_range(self):
        with pytest.raises(ValueError):
            delta_neighborhood(line_cloud(0, 1), 2, 1.0)

    def test_nonpositive_delta(self):
        with pytest.raises(ValueError):
            delta_neighborhood(line_cloud(0, 1), 0, 0.0)

    def test_matches_precomputed_matrix(self):
        rng = np.random.default_rng(5)
        cloud = PointCloud(rng.normal(size=(30, 3)))
        d = pairwise_distances(cloud)
        for y in range(cloud.n_points):
            a = delta_neighborhood(cloud, y, 0.8)
            b = delta_neighborhood(cloud, y, 0.8, dist=d)
            assert np.array_equal(a, b)

    def test_monotone_in_delta(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            cloud = PointCloud(rng.uniform(-1, 1, size=(25, 3)))
            deltas = np.sort(rng.uniform(0.1, 2.0, size=4))
            for y in range(0, 25, 5):
                prev: set = set()
                for delta in deltas:
                    cur = set(delta_neighborhood(cloud, y, float(delta)).tolist())
                    assert prev <= cur
                    prev = cur

    def test_permutation_consistency(self):
        rng = np.random.default_rng(13)
        pts = rng.uniform(-1, 1, size=(20, 2))
        cloud = PointCloud(pts)
        perm = rng.permutation(20)
        permuted = PointCloud(pts[perm])
        # permuted[i] = pts[perm[i]]; inverse maps original index -> new slot
        inv = np.empty(20, dtype=int)
        inv[perm] = np.arange(20)
        for y in range(20):
            orig = delta_neighborhood(cloud, y, 0.7)
            new = delta_neighborhood(permuted, inv[y], 0.7)
            assert set(inv[orig].tolist()) == set(new.tolist())

    def test_scale_invariance(self):
        # scaling by a power of two is float-exact
        rng = np.random.default_rng(17)
        pts = rng.uniform(-1, 1, size=(25, 3))
        cloud = PointCloud(pts)
        scaled = PointCloud(pts * 4.0)
        for y in range(25):
            a = delta_neighborhood(cloud, y, 0.6)
            b = delta_neighborhood(scaled, y, 2.4)
            assert np.array_equal(a, b)


class TestBarcode:
    def test_zero_length_dropped(self):
        bc = Barcode()
        bc.add(0, 0.5, 0.5)
        assert bc.bars(0) == []

    def test_death_before_birth_rejected(self):
        bc = Barcode()
        with pytest.raises(ValueError):
            bc.add(0, 1.0, 0.5)

    def test_finite_and_infinite_queries(self):
        bc = Barcode()
        bc.add(0, 0.0, 1.0)
        bc.add(0, 0.0, math.inf)
        bc.add(1, 1.0, 1.5)
        assert bc.finite(0) == [(0.0, 1.0)]
        assert bc.n_infinite(0) == 1
        assert bc.max_finite_persistence((0, 1)) == 1.0
        assert bc.max_finite_persistence((2,)) == 0.0
