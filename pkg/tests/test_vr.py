import math
from itertools import combinations

import numpy as np
import pytest
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from oracle import oracle_barcode, sorted_bars
from phlandmarks.core import PointCloud, pairwise_distances
from phlandmarks.vr import (
    barcode,
    build_vr_filtration,
    compute_persistence,
    finite_bars,
    rips_barcode,
)

INF = math.inf
SQRT2 = math.sqrt(2.0)


def dmat_of(pts):
    return pairwise_distances(PointCloud(np.asarray(pts, dtype=float)))


def two_point_dmat(d=1.0):
    return np.array([[0.0, d], [d, 0.0]])


def equilateral_dmat(side=1.0):
    d = np.full((3, 3), side)
    np.fill_diagonal(d, 0.0)
    return d


def unit_square_dmat():
    return dmat_of([[0, 0], [1, 0], [0, 1], [1, 1]])


def full_barcode(dmat, max_dim=3, eps=None):
    eps = float(dmat.max()) if eps is None else eps
    filt = build_vr_filtration(dmat, max_dim, eps)
    return barcode(compute_persistence(filt), filt)


class TestBuildFiltration:
    def test_two_points(self):
        filt = build_vr_filtration(two_point_dmat(), 3, 2.0)
        assert [s.vertices for s in filt.simplices] == [(0,), (1,), (0, 1)]
        assert [s.value for s in filt.simplices] == [0.0, 0.0, 1.0]

    def test_equilateral_full(self):
        filt = build_vr_filtration(equilateral_dmat(), 3, 1.0)
        dims = [s.dim for s in filt.simplices]
        assert dims.count(0) == 3 and dims.count(1) == 3 and dims.count(2) == 1
        assert filt.simplices[-1].value == 1.0  # the triangle enters at the side length

    def test_equilateral_below_scale(self):
        filt = build_vr_filtration(equilateral_dmat(), 3, 0.5)
        assert len(filt) == 3
        assert all(s.dim == 0 for s in filt.simplices)

    def test_max_dim_validated(self):
        with pytest.raises(ValueError):
            build_vr_filtration(two_point_dmat(), 4, 1.0)
        with pytest.raises(ValueError):
            build_vr_filtration(two_point_dmat(), 0, 1.0)

    def test_face_ordering_and_values(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            d = dmat_of(rng.uniform(-1, 1, size=(7, 3)))
            filt = build_vr_filtration(d, 3, float(d.max()) * 0.8)
            pos = filt.index_of()
            for s in filt.simplices:
                if s.dim == 0:
                    assert s.value == 0.0
                    continue
                assert s.value == max(d[a, b] for a, b in combinations(s.vertices, 2))
                for face in s.faces():
                    assert pos[face] < pos[s.vertices]
                    assert filt.simplices[pos[face]].value <= s.value


class TestComputePersistence:
    def test_single_vertex(self):
        filt = build_vr_filtration(np.zeros((1, 1)), 1, 0.0)
        pairing = compute_persistence(filt)
        assert pairing.pairs == ()
        assert pairing.essential == (0,)

    def test_two_points_hand_reduction(self):
        bc = full_barcode(two_point_dmat(), eps=2.0)
        assert sorted(bc.bars(0)) == [(0.0, 1.0), (0.0, INF)]

    def test_unit_square_dim1(self):
        bc = full_barcode(unit_square_dmat())
        assert bc.bars(1) == [(1.0, SQRT2)]

    def test_equilateral_dim1_empty(self):
        bc = full_barcode(equilateral_dmat())
        assert bc.bars(1) == []


class TestBarcodeOp:
    def test_dims_filter(self):
        filt = build_vr_filtration(unit_square_dmat(), 3, SQRT2)
        pairing = compute_persistence(filt)
        bc = barcode(pairing, filt, dims={1})
        assert bc.bars(0) == [] and bc.bars(1) == [(1.0, SQRT2)]
        with pytest.raises(ValueError):
            barcode(pairing, filt, dims={3})

    def test_zero_length_dropped_on_duplicates(self):
        d = dmat_of([[0, 0], [0, 0], [1, 0]])
        bc = full_barcode(d)
        assert sorted(bc.bars(0)) == [(0.0, 1.0), (0.0, INF)]


class TestFiniteBars:
    def test_two_point_dim0(self):
        assert finite_bars(full_barcode(two_point_dmat(), eps=2.0), 0) == [(0.0, 1.0)]

    def test_single_vertex_empty(self):
        filt = build_vr_filtration(np.zeros((1, 1)), 1, 0.0)
        bc = barcode(compute_persistence(filt), filt)
        assert finite_bars(bc, 0) == []

    def test_square_dim2_empty(self):
        assert finite_bars(full_barcode(unit_square_dmat()), 2) == []

    def test_dim_validated(self):
        with pytest.raises(ValueError):
            finite_bars(full_barcode(two_point_dmat()), 3)


class TestOracleEquivalence:
    def test_random_clouds_match_oracle(self):
        rng = np.random.default_rng(42)
        for trial in range(60):
            npts = int(rng.integers(2, 9))
            dim = int(rng.integers(2, 4))
            pts = rng.uniform(-1, 1, size=(npts, dim))
            if trial % 6 == 0 and npts > 2:
                pts[1] = pts[0]
            d = dmat_of(pts)
            eps = float(d.max()) * [1.0, 0.7, 0.4][trial % 3]
            md = 3 if trial % 4 else 2
            want = oracle_barcode(d, eps, max_dim=md)
            filt = build_vr_filtration(d, md, eps)
            got_pub = barcode(compute_persistence(filt), filt)
            got_fast = rips_barcode(d, md, eps)
            for hd in (0, 1, 2):
                w = sorted_bars(want, hd)
                assert sorted(got_pub.bars(hd)) == w
                assert sorted(got_fast.bars(hd)) == w


class TestEngineProperties:
    def test_scaling_multiplies_bars(self):
        rng = np.random.default_rng(3)
        d = dmat_of(rng.uniform(-1, 1, size=(12, 3)))
        eps = float(d.max())
        c = 3.0
        base = rips_barcode(d, 3, eps)
        scaled = rips_barcode(d * c, 3, eps * c)
        for dim in (0, 1, 2):
            a = sorted(base.bars(dim))
            b = sorted(scaled.bars(dim))
            assert len(a) == len(b)
            for (b1, d1), (b2, d2) in zip(a, b):
                assert b2 == pytest.approx(b1 * c, rel=1e-12, abs=1e-300)
                if d1 == INF:
                    assert d2 == INF
                else:
                    assert d2 == pytest.approx(d1 * c, rel=1e-12)

    def test_infinite_dim0_bars_count_components(self):
        rng = np.random.default_rng(9)
        for _ in range(15):
            pts = rng.uniform(-1, 1, size=(20, 2))
            d = dmat_of(pts)
            eps = float(rng.uniform(0.1, 0.8))
            bc = rips_barcode(d, 2, eps, dims={0})
            adj = csr_matrix((d <= eps).astype(int))
            n_comp = connected_components(adj, directed=False)[0]
            assert bc.n_infinite(0) == n_comp

    def test_full_simplex_no_infinite_high_bars(self):
        rng = np.random.default_rng(21)
        for npts in range(2, 9):
            d = dmat_of(rng.uniform(-1, 1, size=(npts, 3)))
            bc = rips_barcode(d, 3, float(d.max()))
            assert bc.n_infinite(1) == 0
            assert bc.n_infinite(2) == 0
            assert bc.n_infinite(0) == 1

    def test_engines_agree_on_larger_cloud(self):
        rng = np.random.default_rng(31)
        d = dmat_of(rng.uniform(-1, 1, size=(14, 3)))
        eps = float(d.max()) * 0.75
        filt = build_vr_filtration(d, 3, eps)
        pub = barcode(compute_persistence(filt), filt)
        fast = rips_barcode(d, 3, eps)
        for dim in (0, 1, 2):
            assert sorted(pub.bars(dim)) == sorted(fast.bars(dim))

    def test_dims_restriction_consistent(self):
        rng = np.random.default_rng(33)
        d = dmat_of(rng.uniform(-1, 1, size=(12, 3)))
        eps = float(d.max())
        whole = rips_barcode(d, 3, eps)
        only1 = rips_barcode(d, 2, eps, dims={1})
        assert sorted(only1.bars(1)) == sorted(whole.bars(1))
        assert only1.bars(0) == [] and only1.bars(2) == []
