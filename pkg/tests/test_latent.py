import csv

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from epaae.corpus import Corpus
from epaae.latent import LatentIndex, build_index, knn, label_flip_metrics, pairwise_distances, pca_project, write_pca_csv

from conftest import TINY_TEXTS, tiny_model


def line_index(positions, labels):
    vecs = np.array(positions, dtype=float).reshape(-1, 1)
    return LatentIndex(vecs, list(labels), [f"s{i}" for i in range(len(vecs))])


def brute_knn(vectors, query, k):
    scored = sorted((float(np.sqrt(((v - query) ** 2).sum())), i) for i, v in enumerate(vectors))
    return [(i, d) for d, i in scored[:k]]


class TestKnn:
    def test_query_equal_to_row_comes_first(self):
        index = line_index([3.0, 1.0, 2.0], [0, 0, 0])
        assert knn(index, np.array([1.0]), 1) == [(1, 0.0)]

    def test_hand_placed_points(self):
        pts = np.array([[0, 0], [1, 0], [0, 2], [-1, -1], [3, 3]], dtype=float)
        index = LatentIndex(pts, [0] * 5, list("abcde"))
        q = np.array([0.2, 0.1])
        assert knn(index, q, 5) == brute_knn(pts, q, 5)

    def test_ties_go_to_lower_row(self):
        index = line_index([1.0, -1.0, 1.0], [0, 0, 0])
        assert [r for r, _ in knn(index, np.array([0.0]), 3)] == [0, 1, 2]

    def test_k_out_of_range(self):
        index = line_index([0.0, 1.0], [0, 1])
        for k in (0, 3):
            with pytest.raises(ValueError):
                knn(index, np.array([0.0]), k)

    @settings(max_examples=40, deadline=None)
    @given(arrays(np.float64, (12, 3), elements=st.floats(-5, 5)), st.integers(1, 12))
    def test_matches_brute_force(self, pts, k):
        index = LatentIndex(pts, [0] * 12, [str(i) for i in range(12)])
        got = knn(index, pts[0], k)
        dists = [d for _, d in got]
        assert dists == sorted(dists)
        assert got[0][1] == 0.0
        np.testing.assert_allclose(dists, [d for _, d in brute_knn(pts, pts[0], k)], atol=1e-12)


class TestLabelFlip:
    def test_constructed_neighbourhood(self):
        # row 0 sees [same, same, diff] at [2, 3, 5]; the other rows are worked by hand too
        index = line_index([0.0, 2.0, 3.0, 5.0], [0, 0, 0, 1])
        l2, hops = label_flip_metrics(index, "label")
        assert l2 == pytest.approx((5 + 3 + 2 + 2) / 4)
        assert hops == pytest.approx((3 + 3 + 2 + 1) / 4)

    def test_two_points_opposite_labels(self):
        index = line_index([0.0, 4.0], [0, 1])
        assert label_flip_metrics(index, "decision") == (4.0, 1.0)

    def test_style_projection(self):
        # labels 0 and 2 share decision bit 0, so only row 2 (label 1) differs
        index = line_index([0.0, 1.0, 5.0], [0, 2, 1])
        _, hops = label_flip_metrics(index, "decision")
        assert hops == pytest.approx((2 + 2 + 1) / 3)

    def test_single_style_is_an_error(self):
        with pytest.raises(ValueError):
            label_flip_metrics(line_index([0.0, 1.0], [0, 2]), "decision")


class TestPca:
    def test_plane_in_16d_reconstructs(self):
        rng = np.random.default_rng(0)
        basis, _ = np.linalg.qr(rng.normal(size=(16, 2)))
        coords = rng.normal(size=(40, 2)) * [3.0, 1.0]
        x = coords @ basis.T + 5.0
        proj = pca_project(x, 2)
        assert proj.shape == (40, 2)
        np.testing.assert_allclose(pairwise_distances(proj), pairwise_distances(x), atol=1e-8)

    def test_matches_eigendecomposition(self):
        x = np.random.default_rng(1).normal(size=(5, 5))
        xc = x - x.mean(axis=0)
        vals, vecs = np.linalg.eigh(xc.T @ xc)
        oracle = xc @ vecs[:, np.argsort(vals)[::-1][:2]]
        proj = pca_project(x, 2)
        for j in range(2):
            sign = np.sign(proj[:, j] @ oracle[:, j])
            np.testing.assert_allclose(proj[:, j], sign * oracle[:, j], atol=1e-8)

    def test_row_count_and_determinism(self, tmp_path):
        x = np.random.default_rng(2).normal(size=(30, 6))
        np.testing.assert_array_equal(pca_project(x, seed=3), pca_project(x, seed=3))
        write_pca_csv(pca_project(x), list(range(30)), tmp_path / "p.csv")
        rows = list(csv.reader(open(tmp_path / "p.csv")))
        assert rows[0] == ["x", "y", "label"] and len(rows) == 31

    def test_too_few_rows(self):
        with pytest.raises(ValueError):
            pca_project(np.zeros((2, 4)), 2)


def test_build_index_is_ordered_and_repeatable(tmp_path):
    model = tiny_model()
    corpus = Corpus.from_texts(TINY_TEXTS, [0, 5, 2])
    a, b = build_index(corpus, model), build_index(corpus, model)
    np.testing.assert_array_equal(a.vectors, b.vectors)
    assert a.sentences == TINY_TEXTS and a.labels == [0, 5, 2]
    a.to_csv(tmp_path / "z.csv")
    rows = list(csv.reader(open(tmp_path / "z.csv")))
    assert rows[0][:3] == ["sentence", "label", "z_0"] and len(rows) == 4
    np.testing.assert_array_equal([float(v) for v in rows[2][2:]], a.vectors[1])


def test_index_validation():
    with pytest.raises(ValueError):
        LatentIndex(np.zeros((2, 3)), [0], ["a", "b"])
