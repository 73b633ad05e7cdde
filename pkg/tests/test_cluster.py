from __future__ import annotations

import math

import numpy as np
import pytest

from dashmine.cluster import (
    ClusterParams,
    _mutual_reachability_mst,
    _core_distances,
    export_dendrogram,
    hdbscan,
    silhouette,
    sweep_min_cluster_size,
)
from dashmine.errors import FewerThanTwoClusters, NonFiniteInput, TooFewRows

from conftest import blob_matrix, canonical_partition
from oracles import brute_silhouette, mutual_reachability_matrix, prim_mst_weights

CENTERS_3 = [[0.0, 0.0], [60.0, 0.0], [0.0, 60.0]]


def _agreement(labels, truth) -> float:
    """Best-case fraction of blob points whose label matches truth under
    the optimal label bijection (greedy by overlap)."""
    labels = np.asarray(labels)
    truth = np.asarray(truth)
    blob_rows = truth >= 0
    pairs: dict[tuple[int, int], int] = {}
    for l, t in zip(labels[blob_rows], truth[blob_rows]):
        pairs[(int(l), int(t))] = pairs.get((int(l), int(t)), 0) + 1
    used_l: set[int] = set()
    used_t: set[int] = set()
    matched = 0
    for (l, t), count in sorted(pairs.items(), key=lambda kv: -kv[1]):
        if l == -1 or l in used_l or t in used_t:
            continue
        used_l.add(l)
        used_t.add(t)
        matched += count
    return matched / int(blob_rows.sum())


def test_three_blobs_recovered_exactly():
    X, truth = blob_matrix(0, CENTERS_3, per_blob=100)
    result = hdbscan(X, ClusterParams(min_cluster_size=15))
    assert result.n_clusters == 3
    assert _agreement(result.labels, truth) >= 0.95
    assert not (result.labels == -1).any()  # no blob member is noise


def test_identical_points_form_single_cluster():
    X = np.zeros((30, 3))
    result = hdbscan(X, ClusterParams(min_cluster_size=5))
    assert result.n_clusters == 1
    assert set(result.labels.tolist()) == {0}


def test_background_scatter_is_mostly_noise():
    X, truth = blob_matrix(1, CENTERS_3, per_blob=100, background=30)
    result = hdbscan(X, ClusterParams(min_cluster_size=15))
    background = result.labels[truth == -1]
    assert result.n_clusters == 3
    assert np.mean(background == -1) >= 0.8


def test_exact_agreement_with_reference_implementation():
    sklearn_cluster = pytest.importorskip("sklearn.cluster")

    def make(seed):
        rng = np.random.default_rng(seed)
        k = int(rng.integers(2, 5))
        dim = int(rng.integers(2, 8))
        centers = rng.uniform(-100, 100, size=(k, dim))
        while (
            min(
                np.linalg.norm(a - b)
                for i, a in enumerate(centers)
                for b in centers[i + 1 :]
            )
            < 60
        ):
            centers = rng.uniform(-100, 100, size=(k, dim))
        sizes = rng.integers(60, 140, size=k)
        return np.vstack(
            [rng.normal(c, 1.0, size=(s, dim)) for c, s in zip(centers, sizes)]
        )

    for seed in (0, 1, 2, 3, 4):
        X = make(seed)
        mine = hdbscan(X, ClusterParams(min_cluster_size=15)).labels
        reference = sklearn_cluster.HDBSCAN(min_cluster_size=15, algorithm="brute").fit(X).labels_
        assert canonical_partition(mine) == canonical_partition(reference), f"seed {seed}"


def test_selected_cluster_sizes_respect_minimum():
    X, _ = blob_matrix(5, CENTERS_3, per_blob=80, background=40)
    params = ClusterParams(min_cluster_size=20)
    result = hdbscan(X, params)
    for label in range(result.n_clusters):
        assert int((result.labels == label).sum()) >= params.min_cluster_size


def test_labels_are_dense():
    X, _ = blob_matrix(6, CENTERS_3, per_blob=60, background=20)
    result = hdbscan(X, ClusterParams(min_cluster_size=15))
    non_noise = sorted(set(result.labels.tolist()) - {-1})
    assert non_noise == list(range(result.n_clusters))


def test_row_permutation_equivariance():
    X, _ = blob_matrix(7, CENTERS_3, per_blob=60)
    rng = np.random.default_rng(7)
    perm = rng.permutation(X.shape[0])
    base = hdbscan(X, ClusterParams(min_cluster_size=12)).labels
    permuted = hdbscan(X[perm], ClusterParams(min_cluster_size=12)).labels
    assert canonical_partition(base[perm]) == canonical_partition(permuted)


def test_euclidean_isometry_invariance():
    X, _ = blob_matrix(8, CENTERS_3, per_blob=60)
    theta = 0.7
    rotation = np.array(
        [[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]]
    )
    base = hdbscan(X, ClusterParams(min_cluster_size=12)).labels
    moved = hdbscan(X @ rotation.T + np.array([13.0, -4.5]), ClusterParams(min_cluster_size=12)).labels
    assert canonical_partition(base) == canonical_partition(moved)


def test_mst_matches_brute_force_prim():
    rng = np.random.default_rng(9)
    for n in (20, 60, 200):
        # 2D keeps float summation order identical on both routes
        X = rng.uniform(-50, 50, size=(n, 2))
        min_samples = 5
        core = _core_distances(X, min_samples)
        mst = _mutual_reachability_mst(X, core)
        weights = mutual_reachability_matrix(X.tolist(), min_samples)
        expected = prim_mst_weights(weights)
        assert sorted(mst[:, 2].tolist()) == expected
        assert math.fsum(mst[:, 2]) == math.fsum(expected)


def test_stability_dominates_selected_descendants():
    for seed in (10, 11, 12):
        X, _ = blob_matrix(seed, CENTERS_3, per_blob=80, background=30)
        result = hdbscan(X, ClusterParams(min_cluster_size=15))
        from dashmine.cluster import _compute_stability

        stability = _compute_stability(result.condensed_tree, result.n_points)
        children_of: dict[int, list[int]] = {}
        for parent, child, _, _ in result.condensed_tree:
            if child >= result.n_points:
                children_of.setdefault(parent, []).append(child)
        selected = set(result.selected)

        def selected_descendant_sum(node) -> float:
            total = 0.0
            for child in children_of.get(node, ()):
                if child in selected:
                    total += stability[child]
                else:
                    total += selected_descendant_sum(child)
            return total

        for cluster_id in selected:
            if cluster_id == result.n_points:  # fallback root has no competitor
                continue
            assert stability[cluster_id] >= selected_descendant_sum(cluster_id) - 1e-9


def test_too_few_rows_and_non_finite_errors():
    with pytest.raises(TooFewRows):
        hdbscan(np.zeros((3, 2)), ClusterParams(min_cluster_size=5))
    bad = np.zeros((10, 2))
    bad[4, 1] = np.nan
    with pytest.raises(NonFiniteInput):
        hdbscan(bad, ClusterParams(min_cluster_size=5))


def test_cluster_params_validation():
    with pytest.raises(ValueError):
        ClusterParams(min_cluster_size=1)
    with pytest.raises(ValueError):
        ClusterParams(min_cluster_size=5, min_samples=0)
    assert ClusterParams(min_cluster_size=9).effective_min_samples == 9


# --- silhouette ---------------------------------------------------------------


def test_two_tight_far_clusters_score_one():
    X = np.array([[0.0, 0.0]] * 3 + [[100.0, 0.0]] * 3)
    labels = [0, 0, 0, 1, 1, 1]
    scores = silhouette(X, labels)
    assert abs(scores.overall - 1.0) < 1e-6
    assert abs(scores.per_cluster[0] - 1.0) < 1e-6


def test_silhouette_matches_brute_force():
    rng = np.random.default_rng(13)
    for _ in range(5):
        n = int(rng.integers(20, 120))
        X = rng.normal(0, 10, size=(n, 3))
        labels = rng.integers(-1, 3, size=n)
        if len({c for c in labels.tolist() if c != -1}) < 2:
            labels[:2] = [0, 1]
        scores = silhouette(X, labels)
        expected = brute_silhouette(X.tolist(), labels.tolist())
        by_cluster: dict[int, list[float]] = {}
        for i, s in expected.items():
            by_cluster.setdefault(int(labels[i]), []).append(s)
        for c, values in by_cluster.items():
            assert abs(scores.per_cluster[c] - sum(values) / len(values)) < 1e-9
        assert abs(scores.overall - sum(expected.values()) / len(expected)) < 1e-9


def test_equidistant_point_scores_zero():
    X = np.array(
        [[0.0, 0.0]] * 3 + [[10.0, 0.0]] * 3 + [[5.0, 0.0]]
    )
    labels = [0, 0, 0, 1, 1, 1, 0]
    scores = silhouette(X, labels)
    expected = brute_silhouette(X.tolist(), labels)
    assert abs(expected[6]) < 1e-9


def test_silhouette_excludes_noise_and_needs_two_clusters():
    X = np.array([[0.0], [0.1], [50.0], [50.1], [999.0]])
    scores = silhouette(X, [0, 0, 1, 1, -1])
    assert set(scores.per_cluster) == {0, 1}
    with pytest.raises(FewerThanTwoClusters):
        silhouette(X, [0, 0, 0, 0, -1])


# --- dendrogram -----------------------------------------------------------------


def test_dendrogram_leaves_are_selected_clusters():
    X, _ = blob_matrix(14, CENTERS_3, per_blob=100)
    result = hdbscan(X, ClusterParams(min_cluster_size=15))
    tree = export_dendrogram(result)
    parents = {e["parent"] for e in tree["edges"]}
    leaves = {n["id"] for n in tree["nodes"]} - parents
    assert leaves == set(result.selected)
    assert len(tree["edges"]) == len(tree["nodes"]) - 1


def test_single_cluster_dendrogram_is_root_only():
    X = np.zeros((20, 2))
    result = hdbscan(X, ClusterParams(min_cluster_size=5))
    tree = export_dendrogram(result)
    assert len(tree["nodes"]) == 1
    assert tree["edges"] == []
    assert tree["nodes"][0]["id"] == tree["root"]


def test_dendrogram_is_topologically_sorted():
    X, _ = blob_matrix(15, CENTERS_3, per_blob=80, background=20)
    result = hdbscan(X, ClusterParams(min_cluster_size=15))
    tree = export_dendrogram(result)
    seen = set()
    order = [n["id"] for n in tree["nodes"]]
    parent_of = {e["child"]: e["parent"] for e in tree["edges"]}
    for node in order:
        if node in parent_of:
            assert parent_of[node] in seen
        seen.add(node)


def test_sweep_reports_counts_and_coverage():
    X, _ = blob_matrix(16, CENTERS_3, per_blob=60, background=30)
    rows = sweep_min_cluster_size(X, [10, 20, 40])
    assert [r["min_cluster_size"] for r in rows] == [10, 20, 40]
    for row in rows:
        assert 0.0 <= row["coverage"] <= 1.0
        assert row["n_clusters"] >= 1
