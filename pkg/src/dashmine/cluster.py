"""Density-based clustering of feature matrices, implemented from scratch.

The pipeline follows the classic hierarchical density-based scheme:

1. core distance of each point = distance to its ``min_samples``-th
   nearest neighbor (the point itself counts as the first),
2. mutual reachability d_mr(a, b) = max(core(a), core(b), d(a, b)),
3. minimum spanning tree of the complete mutual-reachability graph
   (Prim's algorithm over row blocks, no spatial index),
4. single-linkage hierarchy from the MST edges in ascending weight order,
5. condensation of the hierarchy at ``min_cluster_size``,
6. excess-of-mass cluster selection by stability,
7. points under no selected cluster are labeled noise (-1).

Distances are exact O(n^2); determinism everywhere via ascending-index
tie-breaking.  A spatial index would speed up step 1-3 on large corpora
but is deliberately left out.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from .errors import FewerThanTwoClusters, NonFiniteInput, TooFewRows

NOISE = -1


@dataclass(frozen=True)
class ClusterParams:
    """``min_samples`` defaults to ``min_cluster_size`` when omitted."""

    min_cluster_size: int = 250
    min_samples: int | None = None

    def __post_init__(self):
        if self.min_cluster_size < 2:
            raise ValueError("min_cluster_size must be >= 2")
        if self.min_samples is not None and self.min_samples < 1:
            raise ValueError("min_samples must be >= 1")

    @property
    def effective_min_samples(self) -> int:
        return self.min_samples if self.min_samples is not None else self.min_cluster_size


@dataclass
class SilhouetteScores:
    per_cluster: dict[int, float]
    overall: float


@dataclass
class ClusterResult:
    """Flat labels plus the condensed hierarchy they were selected from.

    ``labels`` holds -1 for noise and dense ids 0..K-1 otherwise;
    ``condensed_tree`` rows are (parent, child, lambda, child_size) with
    point children < n and cluster ids >= n.
    """

    labels: np.ndarray
    stabilities: dict[int, float]
    condensed_tree: list[tuple[int, int, float, int]]
    selected: tuple[int, ...]
    cluster_ids: dict[int, int]  # label -> condensed-tree cluster id
    n_points: int
    silhouette: SilhouetteScores | None = None

    @property
    def n_clusters(self) -> int:
        return len(self.selected)


def _as_matrix(matrix: Any) -> np.ndarray:
    X = np.asarray(matrix, dtype=float)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    if not np.isfinite(X).all():
        raise NonFiniteInput("matrix contains NaN or infinite values")
    return X


def _row_distances(X: np.ndarray, i: int) -> np.ndarray:
    diff = X - X[i]
    return np.sqrt(np.einsum("ij,ij->i", diff, diff))


def _core_distances(X: np.ndarray, min_samples: int) -> np.ndarray:
    n = X.shape[0]
    core = np.empty(n)
    for i in range(n):
        d = _row_distances(X, i)
        core[i] = np.partition(d, min_samples - 1)[min_samples - 1]
    return core


def _mutual_reachability_mst(X: np.ndarray, core: np.ndarray) -> np.ndarray:
    """Prim's MST over the implicit mutual-reachability graph.

    Returns (n-1, 3) rows (a, b, weight).  The next vertex is always the
    lowest-index minimum, so the tree is deterministic under ties.
    """
    n = X.shape[0]
    in_tree = np.zeros(n, dtype=bool)
    best_w = np.full(n, np.inf)
    best_src = np.zeros(n, dtype=np.intp)
    edges = np.empty((n - 1, 3))
    current = 0
    in_tree[0] = True
    for k in range(n - 1):
        d = _row_distances(X, current)
        reach = np.maximum(np.maximum(core, core[current]), d)
        closer = ~in_tree & (reach < best_w)
        best_w[closer] = reach[closer]
        best_src[closer] = current
        candidate = np.where(in_tree, np.inf, best_w)
        nxt = int(np.argmin(candidate))
        edges[k] = (best_src[nxt], nxt, best_w[nxt])
        in_tree[nxt] = True
        current = nxt
    return edges


def _single_linkage(mst_edges: np.ndarray) -> np.ndarray:
    """Union-find dendrogram: rows (left, right, distance, size), cluster
    ids n..2n-2 assigned in merge order."""
    order = np.argsort(mst_edges[:, 2], kind="stable")
    edges = mst_edges[order]
    n = edges.shape[0] + 1
    parent = np.arange(2 * n - 1, dtype=np.intp)
    size = np.ones(2 * n - 1, dtype=np.intp)

    def find(x: int) -> int:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    Z = np.empty((n - 1, 4))
    for i in range(n - 1):
        ra = find(int(edges[i, 0]))
        rb = find(int(edges[i, 1]))
        new = n + i
        Z[i] = (ra, rb, edges[i, 2], size[ra] + size[rb])
        parent[ra] = parent[rb] = new
        size[new] = size[ra] + size[rb]
    return Z


def _bfs_nodes(Z: np.ndarray, start: int) -> list[int]:
    n = Z.shape[0] + 1
    result = []
    frontier = [start]
    while frontier:
        result.extend(frontier)
        frontier = [
            int(child)
            for node in frontier
            if node >= n
            for child in Z[node - n, 0:2]
        ]
    return result


def _condense(Z: np.ndarray, min_cluster_size: int) -> list[tuple[int, int, float, int]]:
    """Collapse the dendrogram into clusters of >= min_cluster_size.

    Walking from the root, a split where both sides are big creates two
    new cluster ids; a split where one side is small sheds that side's
    points at the split's lambda (1/distance) while the big side keeps
    the current cluster id.  The root is relabeled n.
    """
    n = Z.shape[0] + 1
    root = 2 * n - 2
    relabel = np.empty(2 * n - 1, dtype=np.intp)
    relabel[root] = n
    next_label = n + 1
    ignore = np.zeros(2 * n - 1, dtype=bool)
    rows: list[tuple[int, int, float, int]] = []

    for node in _bfs_nodes(Z, root):
        if node < n or ignore[node]:
            continue
        left, right = int(Z[node - n, 0]), int(Z[node - n, 1])
        dist = Z[node - n, 2]
        lam = 1.0 / dist if dist > 0.0 else np.inf
        left_size = int(Z[left - n, 3]) if left >= n else 1
        right_size = int(Z[right - n, 3]) if right >= n else 1
        label = int(relabel[node])

        if left_size >= min_cluster_size and right_size >= min_cluster_size:
            for child, child_size in ((left, left_size), (right, right_size)):
                relabel[child] = next_label
                rows.append((label, next_label, lam, child_size))
                next_label += 1
        else:
            shed = []
            if left_size < min_cluster_size:
                shed.append(left)
            else:
                relabel[left] = label
            if right_size < min_cluster_size:
                shed.append(right)
            else:
                relabel[right] = label
            for side in shed:
                for sub in _bfs_nodes(Z, side):
                    ignore[sub] = True
                    if sub < n:
                        rows.append((label, sub, lam, 1))
    return rows


def _compute_stability(
    rows: Sequence[tuple[int, int, float, int]], n: int
) -> dict[int, float]:
    """Excess of mass per cluster: sum over members of
    (lambda at which the member leaves - lambda at cluster birth)."""
    birth: dict[int, float] = {n: 0.0}
    for _, child, lam, _ in rows:
        if child >= n:
            birth[child] = lam
    stability: dict[int, float] = {}
    for parent, _, lam, size in rows:
        stability[parent] = stability.get(parent, 0.0) + (lam - birth[parent]) * size
    return stability


def _select_eom(
    rows: Sequence[tuple[int, int, float, int]],
    stability: dict[int, float],
    n: int,
) -> set[int]:
    """Bottom-up excess-of-mass selection.

    A cluster is kept when its own stability is at least the combined
    stability of its selected children; otherwise it passes the combined
    value upward.  The root is never a candidate, except as a fallback
    when nothing else is selectable (e.g. all points identical), in
    which case the result is a single all-points cluster.
    """
    children_of: dict[int, list[int]] = {}
    for parent, child, _, _ in rows:
        if child >= n:
            children_of.setdefault(parent, []).append(child)

    candidates = sorted((c for c in stability if c != n), reverse=True)
    selected = {c: True for c in candidates}
    running = dict(stability)
    for node in candidates:
        combined = sum(running[c] for c in children_of.get(node, ()))
        if combined > running[node]:
            selected[node] = False
            running[node] = combined
        else:
            frontier = list(children_of.get(node, ()))
            while frontier:
                child = frontier.pop()
                selected[child] = False
                frontier.extend(children_of.get(child, ()))
    chosen = {c for c, keep in selected.items() if keep}
    if not chosen:
        chosen = {n}
    return chosen


def _assign_labels(
    rows: Sequence[tuple[int, int, float, int]],
    selected: set[int],
    n: int,
) -> tuple[np.ndarray, dict[int, int]]:
    parent_of = {child: parent for parent, child, _, _ in rows}
    label_of_cluster = {cid: label for label, cid in enumerate(sorted(selected))}
    labels = np.full(n, NOISE, dtype=int)
    for point in range(n):
        node = parent_of.get(point)
        while node is not None and node not in selected:
            node = parent_of.get(node)
        if node is not None:
            labels[point] = label_of_cluster[node]
    cluster_ids = {label: cid for cid, label in label_of_cluster.items()}
    return labels, cluster_ids


def hdbscan(matrix: Any, params: ClusterParams = ClusterParams()) -> ClusterResult:
    """Cluster rows of ``matrix``; see the module docstring for the steps.

    Raises :class:`TooFewRows` when the matrix has fewer rows than
    ``min_cluster_size`` (or than ``min_samples``) and
    :class:`NonFiniteInput` on NaN/inf values.
    """
    X = _as_matrix(matrix)
    n = X.shape[0]
    min_samples = params.effective_min_samples
    if n < params.min_cluster_size:
        raise TooFewRows(f"{n} rows < min_cluster_size={params.min_cluster_size}")
    if n < min_samples:
        raise TooFewRows(f"{n} rows < min_samples={min_samples}")

    core = _core_distances(X, min_samples)
    mst = _mutual_reachability_mst(X, core)
    Z = _single_linkage(mst)
    rows = _condense(Z, params.min_cluster_size)
    stability = _compute_stability(rows, n)
    selected = _select_eom(rows, stability, n)
    labels, cluster_ids = _assign_labels(rows, selected, n)
    stabilities = {label: float(stability[cid]) for label, cid in cluster_ids.items()}
    return ClusterResult(
        labels=labels,
        stabilities=stabilities,
        condensed_tree=rows,
        selected=tuple(sorted(selected)),
        cluster_ids=cluster_ids,
        n_points=n,
    )


def silhouette(matrix: Any, labels: Sequence[int]) -> SilhouetteScores:
    """Mean silhouette per cluster and overall, noise rows excluded.

    s(i) = (b - a) / max(a, b) with a = mean intra-cluster distance and
    b = smallest mean distance to another cluster; singleton clusters
    score 0, as does the degenerate all-zero case.
    """
    X = _as_matrix(matrix)
    labels = np.asarray(labels, dtype=int)
    if labels.shape[0] != X.shape[0]:
        raise ValueError("labels length does not match matrix rows")
    cluster_labels = sorted(int(c) for c in np.unique(labels) if c != NOISE)
    if len(cluster_labels) < 2:
        raise FewerThanTwoClusters("silhouette needs at least two non-noise clusters")

    members = {c: np.flatnonzero(labels == c) for c in cluster_labels}
    scores = np.zeros(X.shape[0])
    for c in cluster_labels:
        idx = members[c]
        own_size = idx.shape[0]
        for i in idx:
            d = _row_distances(X, int(i))
            if own_size == 1:
                scores[i] = 0.0
                continue
            a = (d[idx].sum()) / (own_size - 1)  # exclude self (distance 0)
            b = min(d[members[o]].mean() for o in cluster_labels if o != c)
            denom = max(a, b)
            scores[i] = (b - a) / denom if denom > 0 else 0.0

    per_cluster = {c: float(scores[members[c]].mean()) for c in cluster_labels}
    pooled = np.concatenate([members[c] for c in cluster_labels])
    return SilhouetteScores(per_cluster=per_cluster, overall=float(scores[pooled].mean()))


def export_dendrogram(result: ClusterResult) -> dict[str, Any]:
    """Condensed cluster tree as a plot-ready JSON document.

    Nodes are the condensed cluster ids (points excluded), topologically
    sorted parents-first; each node carries its stability, size and
    whether excess-of-mass selection kept it.
    """
    n = result.n_points
    size_of: dict[int, int] = {n: n}
    parent_of: dict[int, int] = {}
    birth: dict[int, float] = {n: 0.0}
    for parent, child, lam, child_size in result.condensed_tree:
        if child >= n:
            parent_of[child] = parent
            size_of[child] = child_size
            birth[child] = lam
    stability = _compute_stability(result.condensed_tree, n)
    selected = set(result.selected)

    node_ids = sorted(size_of)  # ids increase root-first, so this is topological
    nodes = [
        {
            "id": cid,
            "size": size_of[cid],
            "stability": stability.get(cid, 0.0),
            "selected": cid in selected,
        }
        for cid in node_ids
    ]
    edges = [
        {"parent": parent_of[cid], "child": cid, "lambda": birth[cid]}
        for cid in node_ids
        if cid in parent_of
    ]
    return {"root": n, "nodes": nodes, "edges": edges}


def sweep_min_cluster_size(
    matrix: Any, sizes: Sequence[int], min_samples: int | None = None
) -> list[dict[str, Any]]:
    """Grid sweep over min_cluster_size: cluster count and coverage each."""
    results = []
    for size in sizes:
        outcome = hdbscan(matrix, ClusterParams(min_cluster_size=size, min_samples=min_samples))
        covered = int((outcome.labels != NOISE).sum())
        results.append(
            {
                "min_cluster_size": int(size),
                "n_clusters": outcome.n_clusters,
                "coverage": covered / outcome.labels.shape[0],
            }
        )
    return results
