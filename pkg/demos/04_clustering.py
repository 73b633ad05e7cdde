"""
Density-based clustering of feature matrices
=============================================

The clusterer builds a mutual-reachability minimum spanning tree,
condenses the single-linkage hierarchy at the minimum cluster size,
selects clusters by stability (excess of mass), and labels everything
else noise (-1).  Three synthetic feature blobs plus background scatter
make the behavior visible without a real corpus.
"""

import numpy as np

from dashmine import ClusterParams, export_dendrogram, hdbscan, silhouette

rng = np.random.default_rng(7)
centers = np.array([[0.0, 0.0], [60.0, 0.0], [0.0, 60.0]])
blobs = [rng.normal(c, 1.0, size=(100, 2)) for c in centers]
background = rng.uniform(-150, 210, size=(30, 2))
X = np.vstack(blobs + [background])

result = hdbscan(X, ClusterParams(min_cluster_size=15))
print(f"{result.n_clusters} clusters over {len(X)} rows")
for label, stability in sorted(result.stabilities.items()):
    size = int((result.labels == label).sum())
    print(f"  cluster {label}: {size} members, stability {stability:.1f}")
print(f"  noise: {int((result.labels == -1).sum())} rows "
      f"({np.mean(result.labels[300:] == -1):.0%} of the background)")

scores = silhouette(X, result.labels)
print(f"\nsilhouette overall: {scores.overall:.3f}")
for label, score in sorted(scores.per_cluster.items()):
    print(f"  cluster {label}: {score:.3f}")

# the condensed tree is a plot-ready JSON document
tree = export_dendrogram(result)
print(f"\ncondensed tree: {len(tree['nodes'])} cluster nodes, {len(tree['edges'])} edges")
for node in tree["nodes"]:
    marker = "*" if node["selected"] else " "
    print(f"  {marker} node {node['id']}: size {node['size']}, stability {node['stability']:.1f}")

# sweeping the minimum cluster size shows how coverage trades off
from dashmine import sweep_min_cluster_size

print("\nmin_cluster_size sweep:")
for row in sweep_min_cluster_size(X, [10, 25, 50, 100]):
    print(f"  size {row['min_cluster_size']:>3}: {row['n_clusters']} clusters, "
          f"coverage {row['coverage']:.0%}")
