"""Tree shortcutting and the purely additive halfspace spanner."""

import math
import random

from halfspace import HPoint, build_hyperbolic_spanner, hyperbolic_distance, shortcut_forest
from halfspace.oracle import hop_bounded_distances
from halfspace.shortcut import reference_size

# Shortcut a 64-vertex path so any ancestor is at most k hops away.
n = 64
path = {i: (i + 1 if i + 1 < n else None) for i in range(n)}
for k in (1, 2, 3):
    cuts = shortcut_forest(path, k)
    print(f"k={k}: {cuts.total_edges} edges (reference n*lambda_k ~ {reference_size(k, n):.0f})")

# The hyperbolic spanner combines the shortcut forest with the discrete
# spanner's bridges and one anchor edge per point; every edge carries
# the true distance of its endpoints.
rng = random.Random(5)
pts = [HPoint((rng.uniform(0, 4),), rng.uniform(0.05, 1.9)) for _ in range(40)]
k = 2
graph = build_hyperbolic_spanner(pts, k)
print("\nvertices:", len(graph.vertices), "edges:", len(graph.edges))

adj = graph.adjacency()
vids = {v.input_index: v.id for v in graph.vertices if v.kind == "input"}
norm = {i: graph.vertices[vids[i]].point for i in vids}
worst = 0.0
budget = 2 * k + 3
for i in vids:
    dist = hop_bounded_distances(len(graph.vertices), adj, vids[i], budget)
    for j in vids:
        worst = max(worst, dist[vids[j]] - hyperbolic_distance(norm[i], norm[j]))
print(f"max additive error over all pairs with <= {budget} hops: {worst:.4f}")
print("k log D reference:", round(k * math.log(2), 4))
