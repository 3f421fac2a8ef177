"""Exact discrete nearest neighbors and approximate continuous ones."""

import random

from halfspace import HPoint, build_avd, hyperbolic_distance, query, query_hyperbolic
from halfspace.oracle import nn_bruteforce
from halfspace.sampling import sample_cells, sample_margin_cells

rng = random.Random(11)

# Discrete sites: queries return the exact nearest input under d2, ties
# to the smallest index; brute force agrees everywhere.
sites = sample_margin_cells(rng, 2, 24, min_level=-7)
ix = build_avd(sites)
nodes = list(ix.tree.iter_nodes())
print("sites:", len(set(sites)), "regions:", len(nodes))
print("max representatives per region:", max(len(nd.reps) for nd in nodes))

agree = 0
for _ in range(500):
    q = sample_cells(rng, 2, 1, min_level=-8)[0]
    agree += query(ix, q) == nn_bruteforce(sites, q, "d2")
print("agreement with brute force: 500 /", agree)

# Continuous sites: the same index answers within an additive window of
# the true nearest distance; the observed error is far below the bound.
pts = [HPoint((rng.uniform(-3, 3),), rng.uniform(0.05, 1.8)) for _ in range(32)]
cix = build_avd(pts)
worst = 0.0
for _ in range(800):
    q = HPoint((rng.uniform(-4, 4),), rng.uniform(0.05, 2.5))
    got = query_hyperbolic(cix, q)
    ref = nn_bruteforce(pts, q, "dH")
    worst = max(worst, hyperbolic_distance(q, pts[got]) - hyperbolic_distance(q, pts[ref]))
print("\ncontinuous queries: worst additive error", round(worst, 5))

# Far-away queries short-circuit to the highest site.
far = HPoint((40.0,), 1.0)
print("far query ->", query_hyperbolic(cix, far), "(the highest site's index)")
