"""The 2-additive Steiner spanner on the frozen six-point layout."""

from halfspace import build_spanner, d1, d2
from halfspace.layouts import SPANNER_DEMO_POINTS
from halfspace.oracle import dijkstra

pts = list(SPANNER_DEMO_POINTS)
graph = build_spanner(pts)

print("inputs:", sum(1 for v in graph.vertices if v.kind == "input"))
print("steiner vertices:", graph.n_steiner)
for v in graph.vertices:
    if v.kind == "steiner":
        print("  ", v.cell)
print("edges:")
for u, v, w in graph.edges:
    print(f"  {graph.vertices[u].cell} -- {graph.vertices[v].cell}  weight {w:g}")

# Graph distances never undercut d1 and never exceed d1 + 2; between
# inputs 2 and 5 the bound is met with equality.
adj = graph.adjacency()
src = graph.vertex_of_cell[pts[2]]
dist = dijkstra(len(graph.vertices), adj, src)
for j, p in enumerate(pts):
    ds = dist[graph.vertex_of_cell[p]]
    print(
        f"input 2 -> input {j}: graph {ds:g}, d1 {d1(pts[2], p)}, d2 {d2(pts[2], p)}"
    )
