"""Voronoi-style index answering exact d2 nearest-neighbor queries.

Construction: build the compressed quadtree of the input cells, refine
it by inserting the horizontal neighbors of every occupied box (for
compressed nodes both the outer and the inner box contribute), then
annotate the refined tree bottom-up with the highest input per subtree
and top-down with the nearest input to every box center.  Each node's
region is: the box center alone (ordinary), everything on or below the
box (leaf), or everything on or below the outer box but not the inner
one (compressed).  Representatives are the node's nearest input plus,
for leaf and compressed regions, the highest input of every compressed
node of the unrefined tree whose box touches the region.  A query
locates its region and takes the exact-d2 argmin over representatives,
ties to the smallest input index.

Queries whose x-projection leaves the unit box, or that sit above the
root level, return the highest input point outright.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .hyperbolic import NormalizeTransform, normalize
from .metrics import d2
from .quadtree import COMPRESSED, LEAF, ORDINARY, QuadNode, QuadTree, shadow_within
from .tiling import CellId, HPoint, ancestor_at, cell_of, horizontal_neighbors

_MARGIN_NOTE = "input x-projections must lie in [1/4, 1/2] per axis"


def _within_margin(cell: CellId) -> bool:
    """Center x-coordinates in [1/4, 1/2] per axis, checked exactly."""
    if cell.level == 0:
        return all(k == 0 for k in cell.coords)
    t = -1 - cell.level
    return all((1 << t) <= 2 * k + 1 <= (1 << (t + 1)) for k in cell.coords)


def _highest_key(points: list[CellId]):
    def key(i: int):
        return (-points[i].level, i)

    return key


def fill_highest(tree: QuadTree) -> None:
    """Bottom-up pass: h = highest-level input per subtree, ties by index."""
    points = tree.points
    key = _highest_key(points)

    def visit(node: QuadNode) -> int | None:
        best = node.stored_index
        for ch in node.children:
            sub = visit(ch)
            if sub is not None and (best is None or key(sub) < key(best)):
                best = sub
        node.h_index = best
        return best

    visit(tree.root)


def refine(tree: QuadTree) -> QuadTree:
    """Insert the horizontal neighbors of every occupied box.

    Returns a new tree over the same points; the input tree is left
    untouched.  Boxes that would leave the root shadow are skipped: the
    [1/4, 1/2] margin precondition makes them empty anyway.
    """
    if not tree.points:
        raise ValueError("refinement needs a nonempty point set")
    for c in tree._index_of:
        if not _within_margin(c):
            raise ValueError(f"{c!r} violates the margin precondition: {_MARGIN_NOTE}")
    refined = QuadTree(tree.dim, tree.points)
    targets = [node.cell for node in tree.iter_nodes() if node.count > 0]
    for cell in targets:
        for nb in horizontal_neighbors(cell):
            if nb.level <= 0 and shadow_within(nb, tree.root_cell):
                refined.insert_box(nb)
    return refined


def _candidate(best, idx: int | None, origin: CellId, points: list[CellId]):
    if idx is None:
        return best
    dist = d2(origin, points[idx])
    if best is None or (dist, idx) < best:
        return (dist, idx)
    return best


def annotate(tree: QuadTree) -> None:
    """Fill h and n2 on every node of a refined tree.

    n2 minimizes exact d2 from the box center over four candidate
    groups: the parent's n2, the subtree's highest input, the highest
    inputs under the box's horizontal neighbors, and - when the parent
    sits more than one level up - the highest inputs under neighbors of
    every ancestor inside the compressed gap.
    """
    fill_highest(tree)
    points = tree.points
    root = tree.root
    if root.h_index is None:
        raise ValueError("annotate needs at least one stored input")
    root.n2_index = root.h_index  # every input lies on or below the root

    def neighbor_candidates(best, cell: CellId, origin: CellId):
        for nb in horizontal_neighbors(cell):
            if nb.level <= 0 and shadow_within(nb, tree.root_cell):
                best = _candidate(best, tree.highest_under(nb), origin, points)
        return best

    stack = [root]
    while stack:
        node = stack.pop()
        for ch in reversed(node.children):
            stack.append(ch)
        if node is root:
            continue
        origin = node.cell
        best = _candidate(None, node.parent.n2_index, origin, points)
        best = _candidate(best, node.h_index, origin, points)
        best = neighbor_candidates(best, origin, origin)
        for lev in range(origin.level + 1, node.parent.cell.level):
            best = neighbor_candidates(best, ancestor_at(origin, lev), origin)
        node.n2_index = best[1]


def _touches_boundary(inner_box: CellId, outer_box: CellId) -> bool:
    """Does a box nested inside another touch its boundary?"""
    shift = outer_box.level - inner_box.level
    for ki, ko in zip(inner_box.coords, outer_box.coords):
        if ki == (ko << shift) or ki + 1 == ((ko + 1) << shift):
            return True
    return False


def _adjacent_to_region(box: CellId, outer: CellId, inner: CellId) -> bool:
    """Adjacency of a box to the annular region between two nested boxes."""
    from .spanner import box_adjacent

    if box == inner:
        return True  # fills the hole, touching the region's inner boundary
    if shadow_within(box, inner):
        return _touches_boundary(box, inner)
    if shadow_within(box, outer) or shadow_within(outer, box):
        return False  # overlaps the annulus interior, or swallows it all
    return box_adjacent(box, outer)


def select_representatives(refined: QuadTree, base: QuadTree) -> None:
    """Attach representative input indices to every refined node.

    Leaf and compressed regions collect the highest input of every
    compressed node of the unrefined tree whose gap can host the far
    end of a query's bridge: nodes whose box touches the region, and
    nodes whose box strictly contains it while their child box does not
    (the region then sits inside that node's annular gap).  A compressed
    region also keeps its own child's highest input, covering bridges
    that land inside its own gap.
    """
    from .spanner import box_adjacent

    fill_highest(base)
    base_compressed = [
        n for n in base.iter_nodes() if n.kind == COMPRESSED and n.count > 0
    ]
    for node in refined.iter_nodes():
        if node.kind == ORDINARY:
            node.reps = [node.n2_index]
            continue
        reps = {node.n2_index}
        inner = node.children[0].cell if node.kind == COMPRESSED else None
        if inner is not None and node.children[0].h_index is not None:
            reps.add(node.children[0].h_index)
        for nu in base_compressed:
            if nu.h_index is None:
                continue
            if shadow_within(node.cell, nu.cell) and node.cell != nu.cell:
                if not shadow_within(node.cell, nu.children[0].cell):
                    reps.add(nu.h_index)
            elif inner is None:
                if box_adjacent(nu.cell, node.cell):
                    reps.add(nu.h_index)
            elif _adjacent_to_region(nu.cell, node.cell, inner):
                reps.add(nu.h_index)
        node.reps = sorted(reps)


@dataclass
class AvdIndex:
    """Refined, annotated tree plus everything a query needs."""

    tree: QuadTree
    transform: NormalizeTransform | None
    highest_index: int
    source_kind: str  # "discrete" | "continuous"

    @property
    def points(self) -> list[CellId]:
        return self.tree.points

    def region_of(self, q: CellId) -> QuadNode:
        """The unique node whose Voronoi region contains the cell center."""
        node = self.tree.root
        while True:
            if node.kind == LEAF:
                return node
            if node.kind == COMPRESSED:
                child = node.children[0]
                if q.level <= child.cell.level and shadow_within(q, child.cell):
                    node = child
                    continue
                return node
            if node.cell.level == q.level:
                return node
            node = self.tree.nodes_by_cell[ancestor_at(q, node.cell.level - 1)]

    def is_out_of_range(self, q: CellId) -> bool:
        return q.level > 0 or not shadow_within(q, self.tree.root_cell)

    def to_json(self) -> str:
        data = self.tree.to_dict()
        extras = []
        for node in self.tree.iter_nodes():
            extras.append({"h": node.h_index, "n2": node.n2_index, "reps": node.reps})
        data["annotations"] = extras
        data["highest_index"] = self.highest_index
        data["source_kind"] = self.source_kind
        data["transform"] = (
            {"scale": self.transform.scale, "shift": list(self.transform.shift)}
            if self.transform is not None
            else None
        )
        return json.dumps(data, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "AvdIndex":
        data = json.loads(text)
        tree = QuadTree.from_dict(data)
        for node, extra in zip(tree.iter_nodes(), data["annotations"]):
            node.h_index = extra["h"]
            node.n2_index = extra["n2"]
            node.reps = extra["reps"]
        t = data["transform"]
        transform = NormalizeTransform(t["scale"], tuple(t["shift"])) if t else None
        return cls(tree, transform, data["highest_index"], data["source_kind"])


def build_avd(points: list[HPoint] | list[CellId]) -> AvdIndex:
    """Index a point set; continuous inputs are normalized and embedded."""
    if not points:
        raise ValueError("cannot index an empty point set")
    if isinstance(points[0], HPoint):
        transform, moved = normalize(points)
        cells = [cell_of(p) for p in moved]
        source = "continuous"
    else:
        transform, cells = None, list(points)
        source = "discrete"
    base = QuadTree(cells[0].dim, cells)
    refined = refine(base)
    annotate(refined)
    select_representatives(refined, base)
    return AvdIndex(refined, transform, refined.root.h_index, source)


def query(ix: AvdIndex, q: CellId) -> int:
    """Index of the exact d2-nearest input, ties to the smallest index."""
    if ix.is_out_of_range(q):
        return ix.highest_index
    node = ix.region_of(q)
    points = ix.points
    best = None
    for idx in node.reps:
        dist = d2(q, points[idx])
        if best is None or (dist, idx) < best:
            best = (dist, idx)
    return best[1]


def query_hyperbolic(ix: AvdIndex, q: HPoint) -> int:
    """Approximate nearest neighbor for a continuous query point."""
    if ix.transform is None:
        raise ValueError("index was built from discrete cells; no transform stored")
    return query(ix, cell_of(ix.transform.apply(q)))
