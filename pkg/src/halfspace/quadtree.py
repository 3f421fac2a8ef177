"""Compressed quadtree over quadtree boxes of the root cell's shadow.

Cells of the tiling at level <= 0 inside the root cell [0,1]^(D-1) x
[1,2] project to dyadic boxes of [0,1]^(D-1); the tree stores a set of
such boxes (not raw points), so one input can sit above another.  Node
kinds:

* ordinary  -- two or more occupied child cells; all 2^(D-1) child cells
  are materialized so that leaf boxes and compressed regions exactly
  partition the root shadow,
* compressed -- one occupied child cell; the single tree child jumps to
  the lowest box whose subtree holds the same inputs, and the node owns
  the annular region between the two boxes,
* leaf -- no tree children; holds at most one input (the box itself).

A node whose own box is an input and whose other inputs all fall in one
child cell does not fit the ordinary/compressed split; it is
materialized as ordinary (see the build notes in the repo docs).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .tiling import CellId, ancestor_at, children, is_ancestor_or_self, parent

ORDINARY = "ordinary"
COMPRESSED = "compressed"
LEAF = "leaf"


def root_cell(dim: int) -> CellId:
    """The root cell [0,1]^(D-1) x [1,2]."""
    if dim < 2:
        raise ValueError("dimension must be at least 2")
    return CellId(0, (0,) * (dim - 1))


def shadow_within(inner: CellId, outer: CellId) -> bool:
    """True if the x-projection of ``inner`` lies inside that of ``outer``."""
    return is_ancestor_or_self(outer, inner)


def meet(a: CellId, b: CellId) -> CellId:
    """The lowest box whose shadow contains the shadows of both cells."""
    if a.level < b.level:
        a = ancestor_at(a, b.level)
    elif b.level < a.level:
        b = ancestor_at(b, a.level)
    while a != b:
        a, b = parent(a), parent(b)
    return a


@dataclass(eq=False)
class QuadNode:
    cell: CellId
    kind: str
    parent: "QuadNode | None" = None
    children: list["QuadNode"] = field(default_factory=list)
    stored_index: int | None = None  # input index when the box itself is an input
    count: int = 0  # inputs in this subtree, own box included
    h_index: int | None = None  # highest input below (filled by the Voronoi pass)
    n2_index: int | None = None  # nearest input to the box center (same pass)
    reps: list[int] | None = None  # representative input indices (same pass)

    def __repr__(self) -> str:
        return f"QuadNode({self.cell!r}, {self.kind}, count={self.count})"


class QuadTree:
    """Compressed quadtree storing input cells as boxes.

    ``points`` keeps the caller's list verbatim (duplicates included);
    each distinct cell is owned by its first index so distance ties
    resolve to the smallest index everywhere downstream.
    """

    def __init__(self, dim: int, points: list[CellId]):
        self.dim = dim
        self.points = list(points)
        self.root_cell = root_cell(dim)
        self._index_of: dict[CellId, int] = {}
        for i, c in enumerate(points):
            if c.dim != dim:
                raise ValueError(f"point {c!r} has dimension {c.dim}, expected {dim}")
            if c.level > 0 or not shadow_within(c, self.root_cell):
                raise ValueError(f"point {c!r} lies outside the root cell's shadow")
            self._index_of.setdefault(c, i)
        distinct = sorted(self._index_of, key=self._index_of.get)
        self.nodes_by_cell: dict[CellId, QuadNode] = {}
        self.root = self._build(self.root_cell, distinct)
        self._refresh_counts(self.root)

    # -- construction -------------------------------------------------

    def _new_node(self, cell: CellId, kind: str) -> QuadNode:
        node = QuadNode(cell, kind, stored_index=self._index_of.get(cell))
        self.nodes_by_cell[cell] = node
        return node

    def _build(self, cell: CellId, boxes: list[CellId]) -> QuadNode:
        below = [b for b in boxes if b != cell]
        if not below:
            return self._new_node(cell, LEAF)
        groups: dict[CellId, list[CellId]] = {}
        for b in below:
            groups.setdefault(ancestor_at(b, cell.level - 1), []).append(b)
        stored_here = cell in self._index_of
        if len(groups) == 1 and not stored_here:
            (target,) = groups
            m = below[0] if len(below) == 1 else meet(*below[:2])
            for b in below[2:]:
                m = meet(m, b)
            node = self._new_node(cell, COMPRESSED)
            child = self._build(m, below)
            child.parent = node
            node.children.append(child)
            return node
        node = self._new_node(cell, ORDINARY)
        for child_cell in children(cell):
            child = self._build(child_cell, groups.get(child_cell, []))
            child.parent = node
            node.children.append(child)
        return node

    def _refresh_counts(self, node: QuadNode) -> int:
        node.count = (1 if node.stored_index is not None else 0) + sum(
            self._refresh_counts(ch) for ch in node.children
        )
        return node.count

    # -- traversal ----------------------------------------------------

    def iter_nodes(self):
        """Depth-first preorder; children in construction order."""
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def __len__(self) -> int:
        return sum(1 for _ in self.iter_nodes())

    # -- queries ------------------------------------------------------

    def _check_in_root(self, box: CellId) -> None:
        if box.dim != self.dim:
            raise ValueError(f"box dimension {box.dim} does not match tree dimension {self.dim}")
        if box.level > 0 or not shadow_within(box, self.root_cell):
            raise ValueError(f"box {box!r} is outside the root cell's shadow")

    def locate(self, x: tuple[float, ...]) -> QuadNode:
        """The leaf or compressed node whose box or region contains ``x``."""
        if len(x) != self.dim - 1:
            raise ValueError(f"expected {self.dim - 1} coordinates, got {len(x)}")
        if not all(0.0 <= v < 1.0 for v in x):
            raise ValueError(f"point {x} is outside the root shadow [0,1)^(D-1)")
        node = self.root
        while True:
            if node.kind == LEAF:
                return node
            if node.kind == COMPRESSED:
                child = node.children[0]
                if self._shadow_holds(child.cell, x):
                    node = child
                else:
                    return node  # x is in the annular region
                continue
            lev = node.cell.level - 1
            key = CellId(lev, tuple(math.floor(math.ldexp(v, -lev)) for v in x))
            node = self.nodes_by_cell[key]

    @staticmethod
    def _shadow_holds(cell: CellId, x: tuple[float, ...]) -> bool:
        lev = cell.level
        return all(math.floor(math.ldexp(v, -lev)) == k for v, k in zip(x, cell.coords))

    def cell_query(self, box: CellId) -> tuple[QuadNode | None, QuadNode | None]:
        """Largest stored box inside ``box`` and smallest stored box containing it."""
        self._check_in_root(box)
        return self._largest_contained(box), self._smallest_containing(box)

    def _largest_contained(self, box: CellId) -> QuadNode | None:
        node = self.root
        if shadow_within(node.cell, box):
            return node
        while True:
            if node.kind == LEAF:
                return None
            if node.kind == COMPRESSED:
                child = node.children[0]
                if shadow_within(child.cell, box):
                    return child
                if shadow_within(box, child.cell):
                    node = child
                    continue
                return None  # box lies in the annulus; nothing stored inside
            key = ancestor_at(box, node.cell.level - 1)
            node = self.nodes_by_cell[key]
            if shadow_within(node.cell, box):
                return node

    def _smallest_containing(self, box: CellId) -> QuadNode:
        node = self.root
        while True:
            if node.kind == LEAF or node.cell.level == box.level:
                return node
            if node.kind == COMPRESSED:
                child = node.children[0]
                if shadow_within(box, child.cell):
                    node = child
                    continue
                return node
            node = self.nodes_by_cell[ancestor_at(box, node.cell.level - 1)]

    # -- subtree content without materialized nodes --------------------

    def node_for(self, box: CellId) -> QuadNode | None:
        return self.nodes_by_cell.get(box)

    def subtree_count(self, box: CellId) -> int:
        """Number of inputs whose box lies on or below an arbitrary cell."""
        self._check_in_root(box)
        node = self.nodes_by_cell.get(box)
        if node is not None:
            return node.count
        holder = self._smallest_containing(box)
        if holder.kind != COMPRESSED:
            return 0
        child = holder.children[0]
        if shadow_within(child.cell, box):
            return child.count
        return 0

    def highest_under(self, box: CellId) -> int | None:
        """Index of the highest-level input on or below ``box`` (smallest
        index among ties); requires the Voronoi pass to have filled h."""
        self._check_in_root(box)
        node = self.nodes_by_cell.get(box)
        if node is not None:
            return node.h_index
        holder = self._smallest_containing(box)
        if holder.kind != COMPRESSED:
            return None
        child = holder.children[0]
        if shadow_within(child.cell, box):
            return child.h_index
        return None

    # -- insertion ----------------------------------------------------

    def insert_box(self, box: CellId) -> QuadNode:
        """Ensure ``box`` is a node; splits compressed gaps as needed."""
        self._check_in_root(box)
        existing = self.nodes_by_cell.get(box)
        if existing is not None:
            return existing
        holder = self._smallest_containing(box)
        if holder.kind == LEAF:
            node = self._attach_chain(holder, box)
        else:  # compressed; ordinary holders always descend further
            node = self._split_compressed(holder, box)
        return node

    def _attach_chain(self, parent_node: QuadNode, box: CellId) -> QuadNode:
        """Hang ``box`` below a node that currently has no children."""
        node = self._new_node(box, LEAF)
        node.parent = parent_node
        parent_node.children.append(node)
        parent_node.kind = COMPRESSED
        return node

    def _split_compressed(self, holder: QuadNode, box: CellId) -> QuadNode:
        child = holder.children[0]
        if shadow_within(child.cell, box):
            # box sits on the chain between holder and its child: splice
            node = self._new_node(box, COMPRESSED)
            holder.children = [node]
            node.parent = holder
            node.children = [child]
            child.parent = node
            node.count = child.count + (1 if node.stored_index is not None else 0)
            return node
        # box lies in the annulus: branch at the meet of box and child
        # (which can be the holder cell itself)
        branch_cell = meet(box, child.cell)
        if branch_cell == holder.cell:
            branch = holder
        else:
            branch = self._new_node(branch_cell, ORDINARY)
            branch.parent = holder
            holder.children = [branch]
            branch.count = child.count
        old_child = child
        branch.kind = ORDINARY
        branch.children = []
        target: QuadNode | None = None
        for cc in children(branch.cell):
            if shadow_within(old_child.cell, cc):
                sub = self._chain_to(cc, old_child)
            elif shadow_within(box, cc):
                if box == cc:
                    sub = self._new_node(cc, LEAF)
                    target = sub
                else:
                    sub = self._new_node(cc, COMPRESSED)
                    inner = self._new_node(box, LEAF)
                    inner.parent = sub
                    sub.children = [inner]
                    target = inner
            else:
                sub = self._new_node(cc, LEAF)
            sub.parent = branch
            branch.children.append(sub)
        branch.count = (1 if branch.stored_index is not None else 0) + sum(
            ch.count for ch in branch.children
        )
        node = branch
        while node.parent is not None:
            node = node.parent
            node.count = (1 if node.stored_index is not None else 0) + sum(
                ch.count for ch in node.children
            )
        assert target is not None
        return target

    def _chain_to(self, cell: CellId, descendant: QuadNode) -> QuadNode:
        """A node for ``cell`` holding an existing subtree below it."""
        if descendant.cell == cell:
            return descendant
        node = self._new_node(cell, COMPRESSED)
        node.children = [descendant]
        descendant.parent = node
        node.count = descendant.count + (1 if node.stored_index is not None else 0)
        return node

    # -- serialization -------------------------------------------------

    def to_dict(self) -> dict:
        order: dict[int, int] = {}
        nodes = []
        for i, node in enumerate(self.iter_nodes()):
            order[id(node)] = i
            nodes.append(node)
        return {
            "dim": self.dim,
            "points": [[c.level, list(c.coords)] for c in self.points],
            "nodes": [
                {
                    "cell": [n.cell.level, list(n.cell.coords)],
                    "kind": n.kind,
                    "parent": order[id(n.parent)] if n.parent is not None else None,
                    "stored": n.stored_index,
                }
                for n in nodes
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "QuadTree":
        dim = data["dim"]
        points = [CellId(lev, tuple(ks)) for lev, ks in data["points"]]
        tree = cls.__new__(cls)
        tree.dim = dim
        tree.points = points
        tree.root_cell = root_cell(dim)
        tree._index_of = {}
        for i, c in enumerate(points):
            tree._index_of.setdefault(c, i)
        tree.nodes_by_cell = {}
        built: list[QuadNode] = []
        for spec in data["nodes"]:
            cell = CellId(spec["cell"][0], tuple(spec["cell"][1]))
            node = QuadNode(cell, spec["kind"], stored_index=spec["stored"])
            tree.nodes_by_cell[cell] = node
            if spec["parent"] is not None:
                node.parent = built[spec["parent"]]
                node.parent.children.append(node)
            built.append(node)
        tree.root = built[0]
        tree._refresh_counts(tree.root)
        return tree


def build_quadtree(points: list[CellId]) -> QuadTree:
    """Compressed quadtree over the given cells (dimension from the first)."""
    if not points:
        raise ValueError("cannot build a quadtree over an empty point list")
    return QuadTree(points[0].dim, points)
