"""Walk through the binary tiling: cells, moves, and where points land."""

from halfspace import CellId, HPoint, cell_of, center, children, horizontal_neighbors, parent

# A cell is a level (its dyadic scale) plus integer coordinates per
# horizontal axis.  Width doubles with each level.
c = CellId(0, (5,))
print("cell:", c, "spans x in [5,6], z in [1,2]")
print("parent:", parent(c))
print("children:", children(c))
print("neighbors:", horizontal_neighbors(c))

# In three dimensions a cell has 4 children and 8 horizontal neighbors.
c3 = CellId(0, (2, -1))
print("\nD=3 cell:", c3)
print("children:", len(children(c3)), "neighbors:", len(horizontal_neighbors(c3)))

# The center sits at (k + 1/2) * width horizontally and 1.5 * width up.
print("\ncenter of", c, "is", center(c))

# Any point of the halfspace belongs to exactly one cell once boundary
# points are pushed to the higher level (and to the right along x).
for p in (HPoint((0.3,), 1.5), HPoint((0.0,), 2.0), HPoint((0.999,), 3.9)):
    print("point", p, "-> cell", cell_of(p))

# Round trip: the center of a cell maps back to its cell.
deep = CellId(-7, (91,))
assert cell_of(center(deep)) == deep
print("\ncenter/cell round trip holds for", deep)
