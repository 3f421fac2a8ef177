"""The two discrete distances and the shape of their shortest paths."""

from halfspace import CellId, d1, d2, d2_path
from halfspace.layouts import TIGHT_GAP_PAIR, TRIANGLE_VIOLATION_TRIPLE

p, q = CellId(0, (0,)), CellId(0, (5,))

# d1 counts arbitrary moves; five cells over is cheaper to cross by
# climbing two levels, stepping once, and coming back down.
print("d1:", d1(p, q))

# d2 allows at most one horizontal move, so both endpoints climb to the
# lowest pair of neighboring ancestors and cross there (the "bridge").
path = d2_path(p, q)
print("d2:", d2(p, q), "bridge at level", path.bridge_level)
print("path cells:", " -> ".join(str(c) for c in path.cells()))

# d2 never exceeds d1 + 2, and the gap really is attained:
a, b = TIGHT_GAP_PAIR
print("\ntight pair:", a, b, "d1 =", d1(a, b), "d2 =", d2(a, b))

# ... but d2 is only a semi-metric: three cells in a row violate the
# triangle inequality.
x, y, z = TRIANGLE_VIOLATION_TRIPLE
print(
    "triangle check:",
    f"d2(x,y) = {d2(x, y)}, d2(y,z) = {d2(y, z)}, d2(x,z) = {d2(x, z)}",
    "(1 + 1 < 3)",
)

# Between ancestor-related cells both distances are the level gap.
anc = CellId(3, (0,))
dsc = CellId(0, (7,))
print("\nancestor pair:", d1(dsc, anc), d2(dsc, anc))
