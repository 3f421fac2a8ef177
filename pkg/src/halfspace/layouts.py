"""Small frozen point layouts used by demos, rendering, and regression tests."""

from .tiling import CellId

# Six cells whose d2-path overlay exercises every spanner feature at once:
# exactly six Steiner vertices appear; the path between inputs 0 and 1
# bends at two Steiner vertices (a full bridge); the path from input 1 to
# input 2 bends at a single Steiner vertex because input 1 sits at bridge
# level itself; inputs 4 and 5 route to input 2 through a shared Steiner
# vertex two levels above input 5 (a weight-2 vertical edge); and the
# graph distance between inputs 2 and 5 is 6 = d1 + 2, meeting the
# additive bound with equality.
SPANNER_DEMO_POINTS = (
    CellId(-3, (5,)),
    CellId(-4, (0,)),
    CellId(-5, (3,)),
    CellId(-2, (3,)),
    CellId(-4, (5,)),
    CellId(-4, (4,)),
)

# Graph distance between inputs 2 and 5 in the overlay spanner.
SPANNER_DEMO_DISTANCE_2_5 = 6

# Three cells in a row: adjacent pairs are one move apart under d2 while
# the outer pair needs three moves, breaking the triangle inequality.
TRIANGLE_VIOLATION_TRIPLE = (
    CellId(0, (0,)),
    CellId(0, (1,)),
    CellId(0, (2,)),
)

# Same-level pair at horizontal distance 3 whose single-bend path needs
# d1 + 2 moves: the additive bound is tight.
TIGHT_GAP_PAIR = (CellId(0, (1,)), CellId(0, (4,)))
