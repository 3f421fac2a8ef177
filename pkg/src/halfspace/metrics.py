"""The two discrete distances on the binary tiling.

``d1`` counts arbitrary up/down/horizontal moves between cell centers
and is a metric.  ``d2`` is the length of the shortest path using at
most one horizontal move; it is only a semi-metric (the triangle
inequality can fail) but never exceeds ``d1 + 2``, and between any two
cells there is a unique d2-path: an up-run, at most one horizontal
"bridge" move, and a down-run.
"""

from __future__ import annotations

from dataclasses import dataclass

from .tiling import CellId, ancestor_at, is_ancestor_or_self, parent


@dataclass(frozen=True)
class D2Path:
    """The unique d2-path between two cells.

    ``apex_p`` tops the up-run from ``start``; ``apex_q`` tops the
    down-run into ``end``.  With a bridge the apexes are horizontal
    neighbors at the same level, otherwise they coincide and one
    endpoint is an ancestor-or-self of the other.
    """

    start: CellId
    end: CellId
    apex_p: CellId
    apex_q: CellId
    has_bridge: bool

    @property
    def length(self) -> int:
        up = self.apex_p.level - self.start.level
        down = self.apex_q.level - self.end.level
        return up + down + (1 if self.has_bridge else 0)

    @property
    def bridge_level(self) -> int:
        """Level of the bridge; for ancestor pairs, the level of the upper cell."""
        return self.apex_p.level

    def cells(self) -> list[CellId]:
        """The full cell sequence of the path, one move per step."""
        ups = [self.start]
        while ups[-1] != self.apex_p:
            ups.append(parent(ups[-1]))
        downs = [self.end]
        while downs[-1] != self.apex_q:
            downs.append(parent(downs[-1]))
        if self.has_bridge:
            return ups + downs[::-1]
        return ups + downs[-2::-1]


def _check_same_dim(p: CellId, q: CellId) -> None:
    if len(p.coords) != len(q.coords):
        raise ValueError(f"dimension mismatch: {p.dim} vs {q.dim}")


def lambda_(p: CellId, q: CellId) -> int:
    """Horizontal distance between same-level cells, in cell widths.

    Exactly max_j |k_j(p) - k_j(q)| in integer arithmetic.
    """
    _check_same_dim(p, q)
    if p.level != q.level:
        raise ValueError(f"lambda needs equal levels, got {p.level} and {q.level}")
    return max(abs(a - b) for a, b in zip(p.coords, q.coords))


def d1(p: CellId, q: CellId) -> int:
    """Minimum number of moves between two cell centers.

    A shortest path can be normalized to up-moves, then horizontal
    moves, then down-moves; this makes the distance computable by
    lifting the lower endpoint and then recursing on parents while the
    horizontal distance exceeds 4.  Iterative so deep level gaps never
    hit the recursion limit.
    """
    _check_same_dim(p, q)
    total = 0
    if p.level != q.level:
        lo, hi = (p, q) if p.level < q.level else (q, p)
        total = hi.level - lo.level
        p, q = ancestor_at(lo, hi.level), hi
    while True:
        lam = lambda_(p, q)
        if lam <= 4:
            return total + lam
        total += 2
        p, q = parent(p), parent(q)


def d2_path(p: CellId, q: CellId) -> D2Path:
    """The unique path from p to q with at most one horizontal move.

    Both endpoints climb to a common level, then in lockstep until the
    two ancestors are equal (ancestor/descendant case, no bridge) or
    horizontal neighbors (the bridge, found at the lowest such level).
    """
    _check_same_dim(p, q)
    a, b = p, q
    if a.level < b.level:
        a = ancestor_at(a, b.level)
    elif b.level < a.level:
        b = ancestor_at(b, a.level)
    if a == b:
        return D2Path(p, q, a, b, has_bridge=False)
    while lambda_(a, b) >= 2:
        a, b = parent(a), parent(b)
    # distinct children of one cell are horizontal neighbors, so the
    # climb stops at lambda == 1 before the chains can merge
    return D2Path(p, q, a, b, has_bridge=True)


def d2(p: CellId, q: CellId) -> int:
    """Length of the d2-path between p and q."""
    return d2_path(p, q).length


def bridge_level(p: CellId, q: CellId) -> int:
    """Level of the bridge of the d2-path, with the convention that an
    ancestor/descendant (or equal) pair reports the upper cell's level."""
    return d2_path(p, q).bridge_level


def bridge_level_estimate(p: CellId, q: CellId) -> int:
    """floor(log2 of the L-infinity distance between the two centers).

    Always within one of the true bridge level.  Computed from exact
    scaled-integer center differences, not floating log, so powers of
    two never round the wrong way.
    """
    _check_same_dim(p, q)
    if p == q or is_ancestor_or_self(p, q) or is_ancestor_or_self(q, p):
        raise ValueError("bridge level estimate needs a non-ancestor-related pair")
    m = min(p.level, q.level)
    # center x_j = (2k_j + 1) * 2^(level-1); rescale both to units of 2^(m-1)
    diff = 0
    for a, b in zip(p.coords, q.coords):
        v = abs(((2 * a + 1) << (p.level - m)) - ((2 * b + 1) << (q.level - m)))
        if v > diff:
            diff = v
    # distance = diff * 2^(m-1); floor(log2) = (m-1) + floor(log2 diff)
    return (m - 1) + (diff.bit_length() - 1)
