"""Binary tiling of the Poincare halfspace.

Space is tiled by the boxes

    [k_1*2^i, (k_1+1)*2^i] x ... x [k_{D-1}*2^i, (k_{D-1}+1)*2^i] x [2^i, 2^{i+1}]

with integer level ``i`` and integer coordinates ``k_j``.  A cell at
level ``i`` has one parent at level ``i+1``, ``2^(D-1)`` children and
``3^(D-1)-1`` horizontal neighbors (diagonals included).  Cell centers
are the vertices of the discrete models in :mod:`halfspace.metrics`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator


@dataclass(frozen=True, order=True)
class CellId:
    """A cell of the binary tiling: level plus D-1 integer coordinates.

    Coordinates are plain Python integers, so halving/doubling across
    deep level ranges never overflows.
    """

    level: int
    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.coords, tuple):
            object.__setattr__(self, "coords", tuple(self.coords))
        if len(self.coords) < 1:
            raise ValueError("a cell needs at least one horizontal coordinate (D >= 2)")

    @property
    def dim(self) -> int:
        """Ambient dimension D."""
        return len(self.coords) + 1

    def __repr__(self) -> str:
        ks = ",".join(str(k) for k in self.coords)
        return f"Cell({self.level};[{ks}])"


@dataclass(frozen=True)
class HPoint:
    """A point of the halfspace: D-1 horizontal coordinates and height z > 0."""

    x: tuple[float, ...]
    z: float

    def __post_init__(self) -> None:
        if not isinstance(self.x, tuple):
            object.__setattr__(self, "x", tuple(float(v) for v in self.x))
        if not self.z > 0:
            raise ValueError(f"z must be positive, got {self.z}")

    @property
    def dim(self) -> int:
        return len(self.x) + 1


@dataclass(frozen=True)
class Move:
    """One move between cell centers: up, down to a child, or horizontal.

    ``child_index`` selects one of the 2^(D-1) children for a down move;
    ``offset`` is a nonzero vector in {-1,0,1}^(D-1) for a horizontal move.
    """

    kind: str  # "up" | "down" | "horizontal"
    child_index: int | None = None
    offset: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if self.kind == "horizontal":
            if self.offset is None or not any(self.offset):
                raise ValueError("horizontal move needs a nonzero offset")
            if any(o not in (-1, 0, 1) for o in self.offset):
                raise ValueError("horizontal offsets are -1, 0 or +1 per axis")
        elif self.kind == "down":
            if self.child_index is None or self.child_index < 0:
                raise ValueError("down move needs a child index")
        elif self.kind != "up":
            raise ValueError(f"unknown move kind {self.kind!r}")


def parent(c: CellId) -> CellId:
    """The cell one level up whose bottom facet carries the top facet of ``c``."""
    return CellId(c.level + 1, tuple(k >> 1 for k in c.coords))


def children(c: CellId) -> list[CellId]:
    """All 2^(D-1) cells one level down whose parent is ``c``."""
    base = tuple(k << 1 for k in c.coords)
    out = []
    for bits in itertools.product((0, 1), repeat=len(base)):
        out.append(CellId(c.level - 1, tuple(b + o for b, o in zip(base, bits))))
    return out


def horizontal_neighbors(c: CellId) -> list[CellId]:
    """The 3^(D-1)-1 same-level cells touching ``c``, diagonals included."""
    out = []
    for off in itertools.product((-1, 0, 1), repeat=len(c.coords)):
        if any(off):
            out.append(CellId(c.level, tuple(k + o for k, o in zip(c.coords, off))))
    return out


def apply_move(c: CellId, m: Move) -> CellId:
    if m.kind == "up":
        return parent(c)
    if m.kind == "down":
        return children(c)[m.child_index]
    return CellId(c.level, tuple(k + o for k, o in zip(c.coords, m.offset)))


def all_moves(c: CellId) -> Iterator[CellId]:
    """Every cell reachable from ``c`` in one move."""
    yield parent(c)
    yield from children(c)
    yield from horizontal_neighbors(c)


def center(c: CellId) -> HPoint:
    """Center of the cell: x_j = (k_j + 1/2)*2^i, z = 3*2^(i-1)."""
    return HPoint(
        tuple(math.ldexp(k + 0.5, c.level) for k in c.coords),
        math.ldexp(3.0, c.level - 1),
    )


def level_of_height(z: float) -> int:
    """Level i with 2^i <= z < 2^(i+1).

    Uses the exact binary exponent of the float, so heights that are
    powers of two land on the higher level without log2 rounding noise.
    """
    if not z > 0 or math.isinf(z) or math.isnan(z):
        raise ValueError(f"height must be a positive finite number, got {z}")
    mantissa, exponent = math.frexp(z)  # z = mantissa * 2^exponent, mantissa in [0.5, 1)
    return exponent - 1


def cell_of(p: HPoint) -> CellId:
    """The cell containing ``p`` under the half-open convention.

    The level is the maximum one whose slab contains z (so a point on a
    horizontal facet belongs to the bigger cell above it); per axis the
    box is taken as [k*2^i, (k+1)*2^i).
    """
    i = level_of_height(p.z)
    return CellId(i, tuple(math.floor(math.ldexp(x, -i)) for x in p.x))


def ancestor_at(c: CellId, level: int) -> CellId:
    """Ancestor-or-self of ``c`` at the given level (level >= c.level)."""
    shift = level - c.level
    if shift < 0:
        raise ValueError(f"level {level} is below the cell's level {c.level}")
    if shift == 0:
        return c
    return CellId(level, tuple(k >> shift for k in c.coords))


def is_ancestor_or_self(a: CellId, c: CellId) -> bool:
    """True if ``a`` is ``c`` or an ancestor of it."""
    return a.level >= c.level and ancestor_at(c, a.level) == a


def contains_point(c: CellId, p: HPoint) -> bool:
    """Half-open geometric membership test (used by the oracles)."""
    if level_of_height(p.z) != c.level:
        return False
    w = math.ldexp(1.0, c.level)
    return all(k * w <= x < (k + 1) * w for k, x in zip(c.coords, p.x))
