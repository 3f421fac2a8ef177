"""Exact halfspace distance, input normalization, and distortion checks.

The halfspace distance between p and q is

    2 * arsinh( ||p - q|| / (2 * sqrt(z(p) z(q))) )

which reduces to |ln(z(q)/z(p))| for vertically aligned points.  Mapping
a point to the center of the deepest cell containing it moves it by less
than ln(D), and scaled by ln(2) the discrete distances between mapped
points track the true distance within an explicit window that the
distortion report checks sample by sample.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Sequence

from .metrics import d1, d2
from .tiling import CellId, HPoint, cell_of


def hyperbolic_distance(p: HPoint, q: HPoint) -> float:
    """Closed-form halfspace distance between two points."""
    if len(p.x) != len(q.x):
        raise ValueError(f"dimension mismatch: {p.dim} vs {q.dim}")
    if not (p.z > 0 and q.z > 0):
        raise ValueError("heights must be positive")
    gap = math.hypot(*(a - b for a, b in zip(p.x, q.x)), p.z - q.z)
    if gap == 0.0:
        return 0.0
    return 2.0 * math.asinh(0.5 * gap / math.sqrt(p.z * q.z))


def embed(p: HPoint) -> CellId:
    """The cell whose center stands in for ``p`` in the discrete models.

    The center is within 2*arsinh(sqrt(D)/4) of ``p``, which is below
    ln(D) for every D >= 2.
    """
    return cell_of(p)


def embedding_displacement_bound(dim: int) -> float:
    """2*arsinh(sqrt(D)/4), the guaranteed bound on d_H(p, center(embed(p)))."""
    return 2.0 * math.asinh(math.sqrt(dim) / 4.0)


@dataclass(frozen=True)
class NormalizeTransform:
    """Homothety about the origin followed by a horizontal translation.

    Both maps are isometries of the halfspace, so distances are
    preserved exactly: x -> scale*x + shift, z -> scale*z.
    """

    scale: float
    shift: tuple[float, ...]

    def apply(self, p: HPoint) -> HPoint:
        return HPoint(
            tuple(self.scale * x + t for x, t in zip(p.x, self.shift)),
            self.scale * p.z,
        )

    def apply_all(self, points: Sequence[HPoint]) -> list[HPoint]:
        return [self.apply(p) for p in points]


# Horizontal diameter target: strictly below 1/4 so every mapped cell
# center stays inside [1/4, 1/2] per axis (the margin the refinement
# step of the Voronoi construction relies on).
_X_DIAMETER_TARGET = 15.0 / 64.0
_X_LOW_CORNER = 0.25


def normalize(points: Sequence[HPoint]) -> tuple[NormalizeTransform, list[HPoint]]:
    """Scale and shift a point set into the root cell's shadow.

    After the transform every x-projection lies in [1/4, 1/2)^(D-1) and
    every height is below 2, so all points sit at level <= 0 below the
    root cell [0,1]^(D-1) x [1,2].  Distances are unchanged.
    """
    if not points:
        raise ValueError("cannot normalize an empty point set")
    dim = points[0].dim
    if any(p.dim != dim for p in points):
        raise ValueError("mixed dimensions in point set")
    max_z = max(p.z for p in points)
    diam = 0.0
    for j in range(dim - 1):
        vals = [p.x[j] for p in points]
        diam = max(diam, max(vals) - min(vals))
    scale = min(1.0, 1.9 / max_z, _X_DIAMETER_TARGET / max(diam, 1e-300))
    shift = tuple(
        _X_LOW_CORNER - scale * min(p.x[j] for p in points) for j in range(dim - 1)
    )
    t = NormalizeTransform(scale, shift)
    return t, t.apply_all(points)


def deviation_window_cells(dim: int) -> tuple[float, float]:
    """Bounds on d_H(p,q) - ln(2)*d1(p,q) for two cell centers."""
    return (-7.0 * math.log(2.0), math.log(dim) + 2.0 + 6.0 * math.log(2.0))


def deviation_window_points_d1(dim: int) -> tuple[float, float]:
    """Bounds on ln(2)*d1(b(p),b(q)) - d_H(p,q) for arbitrary halfspace points.

    Chains the cell-center window with two applications of the
    embedding displacement bound (< ln D each).
    """
    ln2, lnD = math.log(2.0), math.log(dim)
    return (-3.0 * lnD - 2.0 - 6.0 * ln2, 2.0 * lnD + 7.0 * ln2)


def deviation_window_points_d2(dim: int) -> tuple[float, float]:
    """Same window for d2; the upper side widens by 2 ln 2 since d2 <= d1 + 2."""
    lo, hi = deviation_window_points_d1(dim)
    return (lo, hi + 2.0 * math.log(2.0))


@dataclass(frozen=True)
class DistortionReport:
    """Sampled deviations between scaled discrete and true distances."""

    samples: int
    d1_min: float
    d1_max: float
    d1_mean: float
    d2_min: float
    d2_max: float
    d2_mean: float
    violations: int


_SLACK = 1e-9  # absolute slack for comparisons between smooth closed forms


def distortion_report(points: Sequence[HPoint], samples: int, seed: int = 0) -> DistortionReport:
    """Sample point pairs and compare ln(2)*d1/d2 of their cells to d_H.

    Violations count samples falling outside the closed-form windows;
    a correct embedding reports zero.
    """
    if len(points) < 2:
        raise ValueError("need at least two points")
    dim = points[0].dim
    w1 = deviation_window_points_d1(dim)
    w2 = deviation_window_points_d2(dim)
    rng = random.Random(seed)
    cells = [embed(p) for p in points]
    n = len(points)
    dev1: list[float] = []
    dev2: list[float] = []
    violations = 0
    for _ in range(samples):
        i = rng.randrange(n)
        j = rng.randrange(n)
        dh = hyperbolic_distance(points[i], points[j])
        g1 = math.log(2.0) * d1(cells[i], cells[j]) - dh
        g2 = math.log(2.0) * d2(cells[i], cells[j]) - dh
        dev1.append(g1)
        dev2.append(g2)
        if not (w1[0] - _SLACK <= g1 <= w1[1] + _SLACK):
            violations += 1
        if not (w2[0] - _SLACK <= g2 <= w2[1] + _SLACK):
            violations += 1
    return DistortionReport(
        samples=samples,
        d1_min=min(dev1),
        d1_max=max(dev1),
        d1_mean=sum(dev1) / samples,
        d2_min=min(dev2),
        d2_max=max(dev2),
        d2_mean=sum(dev2) / samples,
        violations=violations,
    )
