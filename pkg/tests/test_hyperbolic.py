import math
import random

import pytest

from halfspace.hyperbolic import (
    DistortionReport,
    NormalizeTransform,
    deviation_window_cells,
    deviation_window_points_d1,
    deviation_window_points_d2,
    distortion_report,
    embed,
    embedding_displacement_bound,
    hyperbolic_distance,
    normalize,
)
from halfspace.metrics import d1
from halfspace.tiling import CellId, HPoint, center, is_ancestor_or_self

from conftest import random_cell


def H(z, *x):
    return HPoint(tuple(x), z)


def random_hpoint(rng, dim=2, x_range=(-5.0, 5.0), z_range=(0.05, 8.0)):
    return HPoint(tuple(rng.uniform(*x_range) for _ in range(dim - 1)), rng.uniform(*z_range))


# -- distance ------------------------------------------------------------


def test_vertical_special_case():
    # vertically aligned points: plain log of the height ratio
    assert hyperbolic_distance(H(1.0, 0.0), H(4.0, 0.0)) == pytest.approx(math.log(4.0), abs=1e-12)
    assert hyperbolic_distance(H(4.0, 0.0), H(1.0, 0.0)) == pytest.approx(math.log(4.0), abs=1e-12)


def test_distance_zero_iff_equal():
    p = H(1.7, 0.3)
    assert hyperbolic_distance(p, p) == 0.0
    assert hyperbolic_distance(p, H(1.7, 0.30001)) > 0.0


def test_distance_closed_form_frozen_value():
    # high-precision evaluation of 2*arsinh(sqrt(10)/(2*sqrt(2)))
    got = hyperbolic_distance(H(1.0, 0.0), H(2.0, 3.0))
    assert got == pytest.approx(1.92484730023841379, abs=1e-12)


def test_distance_symmetric_and_triangle(rng):
    for _ in range(300):
        p, q, r = (random_hpoint(rng) for _ in range(3))
        assert hyperbolic_distance(p, q) == pytest.approx(hyperbolic_distance(q, p), abs=1e-12)
        assert hyperbolic_distance(p, r) <= hyperbolic_distance(p, q) + hyperbolic_distance(q, r) + 1e-9


def test_distance_rejects_bad_input():
    with pytest.raises(ValueError):
        hyperbolic_distance(H(1.0, 0.0), H(1.0, 0.0, 0.0))


def test_arsinh_log_upper_bound():
    # arsinh(x) < ln(x) + 1 for x >= 1
    for x in [1.0, 1.5, 2.0, 8.0, 1e3, 1e9]:
        assert math.asinh(x) < math.log(x) + 1.0


# -- embedding -----------------------------------------------------------


def test_embed_center_is_fixed():
    for c in [CellId(0, (0,)), CellId(-3, (5,)), CellId(2, (-1, 4))]:
        b = center(c)
        assert embed(b) == c
        assert hyperbolic_distance(b, center(embed(b))) == 0.0


def test_embed_known_cell_and_distance():
    p = H(1.5, 0.3)
    c = embed(p)
    assert c == CellId(0, (0,))
    got = hyperbolic_distance(p, center(c))
    assert got == pytest.approx(0.13323476491110579, abs=1e-12)
    assert got < embedding_displacement_bound(2)


def test_embed_displacement_bound(rng):
    # d_H(p, center of its cell) <= 2*arsinh(sqrt(D)/4) over random points;
    # the ln(D) relaxation holds from D=3 up
    for dim in (2, 3, 4, 5, 6):
        bound = embedding_displacement_bound(dim)
        for _ in range(2000):
            p = random_hpoint(rng, dim)
            got = hyperbolic_distance(p, center(embed(p)))
            assert got <= bound + 1e-9
            if dim >= 3:
                assert got < math.log(dim)


# -- normalization --------------------------------------------------------


def test_normalize_identity_compatible():
    pts = [H(1.2, 0.3), H(1.5, 0.45)]
    t, moved = normalize(pts)
    assert t.scale <= 1.0
    for m in moved:
        assert all(0.25 <= x <= 0.5 for x in m.x)
        assert m.z < 2.0


def test_normalize_scales_wide_sets():
    pts = [H(1.0, 0.0), H(1.0, 8.0)]
    t, moved = normalize(pts)
    assert t.scale <= 0.25 / 8.0
    xs = [m.x[0] for m in moved]
    assert max(xs) - min(xs) <= 0.25 + 1e-12


def test_normalize_is_isometry(rng):
    for dim in (2, 3):
        pts = [random_hpoint(rng, dim, x_range=(-40, 40), z_range=(0.01, 30)) for _ in range(12)]
        _, moved = normalize(pts)
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                before = hyperbolic_distance(pts[i], pts[j])
                after = hyperbolic_distance(moved[i], moved[j])
                assert abs(before - after) <= 1e-9
        for m in moved:
            assert all(0.25 <= x <= 0.5 for x in m.x)
            assert m.z < 2.0


def test_normalize_degenerate_single_point():
    t, moved = normalize([H(5.0, 123.4)])
    assert moved[0].z < 2.0
    assert all(0.25 <= x <= 0.5 for x in moved[0].x)


def test_normalize_rejects_empty():
    with pytest.raises(ValueError):
        normalize([])


def test_transform_apply_matches_components():
    t = NormalizeTransform(0.5, (0.1,))
    p = H(1.0, 0.6)
    m = t.apply(p)
    assert m.x[0] == pytest.approx(0.6 * 0.5 + 0.1)
    assert m.z == pytest.approx(0.5)


# -- distortion windows ----------------------------------------------------


def test_cell_center_deviation_window(rng):
    lo, hi = deviation_window_cells(2)
    for _ in range(2000):
        p = random_cell(rng, 2)
        q = random_cell(rng, 2)
        dev = hyperbolic_distance(center(p), center(q)) - math.log(2.0) * d1(p, q)
        assert lo - 1e-9 < dev <= hi + 1e-9


def test_ancestor_deviation_window(rng):
    # for an ancestor pair: ln2*d1 <= d_H <= ln2*d1 + ln(D) + 2 + ln 4
    from halfspace.tiling import ancestor_at

    for dim in (2, 3):
        hi_extra = math.log(dim) + 2.0 + math.log(4.0)
        for _ in range(1000):
            c = random_cell(rng, dim, level_range=(-6, 0), coord_range=(-40, 40))
            a = ancestor_at(c, c.level + rng.randint(1, 6))
            assert is_ancestor_or_self(a, c)
            dh = hyperbolic_distance(center(c), center(a))
            base = math.log(2.0) * d1(c, a)
            assert base - 1e-9 <= dh <= base + hi_extra + 1e-9


def test_vertical_dyadic_pairs_have_zero_deviation():
    # two points one above the other with a power-of-two height ratio sit
    # in cells on one ancestor chain; scaled d1 matches d_H exactly
    p, q = H(1.2, 0.3), H(2.4, 0.3)
    cp, cq = embed(p), embed(q)
    assert is_ancestor_or_self(cq, cp)
    dev = hyperbolic_distance(p, q) - math.log(2.0) * d1(cp, cq)
    assert abs(dev) <= 1e-12


def test_distortion_report_identical_points():
    pts = [H(1.0, 0.2), H(1.0, 0.2)]
    rep = distortion_report(pts, samples=64)
    assert rep.violations == 0
    assert rep.d1_min == rep.d1_max == 0.0


def test_distortion_report_random_sets(rng):
    for dim in (2, 3, 4):
        pts = [random_hpoint(rng, dim, x_range=(-30, 30), z_range=(0.02, 20)) for _ in range(60)]
        rep = distortion_report(pts, samples=4000, seed=7)
        assert rep.violations == 0
        lo1, hi1 = deviation_window_points_d1(dim)
        lo2, hi2 = deviation_window_points_d2(dim)
        assert lo1 - 1e-9 <= rep.d1_min and rep.d1_max <= hi1 + 1e-9
        assert lo2 - 1e-9 <= rep.d2_min and rep.d2_max <= hi2 + 1e-9
        assert isinstance(rep, DistortionReport)


def test_distortion_report_needs_two_points():
    with pytest.raises(ValueError):
        distortion_report([H(1.0, 0.0)], samples=10)
