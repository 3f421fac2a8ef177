import random

import pytest

from halfspace.tiling import CellId


def random_cell(rng: random.Random, dim: int = 2, level_range=(-4, 3), coord_range=(-40, 40)) -> CellId:
    level = rng.randint(*level_range)
    coords = tuple(rng.randint(*coord_range) for _ in range(dim - 1))
    return CellId(level, coords)


def random_cell_in_root(rng: random.Random, dim: int = 2, min_level: int = -6) -> CellId:
    """A random cell whose shadow lies inside [0,1]^(D-1) at level <= 0."""
    level = rng.randint(min_level, 0)
    span = 1 << (-level)
    coords = tuple(rng.randrange(span) for _ in range(dim - 1))
    return CellId(level, coords)


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)
