import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from divindex import UnitTable  # noqa: E402
from divindex.datasets import load_detroit_synthetic  # noqa: E402


def make_table(rows, groups=None, ids=None, districts=None, coords=None):
    rows = np.asarray(rows, dtype=float)
    groups = groups or tuple(f"g{m}" for m in range(rows.shape[1]))
    ids = ids or tuple(f"u{i}" for i in range(rows.shape[0]))
    return UnitTable(groups, ids, rows, district_ids=districts, coords=coords)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def detroit():
    return load_detroit_synthetic()


@pytest.fixture
def hyper_table():
    """Three units on a line; with radius 1 the neighborhoods overlap.

    The region is 75/25, both end neighborhoods are 60/40 (more diverse
    than the region), and the middle neighborhood is the whole region.
    """
    return make_table([[60, 0], [0, 40], [60, 0]], groups=("a", "b"),
                      coords=[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)])
