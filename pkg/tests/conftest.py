import sys
from pathlib import Path

import numpy as np
import pytest

from emunet import TradeMatrix, bundled_matrix, validate

sys.path.insert(0, str(Path(__file__).parent))


def random_matrix(rng, n=None, density=0.6, year=2000):
    """Random validated matrix with no exact length ties (generic weights)."""
    if n is None:
        n = int(rng.integers(3, 7))
    w = rng.uniform(0.1, 10.0, size=(n, n))
    w[rng.random((n, n)) > density] = 0.0
    np.fill_diagonal(w, 0.0)
    codes = tuple(f"C{i:02d}" for i in range(n))
    return validate(TradeMatrix(year=year, countries=codes, weights=w))


@pytest.fixture(scope="session")
def m1995():
    return bundled_matrix(1995)


@pytest.fixture(scope="session")
def m2019():
    return bundled_matrix(2019)


def make_matrix(weights, year=2000):
    w = np.asarray(weights, dtype=float)
    codes = tuple(f"C{i:02d}" for i in range(w.shape[0]))
    return validate(TradeMatrix(year=year, countries=codes, weights=w))
