import numpy as np
import pytest

from meanking.designs import StriationTable

# s((i,j),A) = j - A*i mod 3 for A < 3 and i for A = 3, rows I = 3j + i
FIG1 = [
    "0000", "0211", "0122",
    "1110", "1021", "1202",
    "2220", "2101", "2012",
]


@pytest.fixture
def fig1_table():
    return StriationTable(3, [[int(c) for c in row] for row in FIG1])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
