"""Shared fixtures.

The full-depth tables and the deep series are expensive (tens of seconds);
they are session-scoped and only built when a test actually pulls them in.
"""

import pytest
from mpmath import mp

from overrank import pbar_series, rank_class_table

FULL_DEPTH = 3000
DEEP_SERIES = 14000


@pytest.fixture(autouse=True)
def _high_ambient_precision():
    # mpmath rounds every operation (even negation) to the ambient precision;
    # test-side algebra on 160-bit package values must not round at 53 bits
    old = mp.prec
    mp.prec = 240
    yield
    mp.prec = old


@pytest.fixture(scope="session")
def pbar3000():
    return pbar_series(FULL_DEPTH)


@pytest.fixture(scope="session")
def pbar_deep():
    # deep enough for the slowest-decaying certified series constant
    return pbar_series(DEEP_SERIES)


@pytest.fixture(scope="session")
def table3():
    return rank_class_table(FULL_DEPTH, 3)


@pytest.fixture(scope="session")
def table4():
    return rank_class_table(FULL_DEPTH, 4)


@pytest.fixture(scope="session")
def table5():
    return rank_class_table(FULL_DEPTH, 5)


@pytest.fixture(scope="session")
def small_tables():
    """Shallow tables for structural tests, keyed by modulus."""
    return {c: rank_class_table(60, c) for c in range(2, 9)}
