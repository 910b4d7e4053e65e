import pytest

from siftlab.arith import PrimeTable


@pytest.fixture(scope="session")
def t1e5():
    return PrimeTable(10**5)


@pytest.fixture(scope="session")
def t1e6():
    return PrimeTable(10**6)
