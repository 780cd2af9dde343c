import pytest

from primezeros.zeta_oracle import find_zeros

# Reference ordinates (Odlyzko's tables), used only to check the oracle itself.
KNOWN_ZEROS = (14.134725141734693, 21.022039638771555, 25.010857580145688,
               30.424876125859513, 32.935061587739189)


@pytest.fixture(scope="session")
def oracle_table():
    """Oracle zeros up to height 240: the first 100 and a couple more."""
    return find_zeros(240.0)


@pytest.fixture(scope="session")
def zeros100(oracle_table):
    return oracle_table.first(100)


@pytest.fixture(scope="session")
def zeros50(oracle_table):
    return oracle_table.first(50)
