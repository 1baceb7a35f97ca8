import pytest

from cellschur.core.algebra import RingSpec
from cellschur.core.enums import MonoidKind
from cellschur.core.monoid import MonoidSpec
from cellschur.services.cell_engine import CellEngine
from cellschur.services.monoid_cells import monoid_cell_structure


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run slow tests")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(scope="session")
def integers():
    return RingSpec.integers()


@pytest.fixture(scope="session")
def t2(integers):
    return monoid_cell_structure(MonoidSpec(MonoidKind.FULL, 2), integers)


@pytest.fixture(scope="session")
def t3(integers):
    return monoid_cell_structure(MonoidSpec(MonoidKind.FULL, 3), integers)


@pytest.fixture
def engine():
    return CellEngine()
