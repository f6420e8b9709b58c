import pytest

from merogrowth import catalog

WORKING_RADIUS = 2000.0


@pytest.fixture(scope="session")
def corpus():
    return {name: catalog.load_case(name) for name in catalog.CORPUS}


@pytest.fixture(scope="session")
def euler_case():
    return catalog.load_case("euler")
