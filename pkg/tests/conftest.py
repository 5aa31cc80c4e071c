import pytest

import owlseg
from owlseg.fixtures import CITIZEN_NS


def n(local: str) -> str:
    return CITIZEN_NS + local


@pytest.fixture(scope="session")
def schema():
    return owlseg.build_citizen_schema()


@pytest.fixture(scope="session")
def citizen1000(schema):
    """The frozen acceptance fixture: 1000 persons, 4 cities, 2 countries."""
    return owlseg.generate_with_allocation(
        schema, owlseg.PopulationParams(n_individuals=1000, seed=0))


@pytest.fixture(scope="session")
def citizen300(schema):
    return owlseg.generate_population(
        schema, owlseg.PopulationParams(n_individuals=300, seed=7))
