import pathlib

import pytest

from hdmas.engine import ModelChecker
from hdmas.oracle import Oracle
from hdmas.parsing import parse_model

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "src" / "hdmas" / "fixtures"


def load_fixture(name):
    return parse_model((FIXTURES / name).read_text()).model


@pytest.fixture(scope="session")
def fig2():
    return load_fixture("fig2.hdmas")


@pytest.fixture(scope="session")
def fortress():
    return load_fixture("fortress.hdmas")


@pytest.fixture(scope="session")
def fig2_checker(fig2):
    # shared so decisions cache across tests
    return ModelChecker(fig2)


@pytest.fixture(scope="session")
def fortress_checker(fortress):
    return ModelChecker(fortress)


@pytest.fixture(scope="session")
def fig2_oracle(fig2):
    return Oracle(fig2)


@pytest.fixture(scope="session")
def fortress_oracle(fortress):
    return Oracle(fortress)
