import pytest

from worpitzky import build


@pytest.fixture(scope="session")
def b2():
    return build("B2")


@pytest.fixture(scope="session")
def a2():
    return build("A2")
