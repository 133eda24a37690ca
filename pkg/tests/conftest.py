import pytest

from qpadic.algebra import AlgebraContext


@pytest.fixture(scope="session")
def ctx2() -> AlgebraContext:
    return AlgebraContext(2)


@pytest.fixture(scope="session")
def ctx3() -> AlgebraContext:
    return AlgebraContext(3)


@pytest.fixture(scope="session")
def ctx5() -> AlgebraContext:
    return AlgebraContext(5)
