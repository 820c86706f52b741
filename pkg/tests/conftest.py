import random

import pytest

from mplcert.precision import make_context


@pytest.fixture(scope="session")
def ctx30():
    return make_context(30)


@pytest.fixture(scope="session")
def ctx40():
    return make_context(40)


@pytest.fixture(scope="session")
def ctx50():
    return make_context(50)


@pytest.fixture()
def rng():
    return random.Random(271828)
