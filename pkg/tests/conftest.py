import pytest

import gamefibers as gf


@pytest.fixture
def rps():
    return gf.builtin_game("rps")


@pytest.fixture
def bar():
    return gf.builtin_game("bar")
