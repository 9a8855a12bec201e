import pytest

from totientshift.arithmetic import build_spf
from totientshift.config import Config, set_config
from totientshift.kappa import PUBLISHED_KAPPA, pair_candidate


@pytest.fixture(scope='session')
def spf_table():
    return build_spf(10 ** 5)


@pytest.fixture(scope='session')
def published_kappa():
    return dict(PUBLISHED_KAPPA)


@pytest.fixture
def pair_d2():
    # Pair attaining kappa_2: a1 = 97, a2 = 47.
    return pair_candidate(2, 48, 23)


@pytest.fixture
def pair_d1():
    return pair_candidate(1, 1, 0)


@pytest.fixture(autouse=True)
def default_config():
    # Commands run in-process install their own settings.
    set_config(Config())
    yield
    set_config(Config())
