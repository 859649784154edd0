import pytest

from grandmo import make_bch, make_rlc, make_rm


@pytest.fixture(scope="session")
def bch():
    return make_bch()


@pytest.fixture(scope="session")
def rm47():
    return make_rm(4, 7)


@pytest.fixture(scope="session")
def rlc_15_10():
    return make_rlc(15, 10, seed=1)
