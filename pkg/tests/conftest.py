import pytest

from betacert.realnum import set_precision, DEFAULT_PRECISION


@pytest.fixture(autouse=True)
def _default_precision():
    # every test starts from the library default, whatever the previous
    # test fiddled with
    set_precision(DEFAULT_PRECISION)
    yield
    set_precision(DEFAULT_PRECISION)
