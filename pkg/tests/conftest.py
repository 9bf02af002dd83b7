import pytest

from logcleaner.log import LogSet, load_log_set
from tests.lib import FIXTURES


@pytest.fixture()
def l_org() -> LogSet:
    """ The running example: 18 entries of send, check, memory, and a periodic ping """
    return load_log_set(FIXTURES / 'running_example')


@pytest.fixture()
def l_inter() -> LogSet:
    """ The running example without ping: send, memory, check, check, memory, memory, send, check, memory """
    return load_log_set(FIXTURES / 'interleaved')
