import pydantic as pd
import pytest

from logcleaner.error import exc
from logcleaner.error.converting import converting_unexpected_errors


def test_converting_unexpected_errors():
    """ Test: converting_unexpected_errors() """
    # Test: convert ValueError
    with pytest.raises(exc.BaseApplicationError) as e:
        with converting_unexpected_errors():
            raise ValueError('INVALID')

    assert isinstance(e.value, exc.F_UNEXPECTED_ERROR)
    assert e.value.error == 'INVALID'
    assert e.value.debug['errors'][0]['type'] == 'ValueError'

    # Test: application errors remain as they are
    with pytest.raises(exc.E_NO_LOGS):
        with converting_unexpected_errors():
            raise exc.E_NO_LOGS('No logs')

    # Test: validation errors are configuration errors
    class Config(pd.BaseModel):
        nr: float = pd.Field(..., gt=0, lt=1)

    with pytest.raises(exc.E_CONFIG) as e:
        with converting_unexpected_errors():
            Config(nr=2)
    assert e.value.info['model'] == 'Config'


def test_cause_chain():
    """ Causes get into debug info """
    with pytest.raises(exc.F_UNEXPECTED_ERROR) as e:
        with converting_unexpected_errors():
            try:
                raise KeyError('inner')
            except KeyError as inner:
                raise RuntimeError('outer') from inner

    assert [error['type'] for error in e.value.debug['errors']] == ['RuntimeError', 'KeyError']
