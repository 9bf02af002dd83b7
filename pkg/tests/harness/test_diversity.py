import pytest

from logcleaner.error import exc
from logcleaner.harness import DiversityLevel, diversity_report, ediv_score, load_fsm, sdiv_score
from logcleaner.harness.diversity import diversity_level
from tests.lib import FIXTURES, fsm, high_diversity_model, low_diversity_model


def test_chain():
    model = load_fsm(FIXTURES / 'models' / 'chain.json')
    assert ediv_score(model, 'x') == 0.5
    assert ediv_score(model, 'y') == 0  # C is a dead end
    assert sdiv_score(model) == 0.25

    with pytest.raises(exc.E_ARGUMENT):
        ediv_score(model, 'z')


def test_complete_model():
    """ Every symbol may follow every symbol """
    model = fsm(['A'], 'A', ['A'], [('A', s, 'A') for s in 'abc'])
    assert sdiv_score(model) == 1.0
    assert diversity_report(model).level is DiversityLevel.HIGH


def test_test_models():
    low = diversity_report(low_diversity_model())
    assert low.sdiv == 0.125
    assert set(low.ediv.values()) == {0.125}
    assert low.level is DiversityLevel.LOW

    high = diversity_report(high_diversity_model())
    assert high.sdiv == 0.75
    assert set(high.ediv.values()) == {0.75}
    assert 0.56 <= high.sdiv <= 0.93
    assert high.level is DiversityLevel.HIGH


def test_diversity_level():
    assert diversity_level(0) is DiversityLevel.LOW
    assert diversity_level(0.41) is DiversityLevel.LOW
    assert diversity_level(0.5) is DiversityLevel.MEDIUM
    assert diversity_level(0.56) is DiversityLevel.HIGH
    assert diversity_level(1) is DiversityLevel.HIGH


def test_empty_alphabet():
    model = fsm(['A'], 'A', [], [])
    with pytest.raises(exc.E_ARGUMENT):
        sdiv_score(model)
