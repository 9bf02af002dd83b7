import numpy as np
import pytest

from logcleaner.dependency import (
    DependencyScorer, compute_mscore, cscore, dscore_backward, dscore_calc, dscore_forward,
    first_following, format_score_table, pairwise_scores,
)
from logcleaner.error import exc
from logcleaner.log import reverse_all
from logcleaner.util.magic_symbol import NaE
from tests.lib import make_logs, naive_dscore_backward, naive_dscore_forward, random_log_set


def test_first_following(l_inter):
    log = l_inter.get('l_inter')
    assert log.templates == ['send', 'memory', 'check', 'check', 'memory', 'memory', 'send', 'check', 'memory']

    # Found before the next entry of the same template
    assert first_following(1, 'check', log) == 2
    assert first_following(5, 'check', log) == 7
    assert first_following(0, 'memory', log) == 1

    # The next entry of the same template comes first
    assert first_following(4, 'check', log) is NaE

    # End of the log
    assert first_following(8, 'check', log) is NaE

    # Template that does not occur
    assert first_following(0, 'ping', log) is NaE

    # Invalid
    with pytest.raises(exc.E_ARGUMENT):
        first_following(0, 'send', log)
    with pytest.raises(exc.E_ARGUMENT):
        first_following(9, 'check', log)


def test_cscore(l_inter):
    log = l_inter.get('l_inter')
    assert cscore(1, 2, log) == 1
    assert cscore(5, 7, log) == 0.5
    assert cscore(4, NaE, log) == 0

    with pytest.raises(exc.E_ARGUMENT):
        cscore(3, 2, log)


def test_dscore_running_example(l_inter):
    assert dscore_forward('memory', 'check', l_inter) == pytest.approx(0.375, abs=1e-9)
    assert dscore_backward('memory', 'check', l_inter) == pytest.approx(0.5, abs=1e-9)
    assert dscore_calc('memory', 'check', l_inter) == pytest.approx(0.5, abs=1e-9)

    assert dscore_forward('send', 'memory', l_inter) == pytest.approx(0.75, abs=1e-9)
    assert dscore_forward('check', 'memory', l_inter) == pytest.approx(2 / 3, abs=1e-9)

    mscore = compute_mscore(l_inter)
    assert mscore == {
        'send': pytest.approx(0.75, abs=1e-9),
        'check': pytest.approx(2 / 3, abs=1e-9),
        'memory': pytest.approx(0.5, abs=1e-9),
    }


def test_dscore_errors(l_inter):
    with pytest.raises(exc.E_ARGUMENT):
        dscore_forward('send', 'send', l_inter)
    with pytest.raises(exc.E_ARGUMENT):
        dscore_forward('ping', 'send', l_inter)

    # y never occurs: every entry of x scores 0
    assert dscore_forward('send', 'ping', l_inter) == 0

    # Fewer than 2 templates
    with pytest.raises(exc.E_DEPENDENCY_UNDEFINED) as e:
        compute_mscore(make_logs('a a a'))
    assert e.value.exitcode == 2
    assert 'Dependency undefined' in e.value.error


def test_single_occurrences():
    """ Every template occurs once: the score of a pair is 1 / (index gap) """
    logs = make_logs('a b c d e')
    order = 'abcde'
    for (x, y), pair in pairwise_scores(logs).items():
        assert pair.score == pytest.approx(1 / abs(order.index(x) - order.index(y)))
    assert pairwise_scores(logs)[('a', 'e')].score == pytest.approx(0.25)

    # Every template has a neighbour
    assert compute_mscore(logs) == {t: pytest.approx(1) for t in order}

    # Strict alternation
    assert compute_mscore(make_logs('x y x y x y')) == {'x': pytest.approx(1), 'y': pytest.approx(1)}


def test_windows_stay_within_a_log():
    """ The first-following entry is never looked for in the next log """
    logs = make_logs('a', 'b a', 'b')
    assert dscore_forward('a', 'b', logs) == 0
    assert dscore_backward('a', 'b', logs) == 0.5

    scorer = DependencyScorer(logs)
    assert scorer.templates == {'a', 'b'}
    assert scorer.count('a') == 2
    assert scorer.count('z') == 0
    assert list(scorer.cscores('b', 'a')) == [1.0, 0.0]


def test_oracle_equivalence():
    """ Vectorized scores agree with a plain scan """
    rng = np.random.default_rng(1000)
    for _ in range(1000):
        logs = random_log_set(rng, max_len=50, max_templates=6)
        if len(logs.templates) < 2:
            continue

        for (x, y), pair in pairwise_scores(logs).items():
            assert abs(pair.forward - naive_dscore_forward(x, y, logs)) <= 1e-12
            assert abs(pair.backward - naive_dscore_backward(x, y, logs)) <= 1e-12


def test_reversal_duality():
    """ Backward scores are forward scores on reversed logs, exactly """
    rng = np.random.default_rng(2000)
    for _ in range(1000):
        logs = random_log_set(rng, max_len=30, max_templates=4)
        templates = sorted(logs.templates)
        if len(templates) < 2:
            continue
        x, y = rng.choice(templates, size=2, replace=False)

        assert dscore_backward(x, y, logs) == dscore_forward(x, y, reverse_all(logs))
        assert dscore_forward(x, y, logs) == dscore_backward(x, y, reverse_all(logs))


def test_score_bounds():
    rng = np.random.default_rng(5)
    for _ in range(200):
        logs = random_log_set(rng)
        if len(logs.templates) < 2:
            continue

        for pair in pairwise_scores(logs).values():
            assert 0 <= pair.forward <= 1
            assert 0 <= pair.backward <= 1
            assert pair.score == max(pair.forward, pair.backward)

        # Every template gets a score
        mscore = compute_mscore(logs)
        assert mscore.keys() == logs.templates
        assert all(0 <= s <= 1 for s in mscore.values())


def test_format_score_table(l_inter):
    lines = list(format_score_table(compute_mscore(l_inter)))
    assert lines == [
        'template  mScore',
        'send      0.750000',
        'check     0.666667',
        'memory    0.500000',
    ]
