import json
from pathlib import Path

import pytest

from logcleaner import cli
from logcleaner.cli import default_summary_path, main
from logcleaner.harness import load_ground_truth
from logcleaner.log import load_log_set
from logcleaner.report import load_report
from logcleaner.settings import get_settings
from tests.lib import FIXTURES, low_diversity_model


@pytest.fixture(autouse=True)
def fresh_settings():
    """ Settings are cached: tests that set environment variables need a fresh copy """
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


def test_clean(tmp_path: Path, capsys):
    status = main([
        'clean',
        '--in', str(FIXTURES / 'running_example'),
        '--out', str(tmp_path / 'out'),
        '--report', str(tmp_path / 'report.json'),
        '--delta', '0.2',
        '--bandwidth', '0.05',
        '--seed', '1',
    ])
    assert status == 0
    assert capsys.readouterr().out == 'Removed 13 of 18 entries; templates: memory, ping\n'

    assert load_log_set(tmp_path / 'out').entry_count == 5
    report = load_report(tmp_path / 'report.json')
    assert report.config.seed == 1
    assert report.config.bandwidth == 0.05


def test_clean_from_env(tmp_path: Path, monkeypatch, capsys):
    """ Defaults come from LOGCLEANER_* variables """
    monkeypatch.setenv('LOGCLEANER_BANDWIDTH', '0.05')
    argv = ['clean', '--in', str(FIXTURES / 'running_example'), '--out', str(tmp_path / 'out'),
            '--report', str(tmp_path / 'report.json')]
    assert main(argv) == 0
    assert load_report(tmp_path / 'report.json').config.bandwidth == 0.05

    # Periodicity only
    assert main([*argv, '--skip-dependency']) == 0
    assert capsys.readouterr().out.endswith('Removed 9 of 18 entries; templates: ping\n')


def test_clean_errors(tmp_path: Path, capsys):
    out = ['--out', str(tmp_path / 'out'), '--report', str(tmp_path / 'report.json')]

    # No such directory
    assert main(['clean', '--in', str(tmp_path / 'missing'), *out]) == 2
    assert 'Cannot access file' in capsys.readouterr().err

    # Empty directory
    (tmp_path / 'empty').mkdir()
    assert main(['clean', '--in', str(tmp_path / 'empty'), *out]) == 2
    err = capsys.readouterr().err
    assert 'No logs found' in err
    assert 'Hint: ' in err

    # Missing arguments
    assert main(['clean', '--in', str(FIXTURES / 'running_example')]) == 3
    assert main([]) == 3
    assert main(['frobnicate']) == 3

    # Bad values
    source = ['clean', '--in', str(FIXTURES / 'running_example'), *out]
    assert main([*source, '--bandwidth', 'magic']) == 3
    assert main([*source, '--bandwidth', '-1']) == 3
    assert main([*source, '--delta', '-1']) == 3
    assert main([*source, '--delta', 'abc']) == 3
    assert main([*source, '--skip-periodicity', '--skip-dependency']) == 3
    assert 'Invalid configuration' in capsys.readouterr().err

    # Nothing was written
    assert not (tmp_path / 'out').exists()
    assert not (tmp_path / 'report.json').exists()


def test_invalid_settings(monkeypatch, capsys):
    monkeypatch.setenv('LOGCLEANER_BANDWIDTH', 'magic')
    assert main(['divscore', '--model', str(FIXTURES / 'models' / 'chain.json')]) == 3
    assert 'Invalid configuration' in capsys.readouterr().err

    # Unknown log level
    monkeypatch.setenv('LOGCLEANER_BANDWIDTH', 'auto')
    monkeypatch.setenv('LOGCLEANER_LOG_LEVEL', 'loud')
    get_settings.cache_clear()
    assert main(['divscore', '--model', str(FIXTURES / 'models' / 'chain.json')]) == 3
    assert 'Invalid configuration' in capsys.readouterr().err


def test_malformed_logs(tmp_path: Path, capsys):
    """ Input problems exit with status 2 """
    # A timestamp too large for a float
    (tmp_path / 'huge').mkdir()
    (tmp_path / 'huge' / 'l.jsonl').write_text('{"ts": 1' + '0' * 400 + ', "tpl": "a"}\n')
    assert main(['score', '--in', str(tmp_path / 'huge')]) == 2
    assert 'Malformed log file' in capsys.readouterr().err

    # Two files would make the same log
    (tmp_path / 'dup').mkdir()
    (tmp_path / 'dup' / 'run.jsonl').write_text('{"ts": 0, "tpl": "a"}\n{"ts": 1, "tpl": "b"}\n')
    (tmp_path / 'dup' / 'run.tsv').write_text('2\ta\n3\tb\n')
    assert main(['score', '--in', str(tmp_path / 'dup')]) == 2
    assert 'Rename one of the files' in capsys.readouterr().err


def test_unexpected_error(monkeypatch, capsys):
    def load_fsm(path):
        raise RuntimeError('boom')

    monkeypatch.setattr(cli, 'load_fsm', load_fsm)
    assert main(['divscore', '--model', 'whatever.json']) == 1


def test_score(capsys):
    assert main(['score', '--in', str(FIXTURES / 'interleaved'), '--pairs']) == 0
    out = capsys.readouterr().out
    scores_json, table, pairs = out.split('\n\n')

    assert json.loads(scores_json) == pytest.approx({'check': 2 / 3, 'memory': 0.5, 'send': 0.75})
    assert list(json.loads(scores_json)) == ['check', 'memory', 'send']

    assert 'memory' in table
    assert pairs.splitlines()[0] == 'x\ty\tforward\tbackward\tscore'
    assert len(pairs.splitlines()) == 1 + 6
    assert 'memory\tcheck\t0.375000\t0.500000\t0.500000' in pairs.splitlines()

    # Model files are not logs
    assert main(['score', '--in', str(FIXTURES / 'models')]) == 2


def test_divscore(capsys):
    assert main(['divscore', '--model', str(FIXTURES / 'models' / 'chain.json')]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report == {'ediv': {'x': 0.5, 'y': 0.0}, 'sdiv': 0.25, 'level': 'low'}

    # Not a model
    assert main(['divscore', '--model', str(FIXTURES / 'interleaved' / 'l_inter.tsv')]) == 2


def test_gen_inject(tmp_path: Path, capsys):
    status = main(['gen', '--model', str(FIXTURES / 'models' / 'chain.json'),
                   '--min-logs', '1', '--visits', '4', '--out', str(tmp_path / 'logs'), '--seed', '0'])
    assert status == 0
    assert capsys.readouterr().out == 'Generated 4 logs, 8 entries\n'
    logs = load_log_set(tmp_path / 'logs')
    assert [log.name for log in logs] == [f'trace-00000{i}' for i in range(4)]

    status = main(['inject', '--in', str(tmp_path / 'logs'), '--out', str(tmp_path / 'noisy'),
                   '--nr', '0.5', '--n-templates', '2', '--seed', '0', '--truth', str(tmp_path / 'truth.json')])
    assert status == 0
    assert capsys.readouterr().out == 'Injected 8 entries of 2 operational templates\n'

    truth = load_ground_truth(tmp_path / 'truth.json')
    assert truth.transactional == {'x', 'y'}
    assert truth.operational == {'noise-1', 'noise-2'}
    assert load_log_set(tmp_path / 'noisy').entry_count == 16

    # Bad noise rate
    assert main(['inject', '--in', str(tmp_path / 'logs'), '--out', str(tmp_path / 'noisy'),
                 '--nr', '1', '--truth', str(tmp_path / 'truth.json')]) == 3

    # Coverage unattainable
    assert main(['gen', '--model', str(FIXTURES / 'models' / 'unreachable.json'), '--out', str(tmp_path / 'x')]) == 2


def test_eval(tmp_path: Path, capsys):
    model = tmp_path / 'model.json'
    model.write_text(low_diversity_model().json(by_alias=True))

    status = main(['eval', '--model', str(model), '--nr', '0.2,0.5', '--reps', '2', '--min-logs', '20',
                   '--out', str(tmp_path / 'sweep.csv')])
    assert status == 0

    rows = (tmp_path / 'sweep.csv').read_text().splitlines()
    assert rows[0] == 'nr,repetition,recall,specificity,achieved_nr'
    assert len(rows) == 1 + 4

    summary = (tmp_path / 'sweep-summary.csv').read_text()
    assert summary.splitlines()[0] == 'nr,mean_recall,sd_recall,mean_specificity,sd_specificity'
    assert len(summary.splitlines()) == 1 + 2
    assert capsys.readouterr().out == summary

    # Bad noise rates
    assert main(['eval', '--model', str(model), '--nr', '0.2,x', '--out', str(tmp_path / 'sweep.csv')]) == 3
    assert main(['eval', '--model', str(model), '--nr', '0,0.5', '--out', str(tmp_path / 'sweep.csv')]) == 3


def test_default_summary_path():
    assert default_summary_path(Path('out/sweep.csv')) == Path('out/sweep-summary.csv')
    assert default_summary_path(Path('out/sweep')) == Path('out/sweep-summary.csv')


def test_help(capsys):
    # Exit statuses come from the error catalog
    with pytest.raises(SystemExit) as e:
        main(['--help'])
    assert e.value.code == 0
    out = capsys.readouterr().out
    assert '  0  Success' in out
    assert '  1  Internal error (F_UNEXPECTED_ERROR)' in out
    assert '  2  Malformed log file (E_LOG_FORMAT)' in out
    assert '  3  Invalid configuration (E_CONFIG)' in out

    # Log formats are listed with their titles
    with pytest.raises(SystemExit):
        main(['clean', '--help'])
    out = ' '.join(capsys.readouterr().out.split())  # unwrap
    assert 'Log file format' in out
    assert 'JSON lines' in out
