import json

import numpy as np
import pytest

from logcleaner.error import exc
from logcleaner.log import LogEntry, LogFormat, load_log, load_log_set, write_log_set
from tests.lib import FIXTURES


def test_load_running_example(l_org):
    """ The running example: one log, 18 entries, 4 templates """
    assert len(l_org) == 1
    assert l_org.entry_count == 18
    assert l_org.templates == {'send', 'check', 'ping', 'memory'}

    log = l_org.get('l_org')
    assert log[1] == LogEntry(1.0, 'send', {'user': 'alice'})

    # Same timestamps keep their file order
    assert log.templates[3:5] == ['memory', 'check']
    assert log.templates[6:8] == ['check', 'memory']


def test_load_formats(tmp_path):
    (tmp_path / 'a.jsonl').write_text(
        '{"ts": 0, "tpl": "x", "params": {"k": "v"}}\n'
        '\n'  # blank lines are skipped
        '{"ts": 1.5, "tpl": "y"}\n'
    )
    (tmp_path / 'b.tsv').write_text('0\tx\tk=v;n=1\n2\ty\n')
    (tmp_path / 'notes.txt').write_text('not a log')
    (tmp_path / '.hidden.jsonl').write_text('garbage')

    # Auto: by suffix
    logs = load_log_set(tmp_path)
    assert [log.name for log in logs] == ['a', 'b']
    assert logs.get('a')[0].params == {'k': 'v'}
    assert logs.get('b')[0].params == {'k': 'v', 'n': '1'}
    assert logs.get('b')[1] == LogEntry(2.0, 'y')

    # Explicit format: only these files
    logs = load_log_set(tmp_path, LogFormat.TSV)
    assert [log.name for log in logs] == ['b']


def test_load_errors(tmp_path):
    # Not a directory
    with pytest.raises(exc.E_LOG_IO):
        load_log_set(tmp_path / 'missing')

    # No logs
    with pytest.raises(exc.E_NO_LOGS) as e:
        load_log_set(tmp_path)
    assert 'No logs found' in e.value.error
    assert e.value.exitcode == 2

    # Malformed lines
    bad_lines = {
        'not json': 'invalid JSON',
        '[1, 2]': 'expected a JSON object',
        '{"ts": "1", "tpl": "x"}': '"ts" must be a number',
        '{"ts": true, "tpl": "x"}': '"ts" must be a number',
        '{"ts": -1, "tpl": "x"}': 'timestamp is negative',
        '{"ts": 1}': '"tpl" must be a non-empty string',
        '{"ts": 1, "tpl": "x", "params": {"a": 1}}': '"params" must be an object with string values',
    }
    for line, reason in bad_lines.items():
        path = tmp_path / 'bad.jsonl'
        path.write_text('{"ts": 0, "tpl": "x"}\n' + line + '\n')

        with pytest.raises(exc.E_LOG_FORMAT) as e:
            load_log(path)
        assert e.value.info['path'] == str(path)
        assert e.value.info['line'] == 2
        assert reason in e.value.info['reason']

    # Non-finite timestamps in TSV
    path = tmp_path / 'bad.tsv'
    for line, reason in {'inf\tx': 'not finite', 'x\ty': 'not a number', '1': 'columns', '1\tx\tnovalue': 'name=value'}.items():
        path.write_text(line + '\n')
        with pytest.raises(exc.E_LOG_FORMAT) as e:
            load_log(path)
        assert reason in e.value.info['reason']

    # A timestamp too large for a float
    path = tmp_path / 'huge.jsonl'
    path.write_text('{"ts": 1' + '0' * 400 + ', "tpl": "x"}\n')
    with pytest.raises(exc.E_LOG_FORMAT) as e:
        load_log(path)
    assert 'too large' in e.value.info['reason']
    assert e.value.exitcode == 2


def test_load_shuffled(tmp_path):
    """ Shuffled lines load as the same log: the loader sorts """
    rng = np.random.default_rng(7)
    timestamps = np.sort(rng.choice(10_000, size=100, replace=False))
    lines = [json.dumps({'ts': int(ts), 'tpl': f't{rng.integers(5)}'}) for ts in timestamps]

    (tmp_path / 'sorted').mkdir()
    (tmp_path / 'sorted' / 'l.jsonl').write_text('\n'.join(lines))

    (tmp_path / 'shuffled').mkdir()
    (tmp_path / 'shuffled' / 'l.jsonl').write_text('\n'.join(rng.permutation(lines)))

    assert load_log_set(tmp_path / 'shuffled') == load_log_set(tmp_path / 'sorted')


def test_write_log_set(tmp_path, l_org):
    write_log_set(l_org, tmp_path / 'out')

    # JSON lines, named after the log
    lines = (tmp_path / 'out' / 'l_org.jsonl').read_text().splitlines()
    assert json.loads(lines[0]) == {'ts': 1.0, 'tpl': 'ping'}
    assert json.loads(lines[1]) == {'ts': 1.0, 'tpl': 'send', 'params': {'user': 'alice'}}

    # Reads back the same
    assert load_log_set(tmp_path / 'out') == l_org


def test_params_do_not_matter():
    """ Logs with and without parameters have the same timestamps and templates """
    rich = load_log_set(FIXTURES / 'interleaved')
    bare = load_log_set(FIXTURES / 'interleaved_bare')
    assert [(e.timestamp, e.template) for e in rich.get('l_inter')] == [(e.timestamp, e.template) for e in bare.get('l_inter')]


def test_duplicate_log_names(tmp_path):
    """ Two files with the same stem would name the same log """
    (tmp_path / 'run.jsonl').write_text('{"ts": 0, "tpl": "x"}\n')
    (tmp_path / 'run.tsv').write_text('1\ty\n')

    with pytest.raises(exc.E_LOG_FORMAT) as e:
        load_log_set(tmp_path)
    assert e.value.info['reason'] == 'duplicate log name'
    assert 'run.jsonl' in e.value.error and 'run.tsv' in e.value.error

    # One format at a time: no clash
    assert [log.name for log in load_log_set(tmp_path, LogFormat.TSV)] == ['run']
