""" Read and write structured log files

One file is one log; the log is named after the file stem.

Formats:
* JSON lines: `{"ts": <number>, "tpl": "<template id>", "params": {"<name>": "<value>", ...}}`, "params" optional
* TSV (for hand-written fixtures): `ts<TAB>tpl<TAB>k=v;k=v`, the parameter column optional

The writer always emits JSON lines.
"""

from __future__ import annotations

import json
import logging
import math
import os
from collections import abc
from pathlib import Path
from typing import Union

from logcleaner.error import exc
from logcleaner.structure.titled_enum import TitledEnum, titled
from logcleaner.translate import _

from .model import LogEntry, Log, LogSet


logger = logging.getLogger(__name__)


@titled(_('Log file format'), description=_('One file is one log, named after the file stem'))
class LogFormat(TitledEnum):
    AUTO = 'auto', _('Detect by file suffix')
    JSONL = 'jsonl', _('JSON lines')
    TSV = 'tsv', _('Tab-separated values')


# File suffixes of every format
SUFFIXES: dict[LogFormat, tuple[str, ...]] = {
    LogFormat.JSONL: ('.jsonl', '.json', '.ndjson'),
    LogFormat.TSV: ('.tsv',),
}


def load_log_set(directory: Union[str, os.PathLike], format: LogFormat = LogFormat.AUTO) -> LogSet:
    """ Load every log file from a directory

    Files are read in name order. Entries of every log get sorted by timestamp; ties keep file order.

    Args:
        directory: The directory with log files
        format: The format of the files. AUTO: detect by suffix

    Raises:
        exc.E_LOG_IO: the directory or a file cannot be read
        exc.E_NO_LOGS: no log files in the directory
        exc.E_LOG_FORMAT: a malformed line, or two files with the same name stem
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise exc.E_LOG_IO.format(_('Not a directory: {path}'), path=str(directory))

    paths = list_log_files(directory, format)
    if not paths:
        raise exc.E_NO_LOGS.format(_('No logs found in {path}'), path=str(directory))

    # Logs are named by the file stem: 'run.jsonl' and 'run.tsv' would become one log
    seen: dict[str, Path] = {}
    for path in paths:
        if path.stem in seen:
            raise exc.E_LOG_FORMAT.format(
                _('Log name {name!r} is used by both {first} and {second}'),
                _('Rename one of the files'),
                name=path.stem, first=seen[path.stem].name, second=path.name,
                path=str(path), line=0, reason='duplicate log name',
            )
        seen[path.stem] = path

    logs = LogSet(tuple(
        load_log(path, format)
        for path in paths
    ))
    logger.info('Loaded %d logs, %d entries, %d templates from %s',
                len(logs), logs.entry_count, len(logs.templates), directory)
    return logs


def list_log_files(directory: Path, format: LogFormat = LogFormat.AUTO) -> list[Path]:
    """ List the log files of a directory, sorted by name. Hidden files are ignored """
    if format is LogFormat.AUTO:
        suffixes = tuple(s for ss in SUFFIXES.values() for s in ss)
    else:
        suffixes = SUFFIXES[format]

    return sorted(
        path
        for path in directory.iterdir()
        if path.is_file() and not path.name.startswith('.') and path.suffix.lower() in suffixes
    )


def load_log(path: Union[str, os.PathLike], format: LogFormat = LogFormat.AUTO) -> Log:
    """ Load a single log file

    Raises:
        exc.E_LOG_IO: the file cannot be read
        exc.E_LOG_FORMAT: a malformed line
    """
    path = Path(path)
    if format is LogFormat.AUTO:
        format = LogFormat.TSV if path.suffix.lower() in SUFFIXES[LogFormat.TSV] else LogFormat.JSONL

    parse_line = _parse_tsv_line if format is LogFormat.TSV else _parse_jsonl_line

    try:
        with path.open('rt', encoding='utf-8') as f:
            entries = [
                _parse_entry(parse_line, line, path=path, lineno=lineno)
                for lineno, line in enumerate(f, start=1)
                if line.strip()
            ]
    except (OSError, UnicodeDecodeError) as e:
        raise exc.E_LOG_IO.format(_('Cannot read {path}: {reason}'), path=str(path), reason=str(e)) from e

    return Log.sorted(path.stem, entries)


def write_log_set(logs: LogSet, directory: Union[str, os.PathLike]):
    """ Write every log as `<name>.jsonl` into a directory. The directory is created if needed

    Raises:
        exc.E_LOG_IO: cannot write
    """
    directory = Path(directory)
    try:
        directory.mkdir(parents=True, exist_ok=True)
        for log in logs:
            write_log(log, directory / f'{log.name}.jsonl')
    except OSError as e:
        raise exc.E_LOG_IO.format(_('Cannot write to {path}: {reason}'), path=str(directory), reason=str(e)) from e


def write_log(log: Log, path: Path):
    """ Write a log as JSON lines """
    with path.open('wt', encoding='utf-8') as f:
        for line in format_jsonl(log.entries):
            f.write(line)
            f.write('\n')


def format_jsonl(entries: abc.Iterable[LogEntry]) -> abc.Iterator[str]:
    """ Format entries as JSON lines. "params" is omitted when empty """
    for entry in entries:
        obj: dict = {'ts': entry.timestamp, 'tpl': entry.template}
        if entry.params:
            obj['params'] = dict(entry.params)
        yield json.dumps(obj, ensure_ascii=False)


# region Parsing

class _LineError(ValueError):
    """ A line is malformed. The message is the reason """


def _parse_entry(parse_line: abc.Callable[[str], LogEntry], line: str, *, path: Path, lineno: int) -> LogEntry:
    try:
        return parse_line(line)
    except _LineError as e:
        raise exc.E_LOG_FORMAT.format(
            _('{path}:{line}: {reason}'),
            path=str(path), line=lineno, reason=str(e),
        ) from e


def _parse_jsonl_line(line: str) -> LogEntry:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as e:
        raise _LineError(f'invalid JSON: {e.msg}') from e

    if not isinstance(obj, dict):
        raise _LineError('expected a JSON object')

    params = obj.get('params') or {}
    if not isinstance(params, dict) or not all(isinstance(v, str) for v in params.values()):
        raise _LineError('"params" must be an object with string values')

    return LogEntry(
        timestamp=_timestamp(obj.get('ts')),
        template=_template(obj.get('tpl')),
        params=params,
    )


def _parse_tsv_line(line: str) -> LogEntry:
    columns = line.rstrip('\r\n').split('\t')
    if len(columns) not in (2, 3):
        raise _LineError(f'expected 2 or 3 tab-separated columns, got {len(columns)}')

    ts, tpl = columns[0], columns[1]
    try:
        timestamp = float(ts)
    except ValueError as e:
        raise _LineError(f'timestamp is not a number: {ts!r}') from e

    params = {}
    if len(columns) == 3 and columns[2].strip():
        for pair in columns[2].split(';'):
            name, eq, value = pair.partition('=')
            if not eq or not name:
                raise _LineError(f'parameter is not "name=value": {pair!r}')
            params[name] = value

    return LogEntry(
        timestamp=_timestamp(timestamp),
        template=_template(tpl),
        params=params,
    )


def _timestamp(value) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise _LineError(f'"ts" must be a number, got {value!r}')

    try:
        value = float(value)
    except OverflowError:
        raise _LineError(f'timestamp is too large: {value}') from None
    if not math.isfinite(value):
        raise _LineError(f'timestamp is not finite: {value!r}')
    if value < 0:
        raise _LineError(f'timestamp is negative: {value!r}')
    return value


def _template(value) -> str:
    if not isinstance(value, str) or not value:
        raise _LineError(f'"tpl" must be a non-empty string, got {value!r}')
    return value

# endregion
