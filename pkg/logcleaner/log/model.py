""" Structured logs: entries, logs, and sets of logs

A log entry is a timestamp, an event template (the fixed part of a log message), and parameter values.
Analyses only ever look at timestamps, templates, and positions: parameters are carried along untouched.
"""

from __future__ import annotations

import math
from collections import abc, Counter
from dataclasses import dataclass, field
from typing import Mapping

from logcleaner.error import exc


# Event template id: the fixed template text, or a symbolic key for it
TemplateId = str


@dataclass(frozen=True)
class LogEntry:
    """ A single log entry: (timestamp, template, parameters) """
    # Seconds, or abstract index units for generated logs
    timestamp: float

    # Event template
    template: TemplateId

    # Parameter name => value. Opaque to every analysis
    params: Mapping[str, str] = field(default_factory=dict, hash=False)

    def __post_init__(self):
        if not math.isfinite(self.timestamp) or self.timestamp < 0:
            raise exc.E_ARGUMENT.format(
                'Timestamp must be finite and non-negative, got {value!r}',
                name='timestamp', value=self.timestamp,
            )
        if not self.template:
            raise exc.E_ARGUMENT('Template id must be a non-empty string', name='template')


@dataclass(frozen=True)
class Log:
    """ A log: a named sequence of entries, sorted by timestamp

    The 0-based position of an entry in `entries` is its index: the distance unit for dependency scores.
    Use `Log.sorted()` to build a log from unsorted entries.
    """
    name: str
    entries: tuple[LogEntry, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'entries', tuple(self.entries))
        if any(a.timestamp > b.timestamp for a, b in zip(self.entries, self.entries[1:])):
            raise exc.E_ARGUMENT.format(
                'Entries of log {log!r} are not sorted by timestamp',
                'Use Log.sorted() to sort them',
                name='entries', log=self.name,
            )

    @classmethod
    def sorted(cls, name: str, entries: abc.Iterable[LogEntry]) -> Log:
        """ Build a log, sorting entries by timestamp. Ties keep their input order """
        return cls(name, tuple(sorted(entries, key=_timestamp_key)))

    @classmethod
    def _unchecked(cls, name: str, entries: tuple[LogEntry, ...]) -> Log:
        """ Build a log without the sortedness check: for subsequences and reversed logs """
        log = object.__new__(cls)
        object.__setattr__(log, 'name', name)
        object.__setattr__(log, 'entries', entries)
        return log

    def __len__(self):
        return len(self.entries)

    def __iter__(self) -> abc.Iterator[LogEntry]:
        return iter(self.entries)

    def __getitem__(self, index: int) -> LogEntry:
        return self.entries[index]

    @property
    def templates(self) -> list[TemplateId]:
        """ Template of every entry, in sequence order """
        return [entry.template for entry in self.entries]

    def indexes_of(self, template: TemplateId) -> list[int]:
        """ Indexes of the entries with `template`, ascending """
        return [i for i, entry in enumerate(self.entries) if entry.template == template]

    def timestamps_by_template(self) -> dict[TemplateId, list[float]]:
        """ Group entry timestamps by template, in sequence order """
        groups: dict[TemplateId, list[float]] = {}
        for entry in self.entries:
            groups.setdefault(entry.template, []).append(entry.timestamp)
        return groups


@dataclass(frozen=True)
class LogSet:
    """ An ordered collection of logs, and the templates observed in them

    `templates` is always the exact union of the templates of all entries of all logs.
    """
    logs: tuple[Log, ...] = ()
    templates: frozenset[TemplateId] = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'logs', tuple(self.logs))
        object.__setattr__(self, 'templates', frozenset(
            entry.template
            for log in self.logs
            for entry in log.entries
        ))

    def __len__(self):
        return len(self.logs)

    def __iter__(self) -> abc.Iterator[Log]:
        return iter(self.logs)

    @property
    def entry_count(self) -> int:
        """ Total number of entries over all logs """
        return sum(len(log) for log in self.logs)

    def occurrences(self) -> Counter[TemplateId]:
        """ Number of entries of every template over all logs """
        return Counter(
            entry.template
            for log in self.logs
            for entry in log.entries
        )

    def get(self, name: str) -> Log:
        """ Find a log by name

        Raises:
            exc.E_ARGUMENT: no such log
        """
        for log in self.logs:
            if log.name == name:
                return log
        raise exc.E_ARGUMENT.format('No log named {log!r}', name='name', log=name)


def _timestamp_key(entry: LogEntry) -> float:
    return entry.timestamp
