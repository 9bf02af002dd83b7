""" Operations on logs that the analyses share """

from __future__ import annotations

from collections import abc

from .model import Log, LogSet, TemplateId


def reverse(log: Log) -> Log:
    """ Reverse the order of entries. Timestamps are kept as they are

    A reversed log is not sorted by timestamp: it only feeds index-based dependency analysis.
    """
    return Log._unchecked(log.name, log.entries[::-1])


def reverse_all(logs: LogSet) -> LogSet:
    """ Reverse every log of the set """
    return LogSet(tuple(reverse(log) for log in logs))


def remove_messages_of(templates: abc.Iterable[TemplateId], logs: LogSet) -> LogSet:
    """ Remove every entry whose template is in `templates`

    Surviving entries keep their relative order and are not copied.
    Logs that become empty are kept, empty.
    """
    remove = frozenset(templates)
    if not remove & logs.templates:
        return logs

    return LogSet(tuple(
        _keep_entries(log, remove)
        for log in logs
    ))


def _keep_entries(log: Log, remove: frozenset[TemplateId]) -> Log:
    kept = tuple(entry for entry in log.entries if entry.template not in remove)
    if len(kept) == len(log.entries):
        return log

    # A subsequence keeps the order of its source, sorted or reversed
    return Log._unchecked(log.name, kept)
