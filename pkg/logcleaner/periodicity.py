""" Periodicity analysis: find and remove globally periodic templates

A template is globally periodic for a set of logs when, in every log, it occurs
* periodically: the timestamp differences of its entries barely deviate (MAD ≤ δ), and
* from the beginning to the end: its first entry is no later than one average period (ATD) after the start of the log,
  and its last entry no earlier than one ATD before the end of the log.

Heartbeats and other periodic status messages are the typical example.
"""

from __future__ import annotations

import logging
from collections import abc
from dataclasses import dataclass
from typing import Optional

import numpy as np
import pydantic as pd

from logcleaner.error import exc
from logcleaner.log import Log, LogSet, TemplateId, remove_messages_of


logger = logging.getLogger(__name__)

# Periodicity is only checked with at least this many entries: two timestamp differences
MIN_OCCURRENCES = 3


class PeriodicityConfig(pd.BaseModel):
    """ Periodicity analysis parameters """
    # Periodicity deviation threshold: the maximum MAD of timestamp differences, in timestamp units
    delta: float = pd.Field(0.2, ge=0)


@dataclass(frozen=True)
class LogPeriodicity:
    """ The periodicity check of one template in one log """
    log: str
    occurrences: int

    # Only computed with at least MIN_OCCURRENCES entries
    mad: Optional[float] = None
    atd: Optional[float] = None

    # #1: MAD ≤ δ; #2: first entry close to the start; #3: last entry close to the end
    cond1: Optional[bool] = None
    cond2: Optional[bool] = None
    cond3: Optional[bool] = None

    verdict: bool = False


@dataclass(frozen=True)
class PeriodicityDiagnostics:
    """ The periodicity checks of one template in every log """
    template: TemplateId
    logs: tuple[LogPeriodicity, ...]

    @property
    def verdict(self) -> bool:
        """ Globally periodic: periodic from the beginning to the end of every log """
        return bool(self.logs) and all(record.verdict for record in self.logs)


@dataclass(frozen=True)
class PeriodicityResult:
    """ Result of the periodicity analysis """
    # Globally periodic templates
    periodic: frozenset[TemplateId]

    # Logs without the entries of periodic templates
    logs: LogSet

    # Diagnostics for every template
    diagnostics: dict[TemplateId, PeriodicityDiagnostics]


def mad(values: abc.Sequence[float]) -> float:
    """ Mean Absolute Deviation: mean of |v - mean(values)|

    Raises:
        exc.E_ARGUMENT: empty input
    """
    if len(values) == 0:
        raise exc.E_ARGUMENT('MAD of an empty sequence is undefined', name='values')

    a = np.asarray(values, dtype=float)
    return float(np.mean(np.abs(a - a.mean())))


def atd(timestamps: abc.Sequence[float]) -> float:
    """ Average of the Timestamp Differences of sorted timestamps: (last - first) / (count - 1)

    Raises:
        exc.E_ARGUMENT: fewer than 2 timestamps
    """
    if len(timestamps) < 2:
        raise exc.E_ARGUMENT('ATD needs at least 2 timestamps', name='timestamps')

    return (timestamps[-1] - timestamps[0]) / (len(timestamps) - 1)


def is_periodic_begin_to_end(template: TemplateId, log: Log, delta: float) -> tuple[bool, LogPeriodicity]:
    """ Does `template` occur periodically from the beginning to the end of `log`?

    Returns:
        (verdict, diagnostics record)
    """
    timestamps = [entry.timestamp for entry in log.entries if entry.template == template]
    record = _check_log(log, timestamps, delta)
    return record.verdict, record


def periodicity_analysis(logs: LogSet, config: PeriodicityConfig = PeriodicityConfig()) -> PeriodicityResult:
    """ Find globally periodic templates and remove their entries

    A template that is absent from some log is not periodic in that log, and therefore not globally periodic.
    """
    # Group timestamps once per log
    grouped = [log.timestamps_by_template() for log in logs]

    diagnostics = {
        template: PeriodicityDiagnostics(
            template=template,
            logs=tuple(
                _check_log(log, groups.get(template, ()), config.delta)
                for log, groups in zip(logs, grouped)
            ),
        )
        for template in sorted(logs.templates)
    }

    periodic = frozenset(
        template
        for template, diagnostic in diagnostics.items()
        if diagnostic.verdict
    )
    logger.info('Periodicity analysis (delta=%g): globally periodic: %s', config.delta, sorted(periodic) or 'none')

    return PeriodicityResult(
        periodic=periodic,
        logs=remove_messages_of(periodic, logs),
        diagnostics=diagnostics,
    )


def _check_log(log: Log, timestamps: abc.Sequence[float], delta: float) -> LogPeriodicity:
    """ Check the timestamps of a template's entries in `log` """
    if len(timestamps) < MIN_OCCURRENCES:
        return LogPeriodicity(log=log.name, occurrences=len(timestamps))

    mad_value = mad(np.diff(np.asarray(timestamps, dtype=float)))
    atd_value = atd(timestamps)

    cond1 = mad_value <= delta
    cond2 = timestamps[0] - log.entries[0].timestamp <= atd_value
    cond3 = log.entries[-1].timestamp - timestamps[-1] <= atd_value

    return LogPeriodicity(
        log=log.name,
        occurrences=len(timestamps),
        mad=mad_value,
        atd=atd_value,
        cond1=cond1,
        cond2=cond2,
        cond3=cond3,
        verdict=cond1 and cond2 and cond3,
    )
