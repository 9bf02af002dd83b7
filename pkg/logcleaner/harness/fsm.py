""" Finite state machines, and transactional logs generated from them

A generated log is a random walk from the initial state: every transition emits its symbol as a log entry.
Entry timestamps are entry indexes.

FSM file format (JSON):

    {
        "states": ["A", "B"],
        "alphabet": ["x", "y"],
        "initial": "A",
        "accepting": ["A"],
        "transitions": [{"from": "A", "symbol": "x", "to": "B"}, ...]
    }
"""

from __future__ import annotations

import json
import logging
import os
from collections import abc, deque
from pathlib import Path
from typing import List, Optional, Union

import numpy as np
import pydantic as pd

from logcleaner.error import exc
from logcleaner.log import Log, LogEntry, LogSet
from logcleaner.translate import _


logger = logging.getLogger(__name__)

# Trace generation defaults
STOP_PROBABILITY = 0.2
VISITS_PER_STATE = 4
MIN_LOGS = 1000
MAX_LEN = 50

# Give up when coverage is still not reached after that many walks
MAX_WALKS = 1_000_000

# Seed for numpy.random.default_rng(): an int, a SeedSequence, or None for fresh entropy
Seed = Union[int, np.random.SeedSequence, None]


class Transition(pd.BaseModel):
    """ A transition: in `from` state, `symbol` leads to the `to` state """
    from_: str = pd.Field(..., alias='from')
    symbol: str
    to: str

    class Config:
        allow_population_by_field_name = True
        frozen = True


class FsmModel(pd.BaseModel):
    """ A finite state machine over an alphabet of event templates """
    states: List[str]
    alphabet: List[str]
    initial: str
    accepting: List[str] = []
    transitions: List[Transition] = []

    @pd.validator('states', 'alphabet', 'accepting')
    def check_unique(cls, v: list[str]):
        duplicates = sorted({x for x in v if v.count(x) > 1})
        if duplicates:
            raise ValueError(f'duplicate values: {duplicates}')
        return v

    @pd.validator('states')
    def check_states(cls, v: list[str]):
        if not v:
            raise ValueError('at least one state is required')
        return v

    @pd.root_validator(skip_on_failure=True)
    def check_references(cls, values):
        states, alphabet = set(values['states']), set(values['alphabet'])

        if values['initial'] not in states:
            raise ValueError(f'initial state {values["initial"]!r} is not a state')

        unknown = sorted(set(values['accepting']) - states)
        if unknown:
            raise ValueError(f'accepting states are not states: {unknown}')

        for t in values['transitions']:
            if t.from_ not in states or t.to not in states:
                raise ValueError(f'transition endpoints must be states: {t.from_!r} -> {t.to!r}')
            if t.symbol not in alphabet:
                raise ValueError(f'transition symbol {t.symbol!r} is not in the alphabet')
        return values

    def outgoing(self) -> dict[str, list[Transition]]:
        """ Outgoing transitions of every state, in file order """
        index: dict[str, list[Transition]] = {state: [] for state in self.states}
        for t in self.transitions:
            index[t.from_].append(t)
        return index

    def distances(self) -> dict[str, int]:
        """ The length of the shortest path from the initial state to every reachable state """
        outgoing = self.outgoing()
        distance = {self.initial: 0}
        queue = deque([self.initial])
        while queue:
            state = queue.popleft()
            for t in outgoing[state]:
                if t.to not in distance:
                    distance[t.to] = distance[state] + 1
                    queue.append(t.to)
        return distance

    def accepts_path(self, symbols: abc.Sequence[str]) -> bool:
        """ Can `symbols` be emitted by a walk from the initial state? """
        outgoing = self.outgoing()
        current = {self.initial}
        for symbol in symbols:
            current = {t.to for state in current for t in outgoing[state] if t.symbol == symbol}
            if not current:
                return False
        return True


def load_fsm(path: Union[str, os.PathLike]) -> FsmModel:
    """ Load an FSM file

    Raises:
        exc.E_LOG_IO: cannot read
        exc.E_MODEL_FORMAT: invalid JSON, or an invalid model
    """
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except (OSError, UnicodeDecodeError) as e:
        raise exc.E_LOG_IO.format(_('Cannot read {path}: {reason}'), path=str(path), reason=str(e)) from e

    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise exc.E_MODEL_FORMAT.format(_('{path}: invalid JSON: {reason}'), path=str(path), reason=e.msg) from e

    try:
        return FsmModel.parse_obj(obj)
    except pd.ValidationError as e:
        raise exc.E_MODEL_FORMAT.format(
            _('{path}: invalid state machine: {reason}'),
            path=str(path),
            reason='; '.join(f'{".".join(map(str, err["loc"]))}: {err["msg"]}' for err in e.errors()),
        ) from e


def generate_traces(model: FsmModel,
                    visits_per_state: int = VISITS_PER_STATE,
                    min_logs: int = MIN_LOGS,
                    max_len: int = MAX_LEN,
                    seed: Seed = None,
                    *,
                    stop_probability: float = STOP_PROBABILITY) -> LogSet:
    """ Generate logs by random walks until every state is covered and there are enough logs

    A walk starts at the initial state, picks outgoing transitions uniformly, and ends:
    at a state with no outgoing transitions,
    at an accepting state with `stop_probability` (only after at least one entry),
    or after `max_len` entries.

    Walks continue until every state has been visited at least `visits_per_state` times over all logs,
    and at least `min_logs` logs have been generated.

    Args:
        model: The state machine
        visits_per_state: State coverage target
        min_logs: The minimum number of logs
        max_len: The maximum number of entries in a log
        seed: Random seed. The same seed gives the same logs.
        stop_probability: The probability to stop at an accepting state

    Raises:
        exc.E_ARGUMENT: a non-positive count
        exc.E_MODEL_FORMAT: coverage is unattainable: a state is unreachable, or farther than `max_len`,
            or the initial state has no outgoing transitions
    """
    for name, value in (('visits_per_state', visits_per_state), ('min_logs', min_logs), ('max_len', max_len)):
        if value < 1:
            raise exc.E_ARGUMENT.format(_('{name} must be at least 1, got {value}'), name=name, value=value)
    if not 0 <= stop_probability <= 1:
        raise exc.E_ARGUMENT.format(_('Stop probability must be in [0, 1], got {value}'),
                                    name='stop_probability', value=stop_probability)

    check_coverage_attainable(model, max_len)

    rng = np.random.default_rng(seed)
    outgoing = model.outgoing()
    accepting = frozenset(model.accepting)
    visits = dict.fromkeys(model.states, 0)
    width = len(str(MAX_WALKS - 1))

    logs: list[Log] = []
    while len(logs) < min_logs or min(visits.values()) < visits_per_state:
        if len(logs) >= MAX_WALKS:
            raise exc.E_MODEL_FORMAT.format(_('State coverage not reached after {count} walks'), count=len(logs))

        state = model.initial
        visits[state] += 1
        symbols: list[str] = []
        while len(symbols) < max_len:
            transitions = outgoing[state]
            if not transitions:
                break
            if state in accepting and symbols and rng.random() < stop_probability:
                break

            t = transitions[int(rng.integers(len(transitions)))]
            symbols.append(t.symbol)
            state = t.to
            visits[state] += 1

        logs.append(Log(
            f'trace-{len(logs):0{width}d}',
            tuple(LogEntry(float(i), symbol) for i, symbol in enumerate(symbols)),
        ))

    result = LogSet(tuple(logs))
    logger.info('Generated %d logs, %d entries; least visited state: %d visits',
                len(result), result.entry_count, min(visits.values()))
    return result


def check_coverage_attainable(model: FsmModel, max_len: Optional[int] = None):
    """ Make sure that random walks can visit every state

    Raises:
        exc.E_MODEL_FORMAT: a state is unreachable, or farther from the initial state than `max_len`,
            or the initial state has no outgoing transitions
    """
    distances = model.distances()

    unreachable = [state for state in model.states if state not in distances]
    if unreachable:
        raise exc.E_MODEL_FORMAT.format(_('States unreachable from the initial state: {states}'),
                                        states=', '.join(unreachable))

    if max_len is not None:
        too_far = [state for state in model.states if distances[state] > max_len]
        if too_far:
            raise exc.E_MODEL_FORMAT.format(_('States farther than {max_len} transitions from the initial state: {states}'),
                                            max_len=max_len, states=', '.join(too_far))

    if not model.outgoing()[model.initial]:
        raise exc.E_MODEL_FORMAT.format(_('The initial state {state!r} has no outgoing transitions'), state=model.initial)
