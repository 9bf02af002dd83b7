""" Dependency scores: how strongly a template depends on the others

For an entry e_x of template x, its first-following entry of template y is the first entry of y
after e_x and before the next entry of x. The co-occurrence score of the pair is 1 / (index distance),
or 0 when there is no first-following entry (NaE, "not an entry").

* dScore_f(x, y, L): mean co-occurrence score over all entries of x in L. How likely and how closely x is followed by y.
* dScore_b(x, y, L): the same on reversed logs. How likely and how closely x is preceded by y.
* dScore(x, y, L) = max(dScore_f, dScore_b)
* mScore[x]: max of dScore(x, y, L) over all other templates y

Operational templates are interleaved with the functional flow at random, and get low mScores.
"""

from __future__ import annotations

import logging
import math
from collections import abc
from dataclasses import dataclass
from typing import Union

import numpy as np

from logcleaner.error import exc
from logcleaner.log import Log, LogSet, TemplateId, reverse_all
from logcleaner.translate import _
from logcleaner.util.magic_symbol import MagicSymbol, NaE


logger = logging.getLogger(__name__)


# Maximum dependency score of every template
ScoreMap = dict[TemplateId, float]

# An entry index, or NaE
FirstFollowing = Union[int, MagicSymbol]


def first_following(ex: int, y: TemplateId, log: Log) -> FirstFollowing:
    """ Find the first entry of `y` after entry `ex` and before the next entry of the same template as `ex`

    Args:
        ex: Index of an entry of template x
        y: The template to look for
        log: The log

    Returns:
        Index of the entry, or NaE

    Raises:
        exc.E_ARGUMENT: `ex` out of range, or `y` is the template of `ex`
    """
    if not 0 <= ex < len(log):
        raise exc.E_ARGUMENT.format('Entry index {ex} is out of range for log {log!r}', name='ex', ex=ex, log=log.name)

    x = log.entries[ex].template
    if x == y:
        raise exc.E_ARGUMENT.format('Template {y!r} is the template of the entry itself', name='y', y=y)

    for i in range(ex + 1, len(log)):
        template = log.entries[i].template
        if template == y:
            return i
        if template == x:
            break
    return NaE


def cscore(ex: int, ey: FirstFollowing, log: Log) -> float:
    """ Co-occurrence score of an entry and its first-following entry: 1 / (index distance), or 0 for NaE

    Raises:
        exc.E_ARGUMENT: `ey` is not after `ex`
    """
    if ey is NaE:
        return 0.0

    distance = ey - ex  # type: ignore[operator]
    if distance <= 0:
        raise exc.E_ARGUMENT.format('The first-following entry must come after entry {ex}, got {ey}', name='ey', ex=ex, ey=ey)
    return 1.0 / distance


class DependencyScorer:
    """ Index a LogSet once, then answer forward dependency score queries for any (x, y)

    All logs are laid end to end, so an entry has a global position.
    The search window of an entry of x ends at the next entry of x, or at the end of its own log, whichever is first.
    Within a log, global distances equal index distances.
    """

    # Global positions of every template's entries, ascending
    positions: dict[TemplateId, np.ndarray]

    # For every entry of a template: the exclusive end of its search window
    window_ends: dict[TemplateId, np.ndarray]

    def __init__(self, logs: LogSet):
        positions: dict[TemplateId, list[int]] = {}
        log_ends: dict[TemplateId, list[int]] = {}

        offset = 0
        for log in logs:
            end = offset + len(log)
            for i, entry in enumerate(log.entries, start=offset):
                positions.setdefault(entry.template, []).append(i)
                log_ends.setdefault(entry.template, []).append(end)
            offset = end

        self.positions = {}
        self.window_ends = {}
        for template, pos in positions.items():
            p = np.asarray(pos, dtype=np.int64)
            next_same = np.append(p[1:], np.iinfo(np.int64).max)
            self.positions[template] = p
            self.window_ends[template] = np.minimum(next_same, np.asarray(log_ends[template], dtype=np.int64))

    @property
    def templates(self) -> frozenset[TemplateId]:
        return frozenset(self.positions)

    def count(self, template: TemplateId) -> int:
        """ The number of entries of a template """
        p = self.positions.get(template)
        return 0 if p is None else len(p)

    def cscores(self, x: TemplateId, y: TemplateId) -> np.ndarray:
        """ Co-occurrence score of every entry of x with its first-following entry of y. 0 for NaE """
        px = self.positions[x]
        py = self.positions.get(y)
        if py is None:
            return np.zeros(len(px))

        # The first entry of y after every entry of x
        idx = np.searchsorted(py, px, side='right')
        found = idx < len(py)
        candidate = py[np.minimum(idx, len(py) - 1)]

        # ... and before the end of the window
        hit = found & (candidate < self.window_ends[x])
        distance = np.where(hit, candidate - px, 1)
        return np.where(hit, 1.0 / distance, 0.0)

    def forward(self, x: TemplateId, y: TemplateId) -> float:
        """ Forward dependency score of x on y

        Raises:
            exc.E_ARGUMENT: x == y, or x never occurs
        """
        if x == y:
            raise exc.E_ARGUMENT.format('Dependency of template {x!r} on itself is undefined', name='y', x=x)
        if self.count(x) == 0:
            raise exc.E_ARGUMENT.format('Template {x!r} does not occur: its dependency score is undefined', name='x', x=x)

        scores = self.cscores(x, y)
        return math.fsum(scores) / len(scores)


def dscore_forward(x: TemplateId, y: TemplateId, logs: LogSet) -> float:
    """ How likely and how closely an occurrence of x is followed by an occurrence of y, in [0, 1]

    Raises:
        exc.E_ARGUMENT: x == y, or x never occurs
    """
    return DependencyScorer(logs).forward(x, y)


def dscore_backward(x: TemplateId, y: TemplateId, logs: LogSet) -> float:
    """ How likely and how closely an occurrence of x is preceded by an occurrence of y: dScore_f on reversed logs

    Raises:
        exc.E_ARGUMENT: x == y, or x never occurs
    """
    return dscore_forward(x, y, reverse_all(logs))


def dscore_calc(x: TemplateId, y: TemplateId, logs: LogSet) -> float:
    """ Dependency score of x on y: the larger of the forward and backward scores

    Raises:
        exc.E_ARGUMENT: x == y, or x never occurs
    """
    return max(dscore_forward(x, y, logs), dscore_backward(x, y, logs))


@dataclass(frozen=True)
class PairScore:
    """ Dependency scores of x on y """
    forward: float
    backward: float

    @property
    def score(self) -> float:
        return max(self.forward, self.backward)


def pairwise_scores(logs: LogSet) -> dict[tuple[TemplateId, TemplateId], PairScore]:
    """ Forward and backward dependency scores of every ordered pair of distinct templates """
    forward_scorer = DependencyScorer(logs)
    backward_scorer = DependencyScorer(reverse_all(logs))
    templates = sorted(forward_scorer.templates)

    return {
        (x, y): PairScore(forward=forward_scorer.forward(x, y), backward=backward_scorer.forward(x, y))
        for x in templates
        for y in templates
        if x != y
    }


def compute_mscore(logs: LogSet) -> ScoreMap:
    """ Maximum dependency score of every template on any other template

    Raises:
        exc.E_DEPENDENCY_UNDEFINED: fewer than 2 templates
    """
    if len(logs.templates) < 2:
        raise exc.E_DEPENDENCY_UNDEFINED.format(
            _('Dependency undefined: {count} template(s) found, at least 2 are needed'),
            count=len(logs.templates),
            templates=sorted(logs.templates),
        )

    mscore: ScoreMap = {}
    for (x, _y), pair in pairwise_scores(logs).items():
        mscore[x] = max(mscore.get(x, 0.0), pair.score)

    logger.debug('mScore: %s', {x: round(s, 6) for x, s in mscore.items()})
    return mscore


def format_score_table(scores: ScoreMap) -> abc.Iterator[str]:
    """ Format an mScore table for humans: aligned, sorted by descending score """
    width = max([len('template'), *(len(t) for t in scores)])
    yield f'{"template":<{width}}  mScore'
    for template, score in sorted(scores.items(), key=lambda item: (-item[1], item[0])):
        yield f'{template:<{width}}  {score:.6f}'
