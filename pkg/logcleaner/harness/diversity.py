""" Diversity of a state machine: how many different events may follow an event

The more diverse the successors of events are, the harder it is to tell functional flows from noise.

* eDiv(σ): the symbols on the outgoing transitions of every state that σ leads to, over the alphabet size
* sDiv: mean eDiv over the alphabet
"""

from __future__ import annotations

from typing import Dict

import numpy as np
import pydantic as pd

from logcleaner.error import exc
from logcleaner.structure.titled_enum import TitledEnum, titled
from logcleaner.translate import _

from .fsm import FsmModel


# sDiv bounds of the diversity levels
LOW_DIVERSITY_MAX = 0.41
HIGH_DIVERSITY_MIN = 0.56


@titled(_('Diversity level'), description=_('Low diversity means regular, predictable flows'))
class DiversityLevel(TitledEnum):
    LOW = 'low', _('Low diversity')
    MEDIUM = 'medium', _('Medium diversity')
    HIGH = 'high', _('High diversity')


class DiversityReport(pd.BaseModel):
    """ Diversity of every symbol, and of the system """
    ediv: Dict[str, float]
    sdiv: float = pd.Field(..., ge=0, le=1)
    level: DiversityLevel


def ediv_score(model: FsmModel, sigma: str) -> float:
    """ Event diversity of a symbol, in [0, 1]

    Raises:
        exc.E_ARGUMENT: `sigma` is not in the alphabet
    """
    if sigma not in model.alphabet:
        raise exc.E_ARGUMENT.format(_('Symbol {sigma!r} is not in the alphabet'), name='sigma', sigma=sigma)

    return _ediv(model, model.outgoing(), sigma)


def sdiv_score(model: FsmModel) -> float:
    """ System diversity: mean eDiv over the alphabet, in [0, 1]

    Raises:
        exc.E_ARGUMENT: empty alphabet
    """
    return diversity_report(model).sdiv


def diversity_report(model: FsmModel) -> DiversityReport:
    """ eDiv of every symbol, sDiv, and the diversity level

    Raises:
        exc.E_ARGUMENT: empty alphabet
    """
    if not model.alphabet:
        raise exc.E_ARGUMENT(_('System diversity of an empty alphabet is undefined'), name='alphabet')

    outgoing = model.outgoing()
    ediv = {sigma: _ediv(model, outgoing, sigma) for sigma in model.alphabet}
    sdiv = float(np.mean(list(ediv.values())))

    return DiversityReport(ediv=ediv, sdiv=sdiv, level=diversity_level(sdiv))


def diversity_level(sdiv: float) -> DiversityLevel:
    """ Tell low-diversity systems from high-diversity ones """
    if sdiv <= LOW_DIVERSITY_MAX:
        return DiversityLevel.LOW
    elif sdiv >= HIGH_DIVERSITY_MIN:
        return DiversityLevel.HIGH
    else:
        return DiversityLevel.MEDIUM


def _ediv(model: FsmModel, outgoing: dict, sigma: str) -> float:
    targets = {t.to for t in model.transitions if t.symbol == sigma}
    successors = {t.symbol for state in targets for t in outgoing[state]}
    return len(successors) / len(model.alphabet)
