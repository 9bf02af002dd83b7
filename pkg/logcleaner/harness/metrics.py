""" Recall and specificity of a cleaning run against ground truth

* TP: operational templates removed; FN: operational templates kept
* TN: transactional templates kept; FP: transactional templates removed
"""

from __future__ import annotations

from collections import abc
from typing import Optional

import pydantic as pd

from logcleaner.error import exc
from logcleaner.log import TemplateId
from logcleaner.translate import _

from .noise import GroundTruth


class Metrics(pd.BaseModel):
    """ Classification counts, and the rates derived from them """
    tp: pd.NonNegativeInt
    fn: pd.NonNegativeInt
    tn: pd.NonNegativeInt
    fp: pd.NonNegativeInt

    # None when undefined: no operational (transactional) templates at all
    recall: Optional[float] = pd.Field(None, ge=0, le=1)
    specificity: Optional[float] = pd.Field(None, ge=0, le=1)


def classification_metrics(removed: abc.Set[TemplateId], truth: GroundTruth) -> Metrics:
    """ Score the templates removed by a cleaner

    Raises:
        exc.E_ARGUMENT: `removed` contains templates the ground truth does not know
    """
    removed = frozenset(removed)
    unknown = removed - truth.templates
    if unknown:
        raise exc.E_ARGUMENT.format(_('Removed templates are not in the ground truth: {templates}'),
                                    name='removed', templates=', '.join(sorted(unknown)))

    tp = len(truth.operational & removed)
    fn = len(truth.operational - removed)
    tn = len(truth.transactional - removed)
    fp = len(truth.transactional & removed)

    return Metrics(
        tp=tp, fn=fn, tn=tn, fp=fp,
        recall=tp / (tp + fn) if tp + fn else None,
        specificity=tn / (tn + fp) if tn + fp else None,
    )
