""" Operational noise: inject entries of fresh templates into transactional logs, at a given noise rate

Noise rate (NR): injected entries over all entries, after injection.
"""

from __future__ import annotations

import json
import logging
import os
from pathlib import Path
from typing import FrozenSet, Optional, Union

import numpy as np
import pydantic as pd

from logcleaner.error import exc
from logcleaner.log import Log, LogEntry, LogSet, TemplateId
from logcleaner.translate import _


logger = logging.getLogger(__name__)

# Fresh operational templates are named like this
NOISE_TEMPLATE_PREFIX = 'noise-'


class NoiseSpec(pd.BaseModel):
    """ What to inject """
    # The number of fresh operational templates
    n_templates: pd.PositiveInt = 5

    # Noise rate
    nr: float = pd.Field(..., gt=0, lt=1)

    seed: Optional[pd.conint(ge=0)] = None  # type: ignore[valid-type]


class GroundTruth(pd.BaseModel):
    """ Which templates are operational, and which are transactional """
    operational: FrozenSet[str]
    transactional: FrozenSet[str]

    @pd.root_validator(skip_on_failure=True)
    def check_disjoint(cls, values):
        both = values['operational'] & values['transactional']
        if both:
            raise ValueError(f'templates are both operational and transactional: {sorted(both)}')
        return values

    @property
    def templates(self) -> frozenset[str]:
        return self.operational | self.transactional

    def labels(self, logs: LogSet) -> bool:
        """ Does the ground truth label exactly the templates of `logs`? """
        return self.templates == logs.templates

    def to_json(self) -> str:
        """ Serialize, with sorted lists: the same truth always gives the same text """
        return json.dumps({
            'operational': sorted(self.operational),
            'transactional': sorted(self.transactional),
        }, indent=2) + '\n'


def load_ground_truth(path: Union[str, os.PathLike]) -> GroundTruth:
    """ Load a ground truth file written by `inject`

    Raises:
        exc.E_LOG_IO: cannot read
        exc.E_CONFIG: invalid file
    """
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except (OSError, UnicodeDecodeError) as e:
        raise exc.E_LOG_IO.format(_('Cannot read {path}: {reason}'), path=str(path), reason=str(e)) from e

    try:
        return GroundTruth.parse_raw(text)
    except pd.ValidationError as e:
        raise exc.E_CONFIG.from_pydantic_validation_error(e) from e


def inject_noise(logs: LogSet, spec: NoiseSpec) -> tuple[LogSet, GroundTruth]:
    """ Inject operational entries into transactional logs

    * k = round(nr / (1 - nr) × existing entries) entries are injected, so that k / (k + existing) ≈ nr
    * Every log gets a share of k proportional to its length (largest remainders get the leftovers)
    * Every injected entry gets one of the fresh templates, uniformly; each one is used at least once when k ≥ n_templates
    * Timestamps are uniform over the time span of the target log. Transactional entries keep their order.

    Returns:
        (noisy logs, ground truth). All original templates are transactional;
        the fresh templates that got entries are operational.

    Raises:
        exc.E_ARGUMENT: no entries to inject into
    """
    existing = logs.entry_count
    if existing == 0:
        raise exc.E_ARGUMENT(_('Cannot inject noise into logs without entries'), name='logs')

    rng = np.random.default_rng(spec.seed)
    templates = fresh_templates(spec.n_templates, logs.templates)

    k = round(spec.nr / (1 - spec.nr) * existing)
    counts = apportion(k, [len(log) for log in logs])
    assignment = _assign_templates(rng, k, len(templates))

    noisy = []
    offset = 0
    for log, count in zip(logs, counts):
        if count == 0:
            noisy.append(log)
            continue

        first, last = log.entries[0].timestamp, log.entries[-1].timestamp
        timestamps = rng.uniform(first, last, size=count) if last > first else np.full(count, first)
        injected = [
            LogEntry(float(ts), templates[i])
            for ts, i in zip(timestamps, assignment[offset:offset + count])
        ]
        offset += count

        # Stable sort: transactional entries come first, and keep their order
        noisy.append(Log.sorted(log.name, log.entries + tuple(injected)))

    used = frozenset(templates[i] for i in np.unique(assignment))
    truth = GroundTruth(operational=used, transactional=logs.templates)
    result = LogSet(tuple(noisy))

    logger.info('Injected %d entries of %d templates: NR %.4f (requested %g)',
                k, len(used), k / result.entry_count, spec.nr)
    return result, truth


def fresh_templates(n: int, existing: frozenset[TemplateId]) -> list[TemplateId]:
    """ `n` template ids that are not in `existing`: noise-1, noise-2, ... """
    templates = []
    i = 0
    while len(templates) < n:
        i += 1
        template = f'{NOISE_TEMPLATE_PREFIX}{i}'
        if template not in existing:
            templates.append(template)
    return templates


def apportion(total: int, weights: list[int]) -> list[int]:
    """ Split `total` proportionally to integer `weights`: largest remainders get the leftovers, ties go to the first

    Example:
        apportion(10, [1, 1, 1]) -> [4, 3, 3]
    """
    weight = sum(weights)
    if weight == 0:
        return [0] * len(weights)

    shares = [total * w // weight for w in weights]
    remainders = [total * w % weight for w in weights]
    leftover = total - sum(shares)
    for i in sorted(range(len(weights)), key=lambda i: -remainders[i])[:leftover]:
        shares[i] += 1
    return shares


def _assign_templates(rng: np.random.Generator, k: int, n: int) -> np.ndarray:
    """ Template index of each of `k` entries; each of `n` templates at least once when k ≥ n """
    if k >= n:
        return rng.permutation(np.concatenate([np.arange(n), rng.integers(n, size=k - n)]))
    return rng.integers(n, size=k)


def achieved_noise_rate(logs: LogSet, truth: GroundTruth) -> float:
    """ The share of operational entries among all entries """
    if logs.entry_count == 0:
        return 0.0

    occurrences = logs.occurrences()
    return sum(occurrences[t] for t in truth.operational) / logs.entry_count
