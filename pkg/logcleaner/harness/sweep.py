""" Noise-rate sweeps: how well does cleaning do as noise grows?

For every noise rate and repetition: generate logs from a state machine, inject noise,
run the whole pipeline, and score the removed templates against ground truth.

Every (noise rate, repetition) cell has its own random stream, derived from the sweep seed and the cell position,
so a cell gives the same result whatever other cells are run.
"""

from __future__ import annotations

import csv
import io
import logging
import math
import os
from collections import abc
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np
import pydantic as pd

from logcleaner.error import exc
from logcleaner.pipeline import PipelineConfig, run_pipeline
from logcleaner.report import write_text_atomic
from logcleaner.settings import BANDWIDTH_RULES
from logcleaner.translate import _

from .fsm import FsmModel, MAX_LEN, MIN_LOGS, STOP_PROBABILITY, VISITS_PER_STATE, generate_traces
from .metrics import classification_metrics
from .noise import NoiseSpec, achieved_noise_rate, inject_noise


logger = logging.getLogger(__name__)

# CSV headers
ROWS_HEADER = ('nr', 'repetition', 'recall', 'specificity', 'achieved_nr')
SUMMARY_HEADER = ('nr', 'mean_recall', 'sd_recall', 'mean_specificity', 'sd_specificity')


class SweepConfig(pd.BaseModel):
    """ Parameters of every run of a sweep """
    # Trace generation
    visits_per_state: pd.PositiveInt = VISITS_PER_STATE
    min_logs: pd.PositiveInt = MIN_LOGS
    max_len: pd.PositiveInt = MAX_LEN
    stop_probability: float = pd.Field(STOP_PROBABILITY, ge=0, le=1)

    # Noise
    n_templates: pd.PositiveInt = 5

    # Cleaning. 'range' keeps the noise templates together when they are outnumbered
    delta: float = pd.Field(0.2, ge=0)
    bandwidth: Union[pd.PositiveFloat, str] = 'range'

    @pd.validator('bandwidth')
    def check_bandwidth(cls, v):
        if isinstance(v, str) and v not in BANDWIDTH_RULES:
            raise ValueError(f'must be a positive number or one of: {", ".join(BANDWIDTH_RULES)}')
        return v


@dataclass(frozen=True)
class SweepRow:
    """ The result of one run """
    nr: float
    repetition: int
    recall: Optional[float]
    specificity: Optional[float]
    achieved_nr: float


@dataclass(frozen=True)
class SweepSummary:
    """ Aggregated results of all repetitions at one noise rate. NaN when undefined in every run """
    nr: float
    mean_recall: float
    sd_recall: float
    mean_specificity: float
    sd_specificity: float


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[SweepRow, ...]
    summary: tuple[SweepSummary, ...]

    @property
    def mean_recall(self) -> float:
        """ Mean recall over all noise rates """
        return _nanmean([s.mean_recall for s in self.summary])

    @property
    def mean_specificity(self) -> float:
        """ Mean specificity over all noise rates """
        return _nanmean([s.mean_specificity for s in self.summary])


def nr_sweep(model: FsmModel,
             nr_values: abc.Sequence[float],
             repetitions: int,
             seed: int = 0,
             config: SweepConfig = SweepConfig()) -> SweepResult:
    """ Run the whole pipeline on generated, noisy logs, for every noise rate, `repetitions` times

    Args:
        model: The state machine that generates transactional logs
        nr_values: Noise rates, each in (0, 1)
        repetitions: Runs per noise rate
        seed: Sweep seed: the same seed gives the same results
        config: Generation, noise, and cleaning parameters

    Raises:
        exc.E_ARGUMENT: bad noise rates, repetitions, or seed
        exc.E_MODEL_FORMAT: the model cannot cover its states
    """
    if not nr_values:
        raise exc.E_ARGUMENT(_('At least one noise rate is required'), name='nr_values')
    bad = [nr for nr in nr_values if not 0 < nr < 1]
    if bad:
        raise exc.E_ARGUMENT.format(_('Noise rates must be in (0, 1), got: {values}'), name='nr_values', values=bad)
    if repetitions < 1:
        raise exc.E_ARGUMENT.format(_('Repetitions must be at least 1, got {value}'), name='repetitions', value=repetitions)
    if seed < 0:
        raise exc.E_ARGUMENT.format(_('Seed must be non-negative, got {value}'), name='seed', value=seed)

    pipeline_config = PipelineConfig(delta=config.delta, bandwidth=config.bandwidth)

    rows = []
    for i_nr, nr in enumerate(nr_values):
        for repetition in range(repetitions):
            rows.append(_run_cell(model, nr, repetition, np.random.SeedSequence([seed, i_nr, repetition]),
                                  config, pipeline_config))
        logger.info('NR %g: %d runs done', nr, repetitions)

    summary = tuple(
        _summarize(nr, [row for row in rows if row.nr == nr])
        for nr in dict.fromkeys(nr_values)
    )
    return SweepResult(rows=tuple(rows), summary=summary)


def _run_cell(model: FsmModel, nr: float, repetition: int, seed_sequence: np.random.SeedSequence,
              config: SweepConfig, pipeline_config: PipelineConfig) -> SweepRow:
    gen_seed, noise_seed = (int(s) for s in seed_sequence.generate_state(2))

    logs = generate_traces(
        model,
        config.visits_per_state,
        config.min_logs,
        config.max_len,
        gen_seed,
        stop_probability=config.stop_probability,
    )
    noisy, truth = inject_noise(logs, NoiseSpec(n_templates=config.n_templates, nr=nr, seed=noise_seed))
    result = run_pipeline(noisy, pipeline_config)
    metrics = classification_metrics(result.removed, truth)

    logger.debug('NR %g #%d: removed %s; %s', nr, repetition, sorted(result.removed), metrics)
    return SweepRow(
        nr=nr,
        repetition=repetition,
        recall=metrics.recall,
        specificity=metrics.specificity,
        achieved_nr=achieved_noise_rate(noisy, truth),
    )


def _summarize(nr: float, rows: list[SweepRow]) -> SweepSummary:
    recall = [r.recall for r in rows]
    specificity = [r.specificity for r in rows]
    return SweepSummary(
        nr=nr,
        mean_recall=_nanmean(recall),
        sd_recall=_sd(recall),
        mean_specificity=_nanmean(specificity),
        sd_specificity=_sd(specificity),
    )


def _defined(values: abc.Iterable[Optional[float]]) -> np.ndarray:
    return np.array([v for v in values if v is not None and not math.isnan(v)], dtype=float)


def _nanmean(values: abc.Iterable[Optional[float]]) -> float:
    a = _defined(values)
    return float(a.mean()) if len(a) else math.nan


def _sd(values: abc.Iterable[Optional[float]]) -> float:
    """ Sample standard deviation; 0 with a single value """
    a = _defined(values)
    if len(a) == 0:
        return math.nan
    return float(a.std(ddof=1)) if len(a) > 1 else 0.0


# region CSV

def format_rows_csv(rows: abc.Iterable[SweepRow]) -> str:
    """ Per-run results as CSV. Undefined values are empty """
    return _format_csv(ROWS_HEADER, (
        (row.nr, row.repetition, row.recall, row.specificity, row.achieved_nr)
        for row in rows
    ))


def format_summary_csv(summary: abc.Iterable[SweepSummary]) -> str:
    """ Aggregated results as CSV. Undefined values are empty """
    return _format_csv(SUMMARY_HEADER, (
        (s.nr, s.mean_recall, s.sd_recall, s.mean_specificity, s.sd_specificity)
        for s in summary
    ))


def write_sweep(result: SweepResult, rows_path: Union[str, os.PathLike], summary_path: Union[str, os.PathLike]):
    """ Write both CSV files

    Raises:
        exc.E_LOG_IO: cannot write
    """
    write_text_atomic(Path(rows_path), format_rows_csv(result.rows))
    write_text_atomic(Path(summary_path), format_summary_csv(result.summary))


def _format_csv(header: tuple[str, ...], rows: abc.Iterable[tuple]) -> str:
    f = io.StringIO()
    writer = csv.writer(f, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow([_format_value(v) for v in row])
    return f.getvalue()


def _format_value(value) -> str:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return ''
    if isinstance(value, float):
        return format(value, '.10g')
    return str(value)

# endregion
