""" The cleaning pipeline: periodicity analysis, then dependency analysis on what is left

Example:
    logs = load_log_set('logs/')
    result = run_pipeline(logs, PipelineConfig(delta=0.2, bandwidth=0.05))
    result.removed  # -> frozenset({'ping', 'memory'})
    report = build_report(result)
"""

from __future__ import annotations

import logging
import os
import shutil
import tempfile
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional, Union

import pydantic as pd

from logcleaner.error import exc
from logcleaner.log import LogFormat, LogSet, load_log_set, write_log_set
from logcleaner.periodicity import PeriodicityConfig, PeriodicityResult, periodicity_analysis
from logcleaner.report import (
    Classification, Stage, CleaningReport, ClusterRecord, Counts, LogPeriodicityRecord,
    ReportConfig, SegmentationSummary, TemplateRecord, commit_staged,
)
from logcleaner.segmentation import DependencyResult, MAX_ITERATIONS, TOLERANCE, dependency_analysis
from logcleaner.settings import BANDWIDTH_RULES, Settings
from logcleaner.translate import _


logger = logging.getLogger(__name__)


class PipelineConfig(pd.BaseModel):
    """ Cleaning parameters

    The directories and the report path are only needed by `clean_directory()`.
    """
    input_dir: Optional[Path] = None
    output_dir: Optional[Path] = None
    report: Optional[Path] = None
    format: LogFormat = LogFormat.AUTO

    # Periodicity deviation threshold
    delta: float = pd.Field(0.2, ge=0)

    # Mean-shift bandwidth: a positive number, or a rule name
    bandwidth: Union[pd.PositiveFloat, str] = 'auto'
    meanshift_tol: pd.PositiveFloat = TOLERANCE
    meanshift_max_iter: pd.PositiveInt = MAX_ITERATIONS

    skip_periodicity: bool = False
    skip_dependency: bool = False

    # Recorded in the report. Cleaning itself is deterministic
    seed: Optional[int] = None

    @pd.validator('bandwidth')
    def check_bandwidth(cls, v):
        if isinstance(v, str) and v not in BANDWIDTH_RULES:
            raise ValueError(f'must be a positive number or one of: {", ".join(BANDWIDTH_RULES)}')
        return v

    @pd.root_validator(skip_on_failure=True)
    def check_not_empty(cls, values):
        if values['skip_periodicity'] and values['skip_dependency']:
            raise ValueError('Both stages are skipped: the pipeline would do nothing')
        return values

    @classmethod
    def from_settings(cls, settings: Settings, **overrides) -> PipelineConfig:
        """ Defaults from settings, overridden by explicit values. `None` overrides are ignored

        Raises:
            exc.E_CONFIG: invalid values
        """
        values = dict(
            delta=settings.DELTA,
            bandwidth=settings.BANDWIDTH,
            meanshift_tol=settings.MEANSHIFT_TOL,
            meanshift_max_iter=settings.MEANSHIFT_MAX_ITER,
        )
        values.update({k: v for k, v in overrides.items() if v is not None})

        try:
            return cls(**values)
        except pd.ValidationError as e:
            raise exc.E_CONFIG.from_pydantic_validation_error(e) from e


@dataclass(frozen=True)
class PipelineResult:
    """ Everything a cleaning run has found """
    config: PipelineConfig

    # Input and output logs
    input: LogSet
    logs: LogSet

    # Stage results. None when a stage did not run
    periodicity: Optional[PeriodicityResult]
    dependency: Optional[DependencyResult]

    @property
    def periodic(self) -> frozenset[str]:
        return self.periodicity.periodic if self.periodicity else frozenset()

    @property
    def operational(self) -> frozenset[str]:
        return self.dependency.operational if self.dependency else frozenset()

    @property
    def removed(self) -> frozenset[str]:
        """ All removed templates """
        return self.periodic | self.operational


def run_pipeline(logs: LogSet, config: PipelineConfig = PipelineConfig()) -> PipelineResult:
    """ Remove operational messages from a set of logs

    Periodicity analysis runs first. Dependency analysis runs on the logs it has cleaned.
    When fewer than 2 templates are left for the dependency stage, it is skipped with a warning.

    Raises:
        exc.E_ARGUMENT: bad bandwidth
        exc.E_DEPENDENCY_UNDEFINED: the dependency stage alone was asked for, on fewer than 2 templates
    """
    periodicity = None
    if not config.skip_periodicity:
        periodicity = periodicity_analysis(logs, PeriodicityConfig(delta=config.delta))
    cleaned = periodicity.logs if periodicity else logs

    dependency = None
    if not config.skip_dependency:
        if periodicity is not None and len(cleaned.templates) < 2:
            logger.warning('Dependency analysis skipped: %d template(s) left after periodicity analysis',
                           len(cleaned.templates))
        else:
            dependency = dependency_analysis(
                cleaned,
                config.bandwidth,
                tol=config.meanshift_tol,
                max_iter=config.meanshift_max_iter,
            )
            cleaned = dependency.logs

    result = PipelineResult(
        config=config,
        input=logs,
        logs=cleaned,
        periodicity=periodicity,
        dependency=dependency,
    )
    logger.info('Removed templates: %s; entries: %d -> %d',
                sorted(result.removed) or 'none', logs.entry_count, cleaned.entry_count)
    return result


def build_report(result: PipelineResult) -> CleaningReport:
    """ Describe the result of a cleaning run """
    periodicity, dependency = result.periodicity, result.dependency
    scores = dependency.scores if dependency else {}

    records = []
    for template in sorted(result.input.templates):
        if template in result.periodic:
            classification, stage = Classification.GLOBALLY_PERIODIC, Stage.PERIODICITY
        elif template in result.operational:
            classification, stage = Classification.OPERATIONAL, Stage.DEPENDENCY
        else:
            classification, stage = Classification.TRANSACTIONAL, Stage.NONE

        records.append(TemplateRecord(
            template=template,
            classification=classification,
            stage=stage,
            mscore=scores.get(template),
            periodicity=[
                LogPeriodicityRecord(**asdict(record))
                for record in periodicity.diagnostics[template].logs
            ] if periodicity else None,
        ))

    segmentation = None
    if dependency:
        segmentation = SegmentationSummary(
            bandwidth=dependency.segmentation.bandwidth,
            degenerate=dependency.segmentation.degenerate,
            clusters=[
                ClusterRecord(
                    members=sorted(cluster.members),
                    center=cluster.center,
                    representative_score=cluster.representative_score,
                )
                for cluster in dependency.segmentation.clusters
            ],
        )

    before, after = result.input.entry_count, result.logs.entry_count
    config = result.config
    return CleaningReport(
        config=ReportConfig(
            delta=config.delta,
            bandwidth=config.bandwidth,
            skip_periodicity=config.skip_periodicity,
            skip_dependency=config.skip_dependency,
            seed=config.seed,
        ),
        templates=records,
        counts=Counts(entries_before=before, entries_removed=before - after, entries_after=after),
        periodic=sorted(result.periodic),
        operational=sorted(result.operational),
        segmentation=segmentation,
    )


def clean_directory(config: PipelineConfig) -> CleaningReport:
    """ Load logs, clean them, write cleaned logs and the report

    The output directory is replaced as a whole: on failure, it is left untouched.
    That includes a report path that cannot be written.

    Raises:
        exc.E_ARGUMENT: no input, output, or report path
        exc.E_LOG_IO, exc.E_NO_LOGS, exc.E_LOG_FORMAT: cannot load or write
        exc.E_DEPENDENCY_UNDEFINED: fewer than 2 templates
    """
    for name in ('input_dir', 'output_dir', 'report'):
        if getattr(config, name) is None:
            raise exc.E_ARGUMENT.format(_('Missing path: {name}'), name=name)
    assert config.input_dir and config.output_dir and config.report

    logs = load_log_set(config.input_dir, config.format)
    result = run_pipeline(logs, config)
    report = build_report(result)

    # The report is staged first: a report that cannot be written leaves the output untouched
    staged = report.stage(config.report)
    try:
        write_log_set_atomic(result.logs, config.output_dir)
    except BaseException:
        staged.unlink(missing_ok=True)
        raise
    commit_staged(staged, Path(config.report))
    return report


def write_log_set_atomic(logs: LogSet, directory: Union[str, os.PathLike]):
    """ Write logs into a temporary sibling directory, then move it into place

    An existing directory is replaced only once the new one is complete.

    Raises:
        exc.E_LOG_IO: cannot write
    """
    directory = Path(directory)
    try:
        directory.parent.mkdir(parents=True, exist_ok=True)
        tmp = Path(tempfile.mkdtemp(dir=directory.parent, prefix=f'.{directory.name}.'))
    except OSError as e:
        raise exc.E_LOG_IO.format(_('Cannot write to {path}: {reason}'), path=str(directory), reason=str(e)) from e

    try:
        write_log_set(logs, tmp)

        if directory.exists():
            old = Path(tempfile.mkdtemp(dir=directory.parent, prefix=f'.{directory.name}.old.'))
            os.replace(directory, old / directory.name)
            os.replace(tmp, directory)
            shutil.rmtree(old, ignore_errors=True)
        else:
            os.replace(tmp, directory)
    except OSError as e:
        raise exc.E_LOG_IO.format(_('Cannot write to {path}: {reason}'), path=str(directory), reason=str(e)) from e
    finally:
        if tmp.exists():
            shutil.rmtree(tmp, ignore_errors=True)
