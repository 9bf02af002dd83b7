""" Cleaning report: what was removed, by which stage, and why

The report is a single JSON document, written on every successful `clean`, including the case where nothing is removed.
"""

from __future__ import annotations

import os
import tempfile
from pathlib import Path
from typing import Dict, List, Optional, Union

import pydantic as pd

from logcleaner.error import exc
from logcleaner.structure.titled_enum import TitledEnum, titled
from logcleaner.translate import _


@titled(_('Template classification'))
class Classification(TitledEnum):
    GLOBALLY_PERIODIC = 'globally-periodic', _('Globally periodic')
    OPERATIONAL = 'operational', _('Operational')
    TRANSACTIONAL = 'transactional', _('Transactional')


@titled(_('Cleaning stage'), description=_('The stage that removed a template'))
class Stage(TitledEnum):
    PERIODICITY = 'periodicity', _('Periodicity analysis')
    DEPENDENCY = 'dependency', _('Dependency analysis')
    NONE = 'none', _('Kept')


# Classifications that are removed, and the only stage that may remove them
REMOVED_BY: Dict[Classification, Stage] = {
    Classification.GLOBALLY_PERIODIC: Stage.PERIODICITY,
    Classification.OPERATIONAL: Stage.DEPENDENCY,
}


class LogPeriodicityRecord(pd.BaseModel):
    """ Periodicity check of a template in one log """
    log: str
    occurrences: int = pd.Field(..., ge=0)
    mad: Optional[float] = pd.Field(None, title='Mean absolute deviation of timestamp differences')
    atd: Optional[float] = pd.Field(None, title='Average timestamp difference')
    cond1: Optional[bool] = None
    cond2: Optional[bool] = None
    cond3: Optional[bool] = None
    verdict: bool


class TemplateRecord(pd.BaseModel):
    """ How a template was classified """
    template: str
    classification: Classification
    stage: Stage
    mscore: Optional[float] = pd.Field(None,
                                       title='Maximum dependency score',
                                       description='Absent when the dependency stage did not score the template')
    periodicity: Optional[List[LogPeriodicityRecord]] = pd.Field(None,
                                                                 title='Periodicity check in every log',
                                                                 description='Absent when the periodicity stage was skipped')

    @pd.root_validator(skip_on_failure=True)
    def check_stage(cls, values):
        classification, stage = values['classification'], values['stage']
        if REMOVED_BY.get(classification, Stage.NONE) is not stage:
            raise ValueError(f'Classification {classification} cannot come from stage {stage}')
        return values


class Counts(pd.BaseModel):
    """ Entry counts over all logs """
    entries_before: int = pd.Field(..., ge=0)
    entries_removed: int = pd.Field(..., ge=0)
    entries_after: int = pd.Field(..., ge=0)

    @pd.root_validator(skip_on_failure=True)
    def check_balance(cls, values):
        if values['entries_after'] != values['entries_before'] - values['entries_removed']:
            raise ValueError('entries_after must equal entries_before - entries_removed')
        return values


class ClusterRecord(pd.BaseModel):
    """ A cluster of templates """
    members: List[str]
    center: float
    representative_score: float


class SegmentationSummary(pd.BaseModel):
    """ Clusters of the dependency stage """
    bandwidth: float
    degenerate: bool = pd.Field(...,
                                title='Single cluster',
                                description='All templates fell into one cluster: nothing was removed')
    clusters: List[ClusterRecord]


class ReportConfig(pd.BaseModel):
    """ The parameters the report was produced with """
    delta: float
    bandwidth: Union[float, str]
    skip_periodicity: bool
    skip_dependency: bool
    seed: Optional[int] = None


class CleaningReport(pd.BaseModel):
    """ The result of a cleaning run """
    config: ReportConfig
    templates: List[TemplateRecord]
    counts: Counts

    # Templates removed by each stage, sorted
    periodic: List[str]
    operational: List[str]

    # Absent when the dependency stage was skipped
    segmentation: Optional[SegmentationSummary] = None

    def template(self, name: str) -> TemplateRecord:
        """ Get the record of a template

        Raises:
            KeyError: no such template
        """
        for record in self.templates:
            if record.template == name:
                return record
        raise KeyError(name)

    @property
    def removed(self) -> List[str]:
        """ Every removed template, sorted """
        return sorted(self.periodic + self.operational)

    def write(self, path: Union[str, os.PathLike]):
        """ Write the report as JSON, atomically: readers never see a partial file

        Raises:
            exc.E_LOG_IO: cannot write
        """
        write_text_atomic(Path(path), self.json(indent=2) + '\n')

    def stage(self, path: Union[str, os.PathLike]) -> Path:
        """ Write the report next to `path`, to be moved into place with `commit_staged()`

        Raises:
            exc.E_LOG_IO: cannot write
        """
        return stage_text(Path(path), self.json(indent=2) + '\n')


def load_report(path: Union[str, os.PathLike]) -> CleaningReport:
    """ Read a report written by `CleaningReport.write()`

    Raises:
        exc.E_LOG_IO: cannot read
        exc.E_CONFIG: not a valid report
    """
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as e:
        raise exc.E_LOG_IO.format(_('Cannot read {path}: {reason}'), path=str(path), reason=str(e)) from e

    try:
        return CleaningReport.parse_raw(text)
    except pd.ValidationError as e:
        raise exc.E_CONFIG.from_pydantic_validation_error(e) from e


def write_text_atomic(path: Path, text: str):
    """ Write a file through a temporary sibling and a rename

    Raises:
        exc.E_LOG_IO: cannot write
    """
    commit_staged(stage_text(path, text), path)


def stage_text(path: Path, text: str) -> Path:
    """ Write `text` into a temporary sibling of `path`. Move it into place with `commit_staged()`

    Raises:
        exc.E_LOG_IO: cannot write, or `path` is a directory
    """
    if path.is_dir():
        raise exc.E_LOG_IO.format(_('Cannot write {path}: {reason}'), path=str(path), reason='is a directory')

    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f'.{path.name}.', suffix='.tmp')
        try:
            with os.fdopen(fd, 'wt', encoding='utf-8') as f:
                f.write(text)
        except BaseException:
            os.unlink(tmp)
            raise
    except OSError as e:
        raise exc.E_LOG_IO.format(_('Cannot write {path}: {reason}'), path=str(path), reason=str(e)) from e
    return Path(tmp)


def commit_staged(tmp: Path, path: Path):
    """ Move a file written by `stage_text()` into place. The temporary file is gone either way

    Raises:
        exc.E_LOG_IO: cannot write
    """
    try:
        os.replace(tmp, path)
    except OSError as e:
        tmp.unlink(missing_ok=True)
        raise exc.E_LOG_IO.format(_('Cannot write {path}: {reason}'), path=str(path), reason=str(e)) from e
