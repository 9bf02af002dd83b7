""" The set of errors LogCleaner reports

Convention:
* Exceptions that start with "F" are Failures: errors in the tool itself that the user cannot fix
* Exceptions that start with "E" are Errors: input or configuration errors that the user can fix

Every error carries an `exitcode`: the status the command line reports.
* 2: I/O or input format problems
* 3: invalid configuration or arguments
"""

from __future__ import annotations

import os.path
import traceback
from typing import Union, Any
from collections import abc

import pydantic

from logcleaner.translate import _

from .base import BaseApplicationError, exception_from


# Exit statuses
EXIT_FAILURE = 1
EXIT_INPUT = 2
EXIT_CONFIG = 3


# region Input errors (exit 2)

class E_NO_LOGS(BaseApplicationError):
    """ The input directory contains no log files

    Info:
        path: The directory that was scanned
    """
    exitcode = EXIT_INPUT
    title = _('No logs found')
    fixit = _('Put one structured log file per execution into the directory (*.jsonl or *.tsv)')


class E_LOG_IO(BaseApplicationError):
    """ A log, report, or model file cannot be read or written

    Info:
        path: The file that failed
    """
    exitcode = EXIT_INPUT
    title = _('Cannot access file')

    def __init__(self, error: str, fixit: str = None, *, path: str, **info):
        super().__init__(error, fixit, path=str(path), **info)


class E_LOG_FORMAT(BaseApplicationError):
    """ A log file contains a malformed line

    Info:
        path: The log file
        line: 1-based line number
        reason: What is wrong with the line
    """
    exitcode = EXIT_INPUT
    title = _('Malformed log file')
    fixit = _('Every line must be {"ts": <number>, "tpl": "<template>", "params": {...}} or "ts<TAB>tpl<TAB>k=v;k=v"')

    def __init__(self, error: str, fixit: str = None, *, path: str, line: int, reason: str, **info):
        super().__init__(error, fixit, path=str(path), line=line, reason=reason, **info)


class E_MODEL_FORMAT(BaseApplicationError):
    """ A finite state machine file is malformed or describes an invalid model

    Info:
        path: The model file, when known
    """
    exitcode = EXIT_INPUT
    title = _('Invalid state machine')


class E_DEPENDENCY_UNDEFINED(BaseApplicationError):
    """ Dependency analysis needs at least two templates

    Info:
        templates: The templates that were found
    """
    exitcode = EXIT_INPUT
    title = _('Dependency undefined')
    fixit = _('Dependency scores compare templates with each other: provide logs with at least two templates')

# endregion


# region Configuration errors (exit 3)

class E_ARGUMENT(BaseApplicationError):
    """ Wrong argument has been provided to an operation

    Info:
        name: The name of the failed argument
    """
    exitcode = EXIT_CONFIG
    title = _('Invalid argument')

    def __init__(self, error: str, fixit: str = None, *, name: str, **info):
        """
        Args:
            name: The name of the argument whose value was wrong
        """
        super().__init__(error, fixit, name=name, **info)


class E_CONFIG(BaseApplicationError):
    """ Invalid configuration

    Info:
        model: The configuration model that failed. Example: 'PipelineConfig'
        errors: The list of errors: [ {loc: tuple, msg: str, type: str}, ... ]
    """
    exitcode = EXIT_CONFIG
    title = _('Invalid configuration')

    def __init__(self, error: str = None, fixit: str = None, *, model: str, errors: list[dict], **info):
        super().__init__(
            error or _('Invalid configuration: {summary}').format(summary=_summarize_errors(errors)),
            fixit or _('Please check the options you have provided and try again'),
            model=model,
            errors=errors,
            **info
        )

    @classmethod
    def from_pydantic_validation_error(cls, pydantic_exception: pydantic.ValidationError, error: str = None, fixit: str = None, **info):
        """ Create from pydantic validation error """
        e = cls(
            error,
            fixit,
            model=pydantic_exception.model.__name__,
            errors=pydantic_exception.errors(),  # type: ignore[arg-type]
            **info
        )
        return exception_from(e, pydantic_exception)

# endregion


# region Failures (exit 1)

class F_UNEXPECTED_ERROR(BaseApplicationError):
    """ Unexpected error, probably signifying an error in the code or other sort of malfunction

    Typically, it's an unexpected Python exception converted by `converting_unexpected_errors()`

    Debug info:
        errors: List of errors, following the chain of causes
    """
    exitcode = EXIT_FAILURE
    title = _('Internal error')

    @classmethod
    def from_exception(cls, unexpected_exception: BaseException, error: str = None, fixit: str = None, **info):
        """ Create from another Exception object

        Args:
            error: error message that overrides the default one
            fixit: fixit message that overrides the default one
            **info: extra info
        """
        e = cls(
            error or str(unexpected_exception),
            fixit or _('Run again with --verbose and report the issue together with the printed trace'),
            debug_errors=list(cls._exception_cause(unexpected_exception)),
            **info
        )
        return exception_from(e, unexpected_exception)

    @classmethod
    def _exception_cause(cls, e: BaseException) -> abc.Iterator[dict]:
        for _ in range(100):
            yield {
                'type': type(e).__name__,
                'msg': str(e),
                'trace': [
                    f'{_short_filename(frame.filename)}:{frame.name}'
                    for frame in traceback.extract_tb(e.__traceback__)
                ]
            }

            # Descend into causation
            if e.__cause__:
                e = e.__cause__
            else:
                break

# endregion


def export_error_catalog(globals: dict[str, Union[type[BaseApplicationError], Any]] = globals()):
    """ Get a list of every BaseApplicationError defined in `globals` """
    return [
        value
        for name, value in globals.items()
        if not name.startswith('_')
           and (isinstance(value, type) and issubclass(value, BaseApplicationError))
           and value not in (BaseApplicationError,)
    ]


def _summarize_errors(errors: list[dict]) -> str:
    return '; '.join(
        '{}: {}'.format('.'.join(str(l) for l in error.get('loc', ())) or '(root)', error.get('msg', ''))
        for error in errors
    )


def _short_filename(filename: str) -> str:
    dir, file = os.path.split(filename)
    return os.path.join(
        os.path.basename(dir),
        file
    )

