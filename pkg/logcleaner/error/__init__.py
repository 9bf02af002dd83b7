""" Application errors: errors for the end-user.

There are two sorts of exceptions:

* Application errors

    Subclasses of `BaseApplicationError`. Raised for bad input, bad configuration, and undefined analyses.
    The command line prints them to the user and exits with the error's `exitcode`.

* Python Runtime Exceptions

    Any other exception is a bug. The command line wraps it into an F_UNEXPECTED_ERROR
"""

from .base import BaseApplicationError
from . import exc
