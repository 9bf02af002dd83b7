""" LogCleaner: remove operational messages from structured execution logs

Two stages run one after another:

* Periodicity analysis: drops templates that occur periodically from the beginning to the end of every log
* Dependency analysis: scores how strongly every template depends on the others,
  clusters the scores, and drops the least dependent cluster

The `harness` package reproduces the accuracy experiments on logs generated from finite state machines.
"""

from importlib.metadata import version, PackageNotFoundError

try:
    __version__ = version('logcleaner')
except PackageNotFoundError:  # running from a source checkout
    __version__ = '0.0.0'

del version, PackageNotFoundError
