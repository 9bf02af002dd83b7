import logging.config
from typing import Union


LOGGING_CONFIG_DICT = {
    'version': 1,
    'disable_existing_loggers': False,

    # Config for logging.root: all messages from `logcleaner.*` loggers propagate here.
    'root': {
        'level': logging.WARNING,
        'handlers': [
            'console',
        ],
    },
    'formatters': {
        'standard': {
            'format': "%(levelname)s %(name)s: %(message)s",
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'standard',
            'level': logging.DEBUG,
            # stdout carries command output (JSON, tables); diagnostics go to stderr
            'stream': 'ext://sys.stderr',
        },
    },
}


def basicConfig(level: Union[int, str] = logging.WARNING):
    """ Do the logging configuration the command line is happy with

    Args:
        level: Root level, e.g. logging.INFO or 'DEBUG'
    """
    logging.config.dictConfig(LOGGING_CONFIG_DICT)
    logging.root.setLevel(level)
