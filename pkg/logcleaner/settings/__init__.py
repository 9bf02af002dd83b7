""" Configuration and logging for LogCleaner

Example:
    from logcleaner.settings import get_settings

    settings = get_settings()
    settings.DELTA
"""

from functools import lru_cache

from .config import Settings, BANDWIDTH_RULES


@lru_cache(maxsize=None)
def get_settings() -> Settings:
    """ Load the settings once: from the environment and `.env` """
    return Settings()
