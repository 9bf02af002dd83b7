""" LogCleaner settings: defaults for every tunable, overridable from the environment """

from typing import Union

import pydantic as pd


class Settings(pd.BaseSettings):
    """ Settings: read from `LOGCLEANER_*` environment variables and an optional `.env` file

    Example:
        LOGCLEANER_DELTA=0.5 logcleaner clean --in logs/ --out clean/ --report report.json
    """
    # Periodicity deviation threshold, in timestamp units.
    # 0.2 suits second-granularity timestamps
    DELTA: float = pd.Field(0.2, ge=0)

    # Mean-shift bandwidth: a positive number, 'auto', or 'range'
    BANDWIDTH: Union[pd.PositiveFloat, str] = 'auto'

    # Mean-shift convergence
    MEANSHIFT_TOL: pd.PositiveFloat = 1e-6
    MEANSHIFT_MAX_ITER: pd.PositiveInt = 500

    # Trace generation: stop probability at accepting states, coverage targets, walk length cap
    STOP_PROBABILITY: float = pd.Field(0.2, ge=0, le=1)
    VISITS_PER_STATE: pd.PositiveInt = 4
    MIN_LOGS: pd.PositiveInt = 1000
    MAX_LEN: pd.PositiveInt = 50

    # Noise injection: the number of fresh operational templates
    N_TEMPLATES: pd.PositiveInt = 5

    # Root log level
    LOG_LEVEL: str = 'WARNING'

    @pd.validator('BANDWIDTH')
    def check_bandwidth(cls, v):
        if isinstance(v, str) and v not in BANDWIDTH_RULES:
            raise ValueError(f'must be a positive number or one of: {", ".join(BANDWIDTH_RULES)}')
        return v

    @pd.validator('LOG_LEVEL')
    def check_log_level(cls, v: str):
        if v.upper() not in LOG_LEVELS:
            raise ValueError(f'must be one of: {", ".join(LOG_LEVELS)}')
        return v.upper()

    class Config:
        env_prefix = 'LOGCLEANER_'
        env_file = '.env'
        case_sensitive = True


# Named bandwidth estimation rules. See logcleaner.segmentation.estimate_bandwidth()
BANDWIDTH_RULES = ('auto', 'range')

# Names accepted by LOG_LEVEL, case-insensitive
LOG_LEVELS = ('CRITICAL', 'ERROR', 'WARNING', 'INFO', 'DEBUG', 'NOTSET')
