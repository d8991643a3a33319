"""
Settings for stein-embed.

Every value can be overridden from the environment (or a .env file next to
the working directory) through python-decouple.
"""
import os

from decouple import config

# ========== Monte Carlo Configuration ==========

DEFAULT_SEED = config('STEIN_EMBED_SEED', default=42, cast=int)
DEFAULT_SAMPLES = config('STEIN_EMBED_SAMPLES', default=100_000, cast=int)

# 0 means one worker per CPU
MC_WORKERS = config('STEIN_EMBED_WORKERS', default=0, cast=int)
MC_CHUNK_SIZE = config('STEIN_EMBED_CHUNK_SIZE', default=10_000, cast=int)

# Global statistical tolerance in standard errors
SIGMA_TOLERANCE = config('STEIN_EMBED_SIGMA_TOLERANCE', default=4.0, cast=float)

# ========== Budgets ==========

SUBSET_BUDGET = config('STEIN_EMBED_SUBSET_BUDGET', default=10**8, cast=int)
ENUMERATION_BUDGET = config('STEIN_EMBED_ENUMERATION_BUDGET', default=1 << 16, cast=int)
MAX_ENUMERATION_N = config('STEIN_EMBED_MAX_ENUMERATION_N', default=6, cast=int)
JACOBI_MAX_SWEEPS = config('STEIN_EMBED_JACOBI_SWEEPS', default=100, cast=int)

# ========== Numerical Tolerances ==========

EIG_TOLERANCE = 1e-10
JACOBI_TOLERANCE = 1e-13
IDENTITY_TOLERANCE = 1e-12
ORACLE_TOLERANCE = 1e-10

# ========== Logging Configuration ==========

LOG_LEVEL = config('STEIN_EMBED_LOG_LEVEL', default='WARNING')
LOG_FORMAT = config('STEIN_EMBED_LOG_FORMAT', default='simple')
LOG_FILE = config('STEIN_EMBED_LOG_FILE', default='')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {module} {process:d} {thread:d} {message}',
            'style': '{',
        },
        'simple': {
            'format': '{levelname} {name} {message}',
            'style': '{',
        },
        'json': {
            '()': 'pythonjsonlogger.json.JsonFormatter',
            'format': '%(asctime)s %(name)s %(levelname)s %(message)s',
        },
    },
    'handlers': {
        'console': {
            'level': 'DEBUG',
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
            'formatter': LOG_FORMAT,
        },
    },
    'loggers': {
        'stein_embed': {
            'handlers': ['console'],
            'level': LOG_LEVEL,
            'propagate': False,
        },
    },
}

if LOG_FILE:
    LOGGING['handlers']['file'] = {
        'level': 'DEBUG',
        'class': 'logging.handlers.RotatingFileHandler',
        'filename': os.path.abspath(LOG_FILE),
        'maxBytes': 1024 * 1024 * 10,  # 10 MB
        'backupCount': 5,
        'formatter': 'verbose',
    }
    LOGGING['loggers']['stein_embed']['handlers'].append('file')


def resolve_seed(flag_value=None) -> int:
    """Seed precedence: explicit flag, then STEIN_EMBED_SEED, then 42."""
    if flag_value is not None:
        return int(flag_value)
    return DEFAULT_SEED


def resolve_workers(flag_value=None) -> int:
    workers = MC_WORKERS if flag_value is None else int(flag_value)
    if workers <= 0:
        workers = os.cpu_count() or 1
    return workers
