from .base import *  # noqa: F401,F403

DEBUG = True

SIEVE_LOG_LEVEL = config('SIEVE_LOG_LEVEL', default='DEBUG')
LOGGING['loggers']['sieve']['level'] = SIEVE_LOG_LEVEL
