"""
Django settings for the scc-sieve project.

The project has no web surface; Django hosts the configuration, the logging
setup, the result cache and the management commands that drive the
verification pipelines.

For the full list of settings and their values, see
https://docs.djangoproject.com/en/5.2/ref/settings/
"""

from pathlib import Path
from decouple import config, Csv  # Build paths inside the project like this: BASE_DIR / 'subdir'.

BASE_DIR = Path(__file__).resolve().parent.parent.parent


# Secret Key
SECRET_KEY = config('SECRET_KEY', default='django-insecure-scc-sieve-local-only')

# Debug Mode (also turns on the relator re-check inside twist application)
DEBUG = config('DEBUG', default=False, cast=bool)

ALLOWED_HOSTS = config('ALLOWED_HOSTS', default='localhost,127.0.0.1', cast=Csv())


# Application definition

INSTALLED_APPS = [
    'django.contrib.contenttypes',
    'django.contrib.auth',
    'rest_framework',
    'sieve',
]

# Database
# Nothing in the project persists rows; a local sqlite file keeps Django's checks happy.
DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': config('DB_NAME', default=str(BASE_DIR / 'db.sqlite3')),
    }
}

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# Django REST Framework (serializers only: reports are rendered as JSON)
REST_FRAMEWORK = {
    'UNAUTHENTICATED_USER': None,
    'DEFAULT_AUTHENTICATION_CLASSES': [],
    'DEFAULT_PERMISSION_CLASSES': [],
    'COERCE_DECIMAL_TO_STRING': False,
}


# Result cache
# Keyed by (command, parameters, catalog fingerprint, tool version)
SCC_SIEVE_CACHE = config('SCC_SIEVE_CACHE', default=str(BASE_DIR / '.sieve-cache'))

CACHES = {
    'default': {
        'BACKEND': 'django.core.cache.backends.filebased.FileBasedCache',
        'LOCATION': SCC_SIEVE_CACHE,
        'TIMEOUT': None,
        'OPTIONS': {
            'MAX_ENTRIES': config('SIEVE_CACHE_MAX_ENTRIES', default=100000, cast=int),
        },
    }
}


# Logging: standard out carries JSON reports only, so every log line goes to stderr
SIEVE_LOG_LEVEL = config('SIEVE_LOG_LEVEL', default='INFO')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {
            'format': '{asctime} {levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'stderr': {
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
            'formatter': 'plain',
        },
    },
    'loggers': {
        'sieve': {
            'handlers': ['stderr'],
            'level': SIEVE_LOG_LEVEL,
            'propagate': False,
        },
        'django': {
            'handlers': ['stderr'],
            'level': 'WARNING',
        },
    },
}


# Verification toolkit
SIEVE_VERSION = '1.0.0'

# Orbit search budgets
SIEVE_STATE_BUDGET = config('SIEVE_STATE_BUDGET', default=5_000_000, cast=int)
# genus >= 3 never returns nongeometric, so this cap only bounds inconclusive searches
SIEVE_HIGH_GENUS_STATE_BUDGET = config('SIEVE_HIGH_GENUS_STATE_BUDGET', default=20_000, cast=int)
SIEVE_HIGH_GENUS_DEPTH = config('SIEVE_HIGH_GENUS_DEPTH', default=20, cast=int)

# Ceiling on |G|^(2g) for homomorphism enumeration
SIEVE_ENUMERATION_BUDGET = config('SIEVE_ENUMERATION_BUDGET', default=4_194_304, cast=int)

# Largest group materialized as a multiplication table
SIEVE_TABLE_BUDGET = config('SIEVE_TABLE_BUDGET', default=20_000, cast=int)

# Identity checks: exhaustive up to this order, sampled beyond it
SIEVE_EXHAUSTIVE_PAIR_LIMIT = config('SIEVE_EXHAUSTIVE_PAIR_LIMIT', default=4096, cast=int)
SIEVE_RANDOM_PAIRS = config('SIEVE_RANDOM_PAIRS', default=1_000_000, cast=int)
SIEVE_RANDOM_SEED = config('SIEVE_RANDOM_SEED', default=1989, cast=int)

# Catalog location and worker pool
SIEVE_CATALOG_DIR = config('SIEVE_CATALOG_DIR', default=str(BASE_DIR / 'catalog'))
SIEVE_JOBS = config('SIEVE_JOBS', default=1, cast=int)
