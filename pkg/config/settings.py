"""
Django settings for the psibounds project.

Every tunable is read through python-decouple with a default, so no
environment variable is required.

For the full list of settings and their values, see
https://docs.djangoproject.com/en/5.2/ref/settings/
"""

import os
from pathlib import Path
from decouple import config

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = config('SECRET_KEY', default='django-insecure-psibounds-local-only-key')

DEBUG = config('DEBUG', default=False, cast=bool)

ALLOWED_HOSTS = config('ALLOWED_HOSTS', default='localhost,127.0.0.1', cast=lambda v: [s.strip() for s in v.split(',')])


# Application definition

INSTALLED_APPS = [
    'django.contrib.admin',
    'django.contrib.auth',
    'django.contrib.contenttypes',
    'django.contrib.sessions',
    'django.contrib.messages',
    'psibounds',
]

MIDDLEWARE = [
    'django.middleware.security.SecurityMiddleware',
    'django.contrib.sessions.middleware.SessionMiddleware',
    'django.middleware.common.CommonMiddleware',
    'django.middleware.csrf.CsrfViewMiddleware',
    'django.contrib.auth.middleware.AuthenticationMiddleware',
    'django.contrib.messages.middleware.MessageMiddleware',
]

ROOT_URLCONF = 'config.urls'

TEMPLATES = [
    {
        'BACKEND': 'django.template.backends.django.DjangoTemplates',
        'DIRS': [],
        'APP_DIRS': True,
        'OPTIONS': {
            'context_processors': [
                'django.template.context_processors.request',
                'django.contrib.auth.context_processors.auth',
                'django.contrib.messages.context_processors.messages',
            ],
        },
    },
]


# Database
# Run logs only; SQLite unless DATABASE_URL is given

database_url = config('DATABASE_URL', default=None)
if database_url and not config('USE_SQLITE', default=False, cast=bool):
    import dj_database_url

    DATABASES = {
        'default': dj_database_url.parse(database_url)
    }
else:
    DATABASES = {
        'default': {
            'ENGINE': 'django.db.backends.sqlite3',
            'NAME': config('SQLITE_PATH', default=str(BASE_DIR / 'db.sqlite3')),
        }
    }


LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = True

USE_TZ = True

STATIC_URL = 'static/'

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


# Logging
# WARNING by default so that command output stays clean

LOG_LEVEL = config('LOG_LEVEL', default='WARNING')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {module} {process:d} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'root': {
        'handlers': ['console'],
        'level': 'WARNING',
    },
    'loggers': {
        'django': {
            'handlers': ['console'],
            'level': 'WARNING',
            'propagate': False,
        },
        'psibounds': {
            'handlers': ['console'],
            'level': LOG_LEVEL,
            'propagate': False,
        },
    },
}


# Custom settings for the psibounds app
PSIBOUNDS_SETTINGS = {
    'CROSSOVER_X_CAP': config('PSIBOUNDS_CROSSOVER_X_CAP', default=10_000_000, cast=int),
    'CROSSOVER_LINEAR_LIMIT': config('PSIBOUNDS_CROSSOVER_LINEAR_LIMIT', default=100_000, cast=int),
    'CROSSOVER_RATIO': config('PSIBOUNDS_CROSSOVER_RATIO', default=1.001, cast=float),
    'CROSSOVER_TOLERANCE': config('PSIBOUNDS_CROSSOVER_TOLERANCE', default=0.001, cast=float),
    'PRECISION_DIGITS': config('PSIBOUNDS_PRECISION_DIGITS', default=6, cast=int),
    'SIEVE_LIMIT': config('PSIBOUNDS_SIEVE_LIMIT', default=100_000_000, cast=int),
    'SOLVER_TOLERANCE': config('PSIBOUNDS_SOLVER_TOLERANCE', default=1e-9, cast=float),
    'SOLVER_MAX_ITER': config('PSIBOUNDS_SOLVER_MAX_ITER', default=200, cast=int),
    'SCAN_X_CAP': config('PSIBOUNDS_SCAN_X_CAP', default=1e12, cast=float),
    'WORKERS': config('PSIBOUNDS_WORKERS', default=os.cpu_count() or 1, cast=int),
    'MINIMAL_DISCRIMINANTS_PATH': config(
        'PSIBOUNDS_MINIMAL_DISCRIMINANTS_PATH',
        default=str(BASE_DIR / 'psibounds' / 'data' / 'minimal_discriminants.json'),
    ),
    'PUBLISHED_TABLES_PATH': config(
        'PSIBOUNDS_PUBLISHED_TABLES_PATH',
        default=str(BASE_DIR / 'psibounds' / 'data' / 'published_tables.json'),
    ),
}
