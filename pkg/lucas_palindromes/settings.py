"""
Django settings for lucas_palindromes project.

The verifier itself is configured through the ``VERIFIER`` dict at the bottom;
everything above it is the usual Django/DRF plumbing for the management
commands, the read-only API and the stored verification runs.
"""

import os
from pathlib import Path

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.environ.get(
    "DJANGO_SECRET_KEY",
    "django-insecure-lucas-palindromes-local-development-only",
)

DEBUG = os.environ.get("DJANGO_DEBUG", "1") == "1"

ALLOWED_HOSTS = [
    host for host in os.environ.get("DJANGO_ALLOWED_HOSTS", "").split(",") if host
]


# Application definition

INSTALLED_APPS = [
    "internal.verifier",
    "rest_framework",
    "drf_yasg",
    "django.contrib.auth",
    "django.contrib.contenttypes",
    "django.contrib.staticfiles",
]

MIDDLEWARE = [
    "django.middleware.common.CommonMiddleware",
]

ROOT_URLCONF = "lucas_palindromes.urls"

REST_FRAMEWORK = {
    "DEFAULT_RENDERER_CLASSES": [
        "rest_framework.renderers.JSONRenderer",
    ],
    "DEFAULT_AUTHENTICATION_CLASSES": [],
    "DEFAULT_PERMISSION_CLASSES": [
        "rest_framework.permissions.AllowAny",
    ],
    "UNAUTHENTICATED_USER": None,
}

TEMPLATES = [
    {
        "BACKEND": "django.template.backends.django.DjangoTemplates",
        "DIRS": [],
        "APP_DIRS": True,
        "OPTIONS": {
            "context_processors": [
                "django.template.context_processors.debug",
                "django.template.context_processors.request",
            ],
        },
    },
]

WSGI_APPLICATION = "lucas_palindromes.wsgi.application"


# Database
# SQLite unless POSTGRES_HOST points at the docker-compose service.

if os.environ.get("POSTGRES_HOST"):
    DATABASES = {
        "default": {
            "ENGINE": "django.db.backends.postgresql",
            "NAME": os.environ.get("POSTGRES_DB", "postgres"),
            "HOST": os.environ["POSTGRES_HOST"],
            "PORT": os.environ.get("POSTGRES_PORT", "5432"),
            "USER": os.environ.get("POSTGRES_USER", "admin"),
            "PASSWORD": os.environ.get("POSTGRES_PASSWORD", "admin"),
        },
    }
else:
    DATABASES = {
        "default": {
            "ENGINE": "django.db.backends.sqlite3",
            "NAME": BASE_DIR / "verifier.sqlite3",
        },
    }


LANGUAGE_CODE = "en-us"

TIME_ZONE = "UTC"

USE_I18N = True

USE_TZ = True


STATIC_URL = "static/"

DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"


LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "verbose": {
            "format": "{asctime} {levelname} {name} {processName} {message}",
            "style": "{",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "verbose",
        },
    },
    "loggers": {
        "internal.verifier": {
            "handlers": ["console"],
            "level": os.environ.get("VERIFIER_LOG_LEVEL", "INFO"),
            "propagate": False,
        },
    },
}


VERIFIER = {
    # Working mantissa bits when no larger requirement is derived from k or C.
    "PRECISION_BITS": 256,
    # Ceiling for with_precision_retry doubling.
    "MAX_PRECISION_BITS": 16384,
    # Worker processes for reduction rounds and the exhaustive search.
    "PARALLELISM": int(os.environ.get("VERIFIER_PARALLELISM", os.cpu_count() or 1)),
    # Lovász constant as a fraction string.
    "LOVASZ_DELTA": "3/4",
    "C_ESCALATION_FACTOR": 10**3,
    "MAX_ESCALATIONS": 5,
    # Certificates with sqrt(delta^2 - S) - T below this share of T escalate C.
    "MIN_SLACK_RATIO": "1/10",
    # "fractional" takes {z_i} for lambda, "nearest" the distance to the nearest integer.
    "LAMBDA_RULE": "fractional",
    # Hit values with more decimal digits than this are stored as digests.
    "REPORT_DIGEST_DIGITS": 10_000,
    "REPORT_SCHEMA_VERSION": 1,
    "REPORT_DIR": BASE_DIR / "reports",
}
