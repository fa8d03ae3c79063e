"""
Django settings for the gaussamp project.

Every numeric knob of the gaussamp app can be set from the environment or a
.env file in the project root; see gaussamp/conf.py for how they are read and
capped.

For the full list of Django settings and their values, see
https://docs.djangoproject.com/en/6.0/ref/settings/
"""

import os
from pathlib import Path
from dotenv import load_dotenv

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# Load environment variables from .env file in project root
load_dotenv(BASE_DIR / '.env')


def env_bool(name, default):
    return os.getenv(name, str(default)).strip().lower() in ('1', 'true', 'yes', 'on')


# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.getenv('SECRET_KEY', 'django-insecure-gaussamp-development-key-change-me')

# SECURITY WARNING: don't run with debug turned on in production!
DEBUG = os.getenv('DEBUG', 'True') == 'True'
ALLOWED_HOSTS = os.getenv('ALLOWED_HOSTS', 'localhost,127.0.0.1,testserver').split(',')


# Application definition

INSTALLED_APPS = [
    'django.contrib.contenttypes',
    'django.contrib.auth',
    'rest_framework',
    'gaussamp',
]

MIDDLEWARE = [
    'django.middleware.security.SecurityMiddleware',
    'django.middleware.common.CommonMiddleware',
    'backend.middleware.RequestLoggingMiddleware',
]

ROOT_URLCONF = 'backend.urls'

WSGI_APPLICATION = 'backend.wsgi.application'
ASGI_APPLICATION = 'backend.asgi.application'

# No models are stored; the database only satisfies Django's app loading.
DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': BASE_DIR / 'db.sqlite3',
    }
}

LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = False
USE_TZ = True

# REST Framework configuration: stateless JSON compute endpoints
REST_FRAMEWORK = {
    'DEFAULT_AUTHENTICATION_CLASSES': [],
    'DEFAULT_PERMISSION_CLASSES': [
        'rest_framework.permissions.AllowAny',
    ],
    'DEFAULT_RENDERER_CLASSES': [
        'rest_framework.renderers.JSONRenderer',
    ],
    'DEFAULT_PARSER_CLASSES': [
        'rest_framework.parsers.JSONParser',
    ],
    'UNAUTHENTICATED_USER': None,
}


# Logging
LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO').upper()

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'standard': {
            'format': '%(asctime)s %(levelname)s %(name)s: %(message)s',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'standard',
        },
    },
    'loggers': {
        'gaussamp': {
            'handlers': ['console'],
            'level': LOG_LEVEL,
            'propagate': False,
        },
        'backend': {
            'handlers': ['console'],
            'level': LOG_LEVEL,
            'propagate': False,
        },
    },
    'root': {
        'handlers': ['console'],
        'level': 'WARNING',
    },
}


# gaussamp numeric configuration (defaults mirror gaussamp.conf.DEFAULTS)

# Sizes and kernel
HAFNIAN_MAX_DIM = int(os.getenv('HAFNIAN_MAX_DIM', '50'))
HAFNIAN_CHUNK_SIZE = int(os.getenv('HAFNIAN_CHUNK_SIZE', '65536'))
HAFNIAN_THREADS = int(os.getenv('HAFNIAN_THREADS', '0'))  # 0 = numba default
HAFNIAN_COMPENSATED_SUM = env_bool('HAFNIAN_COMPENSATED_SUM', False)
PERMANENT_MAX_DIM = int(os.getenv('PERMANENT_MAX_DIM', '20'))
MATCHING_CAP = int(os.getenv('MATCHING_CAP', '16'))
MATCHING_CAP_LOOPS = int(os.getenv('MATCHING_CAP_LOOPS', '14'))
DOUBLE_VACUUM_MODES = env_bool('DOUBLE_VACUUM_MODES', True)

# Tolerances
SYMMETRY_TOLERANCE = float(os.getenv('SYMMETRY_TOLERANCE', '1e-12'))
UNITARITY_TOLERANCE = float(os.getenv('UNITARITY_TOLERANCE', '1e-10'))
CONSTRAINT_TOLERANCE = float(os.getenv('CONSTRAINT_TOLERANCE', '1e-10'))
RECONSTRUCTION_TOLERANCE = float(os.getenv('RECONSTRUCTION_TOLERANCE', '1e-8'))
SINGULARITY_TOLERANCE = float(os.getenv('SINGULARITY_TOLERANCE', '1e-12'))
DEGENERACY_TOLERANCE = float(os.getenv('DEGENERACY_TOLERANCE', '1e-9'))
ZETA_ZERO_TOLERANCE = float(os.getenv('ZETA_ZERO_TOLERANCE', '1e-14'))
IMAGINARY_TOLERANCE = float(os.getenv('IMAGINARY_TOLERANCE', '1e-10'))
ORTHOGONALITY_TOLERANCE = float(os.getenv('ORTHOGONALITY_TOLERANCE', '1e-8'))
HESSIAN_SYMMETRY_TOLERANCE = float(os.getenv('HESSIAN_SYMMETRY_TOLERANCE', '1e-10'))

# Fock-space oracle
FOCK_CUTOFF = int(os.getenv('FOCK_CUTOFF', '18'))
FOCK_MAX_AMPLITUDES = int(os.getenv('FOCK_MAX_AMPLITUDES', str(2 ** 24)))
FOCK_LEAKAGE_LIMIT = float(os.getenv('FOCK_LEAKAGE_LIMIT', '1e-4'))
VERIFY_TOLERANCE = float(os.getenv('VERIFY_TOLERANCE', '1e-6'))
